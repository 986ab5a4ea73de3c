#pragma once

#include <string>
#include <vector>

#include "ebe/dissipators.hpp"
#include "ebe/kernels.hpp"
#include "ebe/linalg.hpp"

namespace ebe {

enum class Method { RK4, Expm };

std::string to_string(Method method);

struct StepDiagnostics {
  double trace_deviation = 0.0;        // |Tr rho - 1|
  double hermiticity_deviation = 0.0;  // max |rho - rho^+|
  double min_eigenvalue = 0.0;
  double top_population = 0.0;  // population of the highest ladder level; 0 for other specs
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
  std::vector<StepDiagnostics> diagnostics;
  bool positivity_warning = false;  // some min eigenvalue < -1e-8
  bool truncation_warning = false;  // some top-level population > 1e-6

  std::size_t size() const noexcept { return times.size(); }
};

inline constexpr double kTruncationLeak = 1e-6;

/// One classical RK4 step followed by symmetrization. The trace is left alone.
ComplexMatrix step_rk4(const RhsSpec& spec, const ComplexMatrix& rho, double dt);

/// Evolves rho0 to t_final in steps of dt (the last step is shortened if dt
/// does not divide t_final) and records every `record_every`-th step plus the
/// final one. Expm propagates exactly with exp(S dt).
Trajectory propagate(const RhsSpec& spec, const ComplexMatrix& rho0, double t_final, double dt,
                     Method method = Method::Expm, std::size_t record_every = 1);

StepDiagnostics diagnose(const RhsSpec& spec, const ComplexMatrix& rho);

/// Throws ValidationError unless rho is Hermitian, trace one and PSD within
/// the default tolerances.
void validate_state(const ComplexMatrix& rho);

}  // namespace ebe
