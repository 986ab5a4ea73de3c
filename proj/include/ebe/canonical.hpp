#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ebe/propagate.hpp"
#include "ebe/systems.hpp"

namespace ebe {

inline constexpr double kPopulationFloor = 1e-14;

/// r_i = ln(p_{i+1}/p_i); entries touching a population below 1e-14 are empty.
std::vector<std::optional<double>> ratio_profile(std::span<const double> p);

/// delta = ln(a (1 - f) / f): zero iff a equals the bath ratio exp(-E/T_bath).
double delta_parameter(double a, const BathModel& bath, double E);

struct InvarianceCheck {
  bool holds = false;
  std::vector<double> defect;  // gamma_{i+1} - gamma_i - gamma_0
};

/// Whether a ladder with couplings gamma_i keeps the generalized Gibbs form.
InvarianceCheck invariance_condition(std::span<const double> gammas);

/// d(ln a)/dt = gamma0 (a (1 - f) + f/a - 1).
double thermalization_ode_rhs(double a, const BathModel& bath, double E, double gamma0);

/// d(lambda)/dt = -(gp + gm) lambda + (gp - gm) for rho = I/2 + lambda H/E.
double lambda_ode_rhs(double lambda, const TwoLevelSystem& sys);

/// lambda(t) = lambda* + (lambda0 - lambda*) exp(-(gp + gm) t).
double lambda_solution(double lambda0, double t, const TwoLevelSystem& sys);

/// lambda = 2 Tr(rho H) / E, the coefficient of H/E in rho.
double lambda_from_state(const ComplexMatrix& rho, const TwoLevelSystem& sys);

struct CanonicalOptions {
  double t_final = 30.0;
  double dt = 1e-3;
  Method method = Method::RK4;
  std::size_t record_every = 100;
  /// Ratio entries whose upper level lies within this many levels of the top
  /// are left out of the uniformity and a(t) estimates. Defaults to N/2.
  std::optional<std::size_t> edge_margin;
};

struct CanonicalDiagnostics {
  std::vector<double> times;
  std::vector<std::vector<std::optional<double>>> ratio_profiles;
  std::vector<double> mean_ratio;         // mean of the clean profile entries (ln a)
  std::vector<double> max_nonuniformity;  // max |r_i - mean| over clean entries
  std::vector<double> a_series;           // exp(mean_ratio)
  std::vector<double> delta_series;
  std::vector<double> ln_a_ode;  // one-variable thermalization equation
  std::vector<double> top_population;
  std::vector<bool> clean;  // truncation leak below 1e-6 at this time
  std::size_t clean_entries = 0;  // ratio entries 0 .. clean_entries-1 are used
  double max_ode_deviation = 0.0;   // max |ln a_ode - mean_ratio| over clean times
  double max_clean_nonuniformity = 0.0;
};

/// Propagates the Gibbs state at T0 under the multi-level EBE of a
/// nearest-neighbour ladder coupled to `bath`, tracking how far the level
/// populations stray from a single geometric ratio.
CanonicalDiagnostics canonical_experiment(const LadderSystem& sys, const BathModel& bath,
                                          double T0, const CanonicalOptions& options = {});

}  // namespace ebe
