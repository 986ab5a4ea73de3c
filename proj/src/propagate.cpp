#include "ebe/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "ebe/errors.hpp"

namespace ebe {

namespace {

constexpr double kGrowthLimit = 1e6;

ComplexMatrix symmetrized(const ComplexMatrix& m) {
  ComplexMatrix out = m + m.adjoint();
  out *= 0.5;
  return out;
}

void check_finite(const ComplexMatrix& m, double t) {
  if (!m.all_finite())
    throw NumericalError("propagation produced NaN/Inf at t = " + std::to_string(t));
}

std::size_t top_level(const RhsSpec& spec) {
  const auto& sys = std::get<LadderSystem>(spec.payload);
  return static_cast<std::size_t>(std::max_element(sys.energies.begin(), sys.energies.end()) -
                                  sys.energies.begin());
}

}  // namespace

std::string to_string(Method method) { return method == Method::RK4 ? "rk4" : "expm"; }

void validate_state(const ComplexMatrix& rho) {
  require(rho.all_finite(), "state: entries must be finite");
  require(rho.is_hermitian(tol::kHermitian), "state: density matrix must be Hermitian");
  require(std::abs(rho.trace() - 1.0) <= tol::kTrace, "state: trace must equal 1");
  require(hermitian_eigenvalues(rho).front() >= -tol::kPsd,
          "state: density matrix must be positive semidefinite");
}

ComplexMatrix step_rk4(const RhsSpec& spec, const ComplexMatrix& rho, double dt) {
  require(dt > 0.0 && std::isfinite(dt), "step_rk4: dt must be > 0");
  const std::size_t n = rho.dim();
  ComplexMatrix k1(n), k2(n), k3(n), k4(n);
  master_rhs_into(rho, spec, k1);
  master_rhs_into(rho + cplx(0.5 * dt) * k1, spec, k2);
  master_rhs_into(rho + cplx(0.5 * dt) * k2, spec, k3);
  master_rhs_into(rho + cplx(dt) * k3, spec, k4);

  ComplexMatrix next = rho;
  const double w = dt / 6.0;
  auto out = next.data();
  const auto a = k1.data(), b = k2.data(), c = k3.data(), d = k4.data();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += w * (a[k] + 2.0 * b[k] + 2.0 * c[k] + d[k]);
  next = symmetrized(next);
  check_finite(next, dt);
  return next;
}

StepDiagnostics diagnose(const RhsSpec& spec, const ComplexMatrix& rho) {
  StepDiagnostics d;
  d.trace_deviation = std::abs(rho.trace() - 1.0);
  d.hermiticity_deviation = (rho - rho.adjoint()).max_abs();
  d.min_eigenvalue = hermitian_eigenvalues(symmetrized(rho)).front();
  if (spec.kind == DissipatorKind::EBEN) {
    const std::size_t top = top_level(spec);
    d.top_population = rho(top, top).real();
  }
  return d;
}

Trajectory propagate(const RhsSpec& spec, const ComplexMatrix& rho0, double t_final, double dt,
                     Method method, std::size_t record_every) {
  spec.validate();
  require(rho0.dim() == spec.dim(), "propagate: state dimension does not match spec");
  validate_state(rho0);
  require(std::isfinite(t_final) && t_final >= 0.0, "propagate: t_final must be >= 0");
  require(std::isfinite(dt) && dt > 0.0, "propagate: dt must be > 0");
  require(record_every >= 1, "propagate: record_every must be >= 1");

  // Number of full steps; a remainder below 1e-9 dt counts as rounding.
  auto full_steps = static_cast<std::size_t>(std::floor(t_final / dt + 1e-9));
  double remainder = t_final - static_cast<double>(full_steps) * dt;
  if (remainder < 1e-9 * dt) remainder = 0.0;

  const std::size_t n = spec.dim();
  ComplexMatrix step_propagator(1), last_propagator(1);
  if (method == Method::Expm) {
    const ComplexMatrix s = build_superoperator(spec);
    step_propagator = matrix_exp(cplx(dt) * s);
    if (remainder > 0.0) last_propagator = matrix_exp(cplx(remainder) * s);
  }

  const double initial_norm = std::max(rho0.norm(), 1e-300);
  Trajectory traj;
  auto record = [&](double t, const ComplexMatrix& rho) {
    traj.times.push_back(t);
    traj.states.push_back(rho);
    const auto d = diagnose(spec, rho);
    traj.positivity_warning |= d.min_eigenvalue < -tol::kPsd;
    traj.truncation_warning |= d.top_population > kTruncationLeak;
    traj.diagnostics.push_back(d);
  };

  auto advance = [&](const ComplexMatrix& rho, double h, const ComplexMatrix& p, double t) {
    ComplexMatrix next(n);
    if (method == Method::RK4) {
      next = step_rk4(spec, rho, h);
    } else {
      next = symmetrized(devectorize(matvec(p, vectorize(rho)), n));
      check_finite(next, t);
    }
    if (next.norm() > kGrowthLimit * initial_norm)
      throw NumericalError("propagation unstable: state norm grew beyond 1e6x at t = " +
                           std::to_string(t));
    return next;
  };

  ComplexMatrix rho = rho0;
  record(0.0, rho);
  for (std::size_t k = 1; k <= full_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    rho = advance(rho, dt, step_propagator, t);
    if (k % record_every == 0 || (k == full_steps && remainder == 0.0)) record(t, rho);
  }
  if (remainder > 0.0) {
    rho = advance(rho, remainder, last_propagator, t_final);
    record(t_final, rho);
  }
  return traj;
}

}  // namespace ebe
