#include "ebe/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ebe/errors.hpp"
#include "ebe/kernels.hpp"

namespace ebe {

ComplexMatrix gibbs_state(const ComplexMatrix& h, double T) {
  require(T > 0.0 && !std::isnan(T), "gibbs_state: temperature must be > 0");
  const auto eig = hermitian_eig(h);
  const std::size_t n = h.dim();
  // Shift by the ground energy so the largest weight is exactly 1.
  std::vector<double> w(n);
  double z = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = std::isinf(T) ? 1.0 : std::exp(-(eig.values[k] - eig.values[0]) / T);
    z += w[k];
  }
  ComplexMatrix rho(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double p = w[k] / z;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        rho(r, c) += p * eig.vectors(r, k) * std::conj(eig.vectors(c, k));
  }
  return rho;
}

ComplexMatrix two_level_stationary_analytic(const TwoLevelSystem& sys) {
  sys.validate();
  const double s = sys.gamma_p + sys.gamma_m;
  require(s > 0.0, "two_level_stationary_analytic: gamma_p + gamma_m must be > 0");
  const double lambda = (sys.gamma_p - sys.gamma_m) / s;
  ComplexMatrix rho = ComplexMatrix::identity(2);
  rho *= 0.5;
  rho += cplx(lambda / sys.E) * sys.hamiltonian();
  return rho;
}

std::optional<double> detailed_balance_temperature(const TwoLevelSystem& sys) {
  if (sys.gamma_p == sys.gamma_m) {
    if (sys.gamma_p == 0.0) return std::nullopt;
    return std::numeric_limits<double>::infinity();
  }
  if (sys.gamma_p > sys.gamma_m || sys.gamma_p == 0.0) return std::nullopt;
  return sys.E / std::log(sys.gamma_m / sys.gamma_p);
}

FixedPointReport fixed_point(const RhsSpec& spec, std::optional<double> bath_T) {
  const ComplexMatrix s = build_superoperator(spec);
  const auto eig = general_eig(s);
  const std::size_t n = spec.dim();

  std::size_t best = 0;
  for (std::size_t k = 1; k < eig.values.size(); ++k)
    if (std::abs(eig.values[k]) < std::abs(eig.values[best])) best = k;
  const double null_abs = std::abs(eig.values[best]);
  if (null_abs > 1e-6)
    throw NumericalError("fixed_point: no superoperator eigenvalue within 1e-6 of zero (closest " +
                         std::to_string(null_abs) + ")");

  std::vector<cplx> v(n * n);
  for (std::size_t r = 0; r < n * n; ++r) v[r] = eig.vectors(r, best);
  ComplexMatrix rho = devectorize(v, n);
  const cplx tr = rho.trace();
  if (std::abs(tr) < 1e-8)
    throw NumericalError("fixed_point: null vector is traceless; stationary state not normalizable");
  rho *= 1.0 / tr;
  ComplexMatrix sym = rho + rho.adjoint();
  sym *= 0.5;

  FixedPointReport report{sym};
  report.null_eigenvalue = null_abs;
  report.multiplicity = 0;
  report.spectral_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    if (std::abs(eig.values[k]) <= kNullTolerance) ++report.multiplicity;
    if (k != best) report.spectral_gap = std::min(report.spectral_gap, -eig.values[k].real());
  }
  report.multiplicity = std::max<std::size_t>(report.multiplicity, 1);
  if (eig.values.size() == 1) report.spectral_gap = 0.0;

  ComplexMatrix rhs(n);
  master_rhs_into(report.rho_stationary, spec, rhs);
  report.residual = rhs.norm();
  report.commutator_norm = commutator(spec.hamiltonian, report.rho_stationary).norm();

  if (!bath_T && spec.kind == DissipatorKind::EBE2)
    bath_T = detailed_balance_temperature(std::get<TwoLevelSystem>(spec.payload));
  report.gibbs_distance = bath_T ? trace_distance(report.rho_stationary,
                                                  gibbs_state(spec.hamiltonian, *bath_T))
                                 : std::numeric_limits<double>::quiet_NaN();
  return report;
}

}  // namespace ebe
