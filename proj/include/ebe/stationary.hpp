#pragma once

#include <optional>

#include "ebe/dissipators.hpp"
#include "ebe/linalg.hpp"
#include "ebe/systems.hpp"

namespace ebe {

/// exp(-H/T) / Tr exp(-H/T). T = +inf gives the maximally mixed state.
ComplexMatrix gibbs_state(const ComplexMatrix& h, double T);

/// 1/2 I + (gp - gm)/(gp + gm) H/E
ComplexMatrix two_level_stationary_analytic(const TwoLevelSystem& sys);

/// Temperature at which the rates of a two-level system satisfy detailed
/// balance, E / ln(gm/gp). Equal rates give +inf; empty when gp > gm or both
/// rates vanish.
std::optional<double> detailed_balance_temperature(const TwoLevelSystem& sys);

struct FixedPointReport {
  ComplexMatrix rho_stationary;
  double residual = 0.0;         // ||master_rhs(rho)||
  double gibbs_distance = 0.0;   // trace distance to the Gibbs state (NaN without a bath T)
  double spectral_gap = 0.0;     // -max Re(lambda) over the remaining eigenvalues
  double null_eigenvalue = 0.0;  // |lambda| of the selected eigenvalue
  std::size_t multiplicity = 1;  // eigenvalues with |lambda| <= kNullTolerance
  double commutator_norm = 0.0;  // ||[H, rho]||
};

inline constexpr double kNullTolerance = 1e-10;

/// Stationary state from the eigenvector of the superoperator whose eigenvalue
/// is closest to zero. Throws NumericalError if no eigenvalue lies within 1e-6
/// of zero. `bath_T`, when given, is used for gibbs_distance.
FixedPointReport fixed_point(const RhsSpec& spec, std::optional<double> bath_T = std::nullopt);

}  // namespace ebe
