#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ebe/linalg.hpp"
#include "ebe/systems.hpp"

namespace ebe {

/// A Lindblad jump operator with its (non-negative) rate.
struct Jump {
  ComplexMatrix op;
  double rate;
};

/// sum_j gamma_j (L rho L^+ - 1/2 {L^+ L, rho})
ComplexMatrix gkls_dissipator(const ComplexMatrix& rho, std::span<const Jump> jumps);

/// Dissipative part of the two-level elemental Bloch equation:
///
///   -(gp + gm)(rho - Tr(rho) I/2) + (gp - gm) Tr(rho) H/E + (gp + gm)[H,[H,rho]]/(2E^2)
///
/// built from commutators only, no jump operators. The Tr(rho) factors make
/// the map linear; on trace-one states they reduce to I/2 and H/E.
ComplexMatrix ebe_two_level(const ComplexMatrix& rho, const TwoLevelSystem& sys);
ComplexMatrix ebe_two_level(const ComplexMatrix& rho, const ComplexMatrix& h, double E,
                            double gamma_p, double gamma_m);

/// Multi-level elemental Bloch dissipator: the two-level form applied to each
/// transition's partial state I_t rho I_t and summed in transition order.
ComplexMatrix ebe_multi_level(const ComplexMatrix& rho, const LadderSystem& sys);

/// Pure dephasing -Gamma [H,[H,rho]] for a dephasing rate Gamma >= 0.
ComplexMatrix pure_dephasing(const ComplexMatrix& rho, const ComplexMatrix& h, double Gamma);

/// {(sigma_p, gamma_p), (sigma_m, gamma_m)} with canonically scaled operators.
std::vector<Jump> canonical_jumps(const TwoLevelSystem& sys);

/// |j><i| at gamma_p and |i><j| at gamma_m for every transition. Agrees with
/// ebe_multi_level on states without coherences that straddle a transition block.
std::vector<Jump> pairwise_jumps(const LadderSystem& sys);

enum class DissipatorKind { GKLS, EBE2, EBEN };

std::string to_string(DissipatorKind kind);

/// Everything needed to evaluate d rho / dt.
struct RhsSpec {
  ComplexMatrix hamiltonian;
  DissipatorKind kind = DissipatorKind::GKLS;
  std::variant<std::vector<Jump>, TwoLevelSystem, LadderSystem> payload;
  bool include_unitary = true;
  double Gamma_pd = 0.0;

  std::size_t dim() const noexcept { return hamiltonian.dim(); }
  void validate() const;

  /// Two-level EBE; Gamma_pd taken from the system.
  static RhsSpec ebe2(const TwoLevelSystem& sys);
  /// GKLS with the canonical jump pair of a two-level system.
  static RhsSpec gkls_two_level(const TwoLevelSystem& sys);
  static RhsSpec eben(const LadderSystem& sys, double Gamma_pd = 0.0);
  static RhsSpec gkls(ComplexMatrix h, std::vector<Jump> jumps, double Gamma_pd = 0.0);
  static RhsSpec closed(ComplexMatrix h);
};

/// -i[H, rho] (if enabled) + dissipator + pure dephasing.
ComplexMatrix master_rhs(const ComplexMatrix& rho, const RhsSpec& spec);

/// Same as master_rhs but writes into `out` (resized by the caller) and skips
/// spec validation; the hot path for batched and superoperator evaluation.
void master_rhs_into(const ComplexMatrix& rho, const RhsSpec& spec, ComplexMatrix& out);

}  // namespace ebe
