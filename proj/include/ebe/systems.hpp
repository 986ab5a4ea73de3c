#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "ebe/linalg.hpp"

namespace ebe {

/// Two-level system: gap E, unit Bloch direction eps, bath exchange rates and
/// an optional pure-dephasing rate.
struct TwoLevelSystem {
  double E = 1.0;
  std::array<double, 3> eps{0.0, 0.0, 1.0};  // (x, y, z)
  double gamma_p = 0.0;                      // rate of upward jumps
  double gamma_m = 0.0;                      // rate of downward jumps
  double Gamma_pd = 0.0;

  /// Checks the invariants; throws ValidationError.
  void validate() const;
  ComplexMatrix hamiltonian() const;
};

struct JumpOperatorPair {
  ComplexMatrix sigma_p;
  ComplexMatrix sigma_m;
};

struct BathModel {
  double gamma = 1.0;  // coupling strength
  double T = 1.0;      // bath temperature, k_B = 1

  void validate() const;
};

/// One pairwise transition of a multi-level system. Level j lies above level i.
struct TransitionSpec {
  std::size_t i = 0;
  std::size_t j = 1;
  double gamma_p = 0.0;
  double gamma_m = 0.0;
  double E_t = 0.0;  // energies[j] - energies[i], filled in by make_ladder
};

/// N-level system with diagonal Hamiltonian and an explicit transition list.
struct LadderSystem {
  std::vector<double> energies;
  std::vector<TransitionSpec> transitions;

  std::size_t levels() const noexcept { return energies.size(); }
  ComplexMatrix hamiltonian() const;
  void validate() const;
};

/// Builds a validated LadderSystem; each transition's E_t is computed from the
/// energies. Transitions may be given in either orientation.
LadderSystem make_ladder(std::vector<double> energies, std::vector<TransitionSpec> transitions);

enum class CouplingKind { Harmonic, Constant, Table };

/// Per-transition coupling gamma_i for a nearest-neighbour ladder.
struct CouplingRule {
  CouplingKind kind = CouplingKind::Harmonic;
  double gamma = 1.0;
  std::vector<double> table;  // used when kind == Table

  static CouplingRule harmonic(double gamma) { return {CouplingKind::Harmonic, gamma, {}}; }
  static CouplingRule constant(double gamma) { return {CouplingKind::Constant, gamma, {}}; }
  static CouplingRule from_table(std::vector<double> t) {
    return {CouplingKind::Table, 0.0, std::move(t)};
  }

  /// gamma_0 .. gamma_{transitions-1}.
  std::vector<double> materialize(std::size_t transitions) const;
};

/// (E/2)(eps_z sz + eps_x sx + eps_y sy). eps is renormalized after the
/// |eps| = 1 check (1e-9).
ComplexMatrix build_two_level_hamiltonian(double E, const std::array<double, 3>& eps);

/// Canonically scaled jump operators sigma_p = |s1><s0| from unit eigenvectors.
JumpOperatorPair jump_operators(const ComplexMatrix& h);

struct AlgebraReport {
  double sigma_p_squared = 0.0;  // ||sp^2||
  double sigma_m_squared = 0.0;  // ||sm^2||
  double commutator = 0.0;       // ||[sp, sm] - 2H/E||
  double anticommutator = 0.0;   // ||{sp, sm} - I||
  double triple_p = 0.0;         // ||sp sm sp - sp||
  double triple_m = 0.0;         // ||sm sp sm - sm||
  double eigenoperator = 0.0;    // ||[H, sp] - E sp|| / E

  double max_residual() const noexcept;
  bool passed(double tolerance = tol::kAlgebra) const noexcept { return max_residual() <= tolerance; }
};

AlgebraReport verify_jump_algebra(const JumpOperatorPair& pair, const ComplexMatrix& h, double E);

/// Fermi distribution 1/(exp(E/T) + 1), evaluated without overflow.
double fermi(double E, double T);

struct RatePair {
  double gamma_p;
  double gamma_m;
};

/// gamma_p = gamma f(E), gamma_m = gamma (1 - f(E)).
RatePair rates_from_bath(const BathModel& bath, double E);

/// Truncated ladder 0, E, ..., (N-1)E with nearest-neighbour transitions and
/// thermal rates gamma_i f(E), gamma_i (1 - f(E)).
LadderSystem build_oscillator(std::size_t levels, double spacing, const CouplingRule& coupling,
                              const BathModel& bath);

/// Partial projector onto the two levels of one transition.
class TransitionProjector {
 public:
  TransitionProjector(std::size_t i, std::size_t j, std::size_t levels);

  /// I_t = |i><i| + |j><j|
  const ComplexMatrix& identity() const noexcept { return identity_; }
  /// I_t M I_t, used for both the partial Hamiltonian and the partial state.
  ComplexMatrix project(const ComplexMatrix& m) const;

  std::size_t lower() const noexcept { return i_; }
  std::size_t upper() const noexcept { return j_; }

 private:
  std::size_t i_, j_;
  ComplexMatrix identity_;
};

TransitionProjector transition_projector(const TransitionSpec& t, std::size_t levels);

std::string to_string(CouplingKind kind);

}  // namespace ebe
