#include "ebe/systems.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "ebe/errors.hpp"

namespace ebe {

namespace {

constexpr double kEpsNormTol = 1e-9;

bool finite_nonnegative(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

void TwoLevelSystem::validate() const {
  require(std::isfinite(E) && E > 0.0, "two-level system: E must be > 0");
  const double n = std::hypot(eps[0], eps[1], eps[2]);
  require(std::abs(n - 1.0) <= kEpsNormTol,
          "two-level system: eps must be a unit vector (|eps| = 1 within 1e-9)");
  require(finite_nonnegative(gamma_p), "two-level system: gamma_p must be finite and >= 0");
  require(finite_nonnegative(gamma_m), "two-level system: gamma_m must be finite and >= 0");
  require(finite_nonnegative(Gamma_pd), "two-level system: Gamma_pd must be finite and >= 0");
}

ComplexMatrix TwoLevelSystem::hamiltonian() const { return build_two_level_hamiltonian(E, eps); }

void BathModel::validate() const {
  require(finite_nonnegative(gamma), "bath: gamma must be finite and >= 0");
  require(T > 0.0 && !std::isnan(T), "bath: temperature must be > 0");
}

ComplexMatrix LadderSystem::hamiltonian() const { return ComplexMatrix::diagonal(energies); }

void LadderSystem::validate() const {
  const std::size_t n = levels();
  require(n >= 2, "ladder: at least two levels required");
  for (double e : energies) require(std::isfinite(e), "ladder: energies must be finite");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& t : transitions) {
    require(t.i < n && t.j < n, "ladder: transition index out of range");
    require(t.i != t.j, "ladder: transition must connect two distinct levels");
    require(seen.emplace(std::min(t.i, t.j), std::max(t.i, t.j)).second,
            "ladder: duplicate transition " + std::to_string(t.i) + "-" + std::to_string(t.j));
    require(t.E_t > 0.0 && std::abs(t.E_t - (energies[t.j] - energies[t.i])) <=
                               1e-12 * std::max(1.0, std::abs(t.E_t)),
            "ladder: transition " + std::to_string(t.i) + "-" + std::to_string(t.j) +
                " must have E_t = energies[j] - energies[i] > 0");
    require(finite_nonnegative(t.gamma_p) && finite_nonnegative(t.gamma_m),
            "ladder: transition rates must be finite and >= 0");
  }
}

LadderSystem make_ladder(std::vector<double> energies, std::vector<TransitionSpec> transitions) {
  LadderSystem sys{std::move(energies), std::move(transitions)};
  const std::size_t n = sys.levels();
  for (auto& t : sys.transitions) {
    require(t.i < n && t.j < n, "ladder: transition index out of range");
    if (sys.energies[t.j] < sys.energies[t.i]) {
      // Orient so j is the upper level; the up/down rates swap with it.
      std::swap(t.i, t.j);
      std::swap(t.gamma_p, t.gamma_m);
    }
    t.E_t = sys.energies[t.j] - sys.energies[t.i];
  }
  sys.validate();
  return sys;
}

std::vector<double> CouplingRule::materialize(std::size_t transitions) const {
  std::vector<double> g(transitions);
  switch (kind) {
    case CouplingKind::Harmonic:
      for (std::size_t i = 0; i < transitions; ++i) g[i] = static_cast<double>(i + 1) * gamma;
      break;
    case CouplingKind::Constant:
      std::fill(g.begin(), g.end(), gamma);
      break;
    case CouplingKind::Table:
      require(table.size() >= transitions, "coupling table: needs one entry per transition (" +
                                               std::to_string(transitions) + ")");
      std::copy_n(table.begin(), transitions, g.begin());
      break;
  }
  for (double x : g) require(finite_nonnegative(x), "coupling: gamma_i must be finite and >= 0");
  return g;
}

ComplexMatrix build_two_level_hamiltonian(double E, const std::array<double, 3>& eps) {
  require(std::isfinite(E) && E > 0.0, "build_two_level_hamiltonian: E must be > 0");
  const double n = std::hypot(eps[0], eps[1], eps[2]);
  require(n > 0.0, "build_two_level_hamiltonian: eps must be nonzero");
  require(std::abs(n - 1.0) <= kEpsNormTol,
          "build_two_level_hamiltonian: |eps| must equal 1 within 1e-9");
  const double ex = eps[0] / n, ey = eps[1] / n, ez = eps[2] / n;
  const double h = 0.5 * E;
  return {{h * ez, cplx(h * ex, -h * ey)}, {cplx(h * ex, h * ey), -h * ez}};
}

JumpOperatorPair jump_operators(const ComplexMatrix& h) {
  require(h.dim() == 2, "jump_operators: Hamiltonian must be 2x2");
  require(h.is_hermitian(tol::kHermitian), "jump_operators: Hamiltonian must be Hermitian");
  require(std::abs(h.trace()) <= tol::kHermitian * std::max(1.0, h.max_abs()),
          "jump_operators: Hamiltonian must be traceless");
  const auto eig = hermitian_eig(h);
  require(eig.values[1] - eig.values[0] > 1e-12, "jump_operators: Hamiltonian is degenerate");

  // sigma_p = |s1><s0|, s0 the lower eigenvector.
  ComplexMatrix sp(2);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) sp(r, c) = eig.vectors(r, 1) * std::conj(eig.vectors(c, 0));
  ComplexMatrix sm = sp.adjoint();
  return {std::move(sp), std::move(sm)};
}

double AlgebraReport::max_residual() const noexcept {
  return std::max({sigma_p_squared, sigma_m_squared, commutator, anticommutator, triple_p,
                   triple_m, eigenoperator});
}

AlgebraReport verify_jump_algebra(const JumpOperatorPair& pair, const ComplexMatrix& h, double E) {
  const auto& sp = pair.sigma_p;
  const auto& sm = pair.sigma_m;
  const auto id = ComplexMatrix::identity(h.dim());
  AlgebraReport r;
  r.sigma_p_squared = (sp * sp).norm();
  r.sigma_m_squared = (sm * sm).norm();
  r.commutator = (commutator(sp, sm) - (2.0 / E) * h).norm();
  r.anticommutator = (anticommutator(sp, sm) - id).norm();
  r.triple_p = (sp * sm * sp - sp).norm();
  r.triple_m = (sm * sp * sm - sm).norm();
  r.eigenoperator = (commutator(h, sp) - cplx(E) * sp).norm() / E;
  return r;
}

double fermi(double E, double T) {
  require(T > 0.0 && !std::isnan(T), "fermi: temperature must be > 0");
  const double x = E / T;
  if (x > 0.0) {
    const double w = std::exp(-x);
    return w / (1.0 + w);
  }
  return 1.0 / (std::exp(x) + 1.0);
}

RatePair rates_from_bath(const BathModel& bath, double E) {
  bath.validate();
  require(E > 0.0, "rates_from_bath: E must be > 0");
  // 1 - f(E) = f(-E); evaluating it directly keeps gamma_p/gamma_m = exp(-E/T) to round-off.
  return {bath.gamma * fermi(E, bath.T), bath.gamma * fermi(-E, bath.T)};
}

LadderSystem build_oscillator(std::size_t levels, double spacing, const CouplingRule& coupling,
                              const BathModel& bath) {
  require(levels >= 2, "build_oscillator: N must be >= 2");
  require(std::isfinite(spacing) && spacing > 0.0, "build_oscillator: spacing must be > 0");
  bath.validate();
  const auto gammas = coupling.materialize(levels - 1);
  const double f = fermi(spacing, bath.T);
  const double fc = fermi(-spacing, bath.T);

  std::vector<double> energies(levels);
  for (std::size_t k = 0; k < levels; ++k) energies[k] = static_cast<double>(k) * spacing;
  std::vector<TransitionSpec> transitions;
  transitions.reserve(levels - 1);
  for (std::size_t k = 0; k + 1 < levels; ++k)
    transitions.push_back({k, k + 1, gammas[k] * f, gammas[k] * fc, 0.0});
  return make_ladder(std::move(energies), std::move(transitions));
}

TransitionProjector::TransitionProjector(std::size_t i, std::size_t j, std::size_t levels)
    : i_(i), j_(j), identity_(std::max<std::size_t>(levels, 1)) {
  require(i < levels && j < levels, "transition_projector: index out of range");
  require(i != j, "transition_projector: indices must differ");
  identity_(i, i) = 1.0;
  identity_(j, j) = 1.0;
}

ComplexMatrix TransitionProjector::project(const ComplexMatrix& m) const {
  require(m.dim() == identity_.dim(), "transition_projector: dimension mismatch");
  ComplexMatrix out(m.dim());
  for (std::size_t r : {i_, j_})
    for (std::size_t c : {i_, j_}) out(r, c) = m(r, c);
  return out;
}

TransitionProjector transition_projector(const TransitionSpec& t, std::size_t levels) {
  return TransitionProjector(t.i, t.j, levels);
}

std::string to_string(CouplingKind kind) {
  switch (kind) {
    case CouplingKind::Harmonic: return "harmonic";
    case CouplingKind::Constant: return "constant";
    case CouplingKind::Table: return "table";
  }
  return "unknown";
}

}  // namespace ebe
