#include "ebe/dissipators.hpp"

#include <algorithm>
#include <cmath>

#include "ebe/errors.hpp"

namespace ebe {

namespace {

const cplx kI{0.0, 1.0};

void check_rate(double rate, const char* what) {
  require(std::isfinite(rate) && rate >= 0.0, std::string(what) + ": rates must be finite and >= 0");
}

// One transition's contribution, accumulated into out. Only the {i, j} block
// of rho is read and only that block of out is written.
void accumulate_transition(const ComplexMatrix& rho, const std::vector<double>& energies,
                           const TransitionSpec& t, ComplexMatrix& out) {
  const std::size_t i = t.i, j = t.j;
  const double s = t.gamma_p + t.gamma_m;
  const double d = t.gamma_p - t.gamma_m;
  const double Et = t.E_t;

  const cplx tr = rho(i, i) + rho(j, j);
  const double offset = 0.5 * (energies[i] + energies[j]);
  const double hi = (energies[i] - offset) / Et;  // -1/2
  const double hj = (energies[j] - offset) / Et;  // +1/2
  const double gap = energies[j] - energies[i];
  const double dephase = s * gap * gap / (2.0 * Et * Et);

  // mixing toward equal occupation, energy relaxation
  out(i, i) += -s * (rho(i, i) - 0.5 * tr) + d * hi * tr;
  out(j, j) += -s * (rho(j, j) - 0.5 * tr) + d * hj * tr;
  // mixing and thermal dephasing on the block coherences
  out(i, j) += (dephase - s) * rho(i, j);
  out(j, i) += (dephase - s) * rho(j, i);
}

void add_gkls(const ComplexMatrix& rho, std::span<const Jump> jumps, ComplexMatrix& out) {
  for (const auto& jump : jumps) {
    const ComplexMatrix& l = jump.op;
    const ComplexMatrix ld = l.adjoint();
    const ComplexMatrix ldl = ld * l;
    ComplexMatrix term = l * rho * ld;
    term -= 0.5 * anticommutator(ldl, rho);
    out += cplx(jump.rate) * term;
  }
}

void add_ebe_two_level(const ComplexMatrix& rho, const ComplexMatrix& h, double E, double gp,
                       double gm, ComplexMatrix& out) {
  const double s = gp + gm;
  const double d = gp - gm;
  const cplx tr = rho.trace();
  ComplexMatrix mixing = rho - (0.5 * tr) * ComplexMatrix::identity(2);
  ComplexMatrix relaxation = (tr / E) * h;
  ComplexMatrix dephasing = commutator(h, commutator(h, rho));
  out += cplx(-s) * mixing;
  out += cplx(d) * relaxation;
  out += cplx(s / (2.0 * E * E)) * dephasing;
}

void add_pure_dephasing(const ComplexMatrix& rho, const ComplexMatrix& h, double Gamma,
                        ComplexMatrix& out) {
  if (Gamma == 0.0) return;
  out += cplx(-Gamma) * commutator(h, commutator(h, rho));
}

}  // namespace

ComplexMatrix gkls_dissipator(const ComplexMatrix& rho, std::span<const Jump> jumps) {
  for (const auto& jump : jumps) {
    require(jump.op.dim() == rho.dim(), "gkls_dissipator: dimension mismatch");
    check_rate(jump.rate, "gkls_dissipator");
  }
  ComplexMatrix out(rho.dim());
  add_gkls(rho, jumps, out);
  return out;
}

ComplexMatrix ebe_two_level(const ComplexMatrix& rho, const ComplexMatrix& h, double E,
                            double gamma_p, double gamma_m) {
  require(rho.dim() == 2 && h.dim() == 2, "ebe_two_level: requires 2x2 matrices");
  require(std::isfinite(E) && E != 0.0, "ebe_two_level: E must be nonzero");
  check_rate(gamma_p, "ebe_two_level");
  check_rate(gamma_m, "ebe_two_level");
  ComplexMatrix out(2);
  add_ebe_two_level(rho, h, E, gamma_p, gamma_m, out);
  return out;
}

ComplexMatrix ebe_two_level(const ComplexMatrix& rho, const TwoLevelSystem& sys) {
  sys.validate();
  return ebe_two_level(rho, sys.hamiltonian(), sys.E, sys.gamma_p, sys.gamma_m);
}

ComplexMatrix ebe_multi_level(const ComplexMatrix& rho, const LadderSystem& sys) {
  sys.validate();
  require(rho.dim() == sys.levels(), "ebe_multi_level: dimension mismatch");
  ComplexMatrix out(rho.dim());
  for (const auto& t : sys.transitions) accumulate_transition(rho, sys.energies, t, out);
  return out;
}

ComplexMatrix pure_dephasing(const ComplexMatrix& rho, const ComplexMatrix& h, double Gamma) {
  require(rho.dim() == h.dim(), "pure_dephasing: dimension mismatch");
  require(std::isfinite(Gamma) && Gamma >= 0.0, "pure_dephasing: Gamma must be >= 0");
  ComplexMatrix out(rho.dim());
  add_pure_dephasing(rho, h, Gamma, out);
  return out;
}

std::vector<Jump> canonical_jumps(const TwoLevelSystem& sys) {
  sys.validate();
  auto pair = jump_operators(sys.hamiltonian());
  return {{std::move(pair.sigma_p), sys.gamma_p}, {std::move(pair.sigma_m), sys.gamma_m}};
}

std::vector<Jump> pairwise_jumps(const LadderSystem& sys) {
  sys.validate();
  const std::size_t n = sys.levels();
  std::vector<Jump> jumps;
  jumps.reserve(2 * sys.transitions.size());
  for (const auto& t : sys.transitions) {
    ComplexMatrix up(n), down(n);
    up(t.j, t.i) = 1.0;
    down(t.i, t.j) = 1.0;
    jumps.push_back({std::move(up), t.gamma_p});
    jumps.push_back({std::move(down), t.gamma_m});
  }
  return jumps;
}

std::string to_string(DissipatorKind kind) {
  switch (kind) {
    case DissipatorKind::GKLS: return "gkls";
    case DissipatorKind::EBE2: return "ebe2";
    case DissipatorKind::EBEN: return "eben";
  }
  return "unknown";
}

void RhsSpec::validate() const {
  require(hamiltonian.is_hermitian(), "rhs: Hamiltonian must be Hermitian");
  require(std::isfinite(Gamma_pd) && Gamma_pd >= 0.0, "rhs: Gamma_pd must be >= 0");
  switch (kind) {
    case DissipatorKind::GKLS: {
      const auto* jumps = std::get_if<std::vector<Jump>>(&payload);
      require(jumps != nullptr, "rhs: kind gkls needs an explicit jump list");
      for (const auto& j : *jumps) {
        require(j.op.dim() == dim(), "rhs: jump operator dimension does not match Hamiltonian");
        check_rate(j.rate, "rhs");
      }
      break;
    }
    case DissipatorKind::EBE2: {
      const auto* sys = std::get_if<TwoLevelSystem>(&payload);
      require(sys != nullptr, "rhs: kind ebe2 needs a two-level system");
      require(dim() == 2, "rhs: kind ebe2 requires dim = 2");
      sys->validate();
      require((sys->hamiltonian() - hamiltonian).max_abs() <= 1e-12 * sys->E,
              "rhs: Hamiltonian does not match the two-level system");
      break;
    }
    case DissipatorKind::EBEN: {
      const auto* sys = std::get_if<LadderSystem>(&payload);
      require(sys != nullptr, "rhs: kind eben needs a ladder system");
      sys->validate();
      require(sys->levels() == dim(), "rhs: ladder level count does not match Hamiltonian");
      require(sys->hamiltonian() == hamiltonian,
              "rhs: Hamiltonian does not match the ladder energies");
      break;
    }
  }
}

RhsSpec RhsSpec::ebe2(const TwoLevelSystem& sys) {
  sys.validate();
  return {sys.hamiltonian(), DissipatorKind::EBE2, sys, true, sys.Gamma_pd};
}

RhsSpec RhsSpec::gkls_two_level(const TwoLevelSystem& sys) {
  return {sys.hamiltonian(), DissipatorKind::GKLS, canonical_jumps(sys), true, sys.Gamma_pd};
}

RhsSpec RhsSpec::eben(const LadderSystem& sys, double Gamma_pd) {
  sys.validate();
  return {sys.hamiltonian(), DissipatorKind::EBEN, sys, true, Gamma_pd};
}

RhsSpec RhsSpec::gkls(ComplexMatrix h, std::vector<Jump> jumps, double Gamma_pd) {
  return {std::move(h), DissipatorKind::GKLS, std::move(jumps), true, Gamma_pd};
}

RhsSpec RhsSpec::closed(ComplexMatrix h) {
  return {std::move(h), DissipatorKind::GKLS, std::vector<Jump>{}, true, 0.0};
}

void master_rhs_into(const ComplexMatrix& rho, const RhsSpec& spec, ComplexMatrix& out) {
  std::fill(out.data().begin(), out.data().end(), cplx{});
  if (spec.include_unitary) out += (-kI) * commutator(spec.hamiltonian, rho);
  switch (spec.kind) {
    case DissipatorKind::GKLS:
      add_gkls(rho, std::get<std::vector<Jump>>(spec.payload), out);
      break;
    case DissipatorKind::EBE2: {
      const auto& sys = std::get<TwoLevelSystem>(spec.payload);
      add_ebe_two_level(rho, spec.hamiltonian, sys.E, sys.gamma_p, sys.gamma_m, out);
      break;
    }
    case DissipatorKind::EBEN: {
      const auto& sys = std::get<LadderSystem>(spec.payload);
      for (const auto& t : sys.transitions) accumulate_transition(rho, sys.energies, t, out);
      break;
    }
  }
  add_pure_dephasing(rho, spec.hamiltonian, spec.Gamma_pd, out);
}

ComplexMatrix master_rhs(const ComplexMatrix& rho, const RhsSpec& spec) {
  spec.validate();
  require(rho.dim() == spec.dim(), "master_rhs: state dimension does not match spec");
  ComplexMatrix out(rho.dim());
  master_rhs_into(rho, spec, out);
  return out;
}

}  // namespace ebe
