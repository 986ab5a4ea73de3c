#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "ebe/errors.hpp"
#include "ebe/systems.hpp"
#include "support.hpp"

using namespace ebe;
using ebe::test::distance;

TEST_SUITE("systems") {
  TEST_CASE("two-level Hamiltonian builder") {
    const auto h = build_two_level_hamiltonian(2.0, {0.0, 0.0, 1.0});
    CHECK(h == ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}});

    const auto hx = build_two_level_hamiltonian(1.0, {1.0, 0.0, 0.0});
    CHECK(distance(hx, pauli_x() * cplx(0.5)) <= 1e-15);
    const auto vx = hermitian_eigenvalues(hx);
    CHECK(vx[0] == doctest::Approx(-0.5));
    CHECK(vx[1] == doctest::Approx(0.5));

    std::mt19937_64 rng(11);
    for (int draw = 0; draw < 200; ++draw) {
      const auto sys = test::random_two_level(rng);
      const auto hr = build_two_level_hamiltonian(sys.E, sys.eps);
      CHECK(std::abs(hr.trace()) <= 1e-12 * sys.E);
      const auto v = hermitian_eigenvalues(hr);
      CHECK(std::abs(v[1] - v[0] - sys.E) <= 1e-12 * sys.E);
    }

    CHECK_THROWS_AS(build_two_level_hamiltonian(0.0, {0, 0, 1}), ValidationError);
    CHECK_THROWS_AS(build_two_level_hamiltonian(1.0, {0, 0, 0}), ValidationError);
    CHECK_THROWS_AS(build_two_level_hamiltonian(1.0, {0, 0, 1.001}), ValidationError);
    CHECK_NOTHROW(build_two_level_hamiltonian(1.0, {0, 0, 1.0 + 5e-10}));
  }

  TEST_CASE("jump operators in the diagonal basis") {
    const auto pair = jump_operators(pauli_z() * cplx(0.5));
    CHECK(distance(pair.sigma_p, ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}) <= 1e-15);
    CHECK(distance(pair.sigma_m, pair.sigma_p.adjoint()) <= 1e-15);
  }

  TEST_CASE("jump operators for a sigma_x Hamiltonian") {
    const auto pair = jump_operators(pauli_x() * cplx(0.5));
    const ComplexMatrix expected{{0.5, -0.5}, {0.5, -0.5}};
    CHECK(distance(pair.sigma_p, expected) <= 1e-15);
    CHECK((pair.sigma_p * pair.sigma_p).norm() <= 1e-15);
  }

  TEST_CASE("jump operators reject bad Hamiltonians") {
    CHECK_THROWS_AS(jump_operators(ComplexMatrix::identity(2)), ValidationError);  // not traceless
    CHECK_THROWS_AS(jump_operators(ComplexMatrix(2)), ValidationError);             // degenerate
    CHECK_THROWS_AS(jump_operators(ComplexMatrix(3)), ValidationError);
    CHECK_THROWS_AS(jump_operators(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}), ValidationError);
  }

  TEST_CASE("jump algebra holds for random Hamiltonians") {
    std::mt19937_64 rng(12);
    for (int draw = 0; draw < 1000; ++draw) {
      const auto sys = test::random_two_level(rng);
      const auto h = sys.hamiltonian();
      const auto pair = jump_operators(h);
      const auto report = verify_jump_algebra(pair, h, sys.E);
      CHECK(report.passed());
      CHECK(distance(commutator(pair.sigma_p, pair.sigma_m), h * cplx(2.0 / sys.E)) <= 1e-12);
    }
  }

  TEST_CASE("canonical sigma_z pair has zero residuals") {
    const auto h = pauli_z() * cplx(0.5);
    const auto r = verify_jump_algebra(jump_operators(h), h, 1.0);
    CHECK(r.max_residual() == 0.0);
  }

  TEST_CASE("doubling sigma_p is detected with the exact residuals") {
    // Hand evaluation with sp = |e1><e2|, H = sz/2, E = 1 and sp -> 2 sp:
    // [2sp, sm] - sz = sz, {2sp, sm} - I = I, 4sp - 2sp = 2sp, 2sm - sm = sm.
    const auto h = pauli_z() * cplx(0.5);
    auto pair = jump_operators(h);
    pair.sigma_p *= 2.0;
    const auto r = verify_jump_algebra(pair, h, 1.0);
    CHECK(r.sigma_p_squared == doctest::Approx(0.0));
    CHECK(r.sigma_m_squared == doctest::Approx(0.0));
    CHECK(r.commutator == doctest::Approx(std::numbers::sqrt2));
    CHECK(r.anticommutator == doctest::Approx(std::numbers::sqrt2));
    CHECK(r.triple_p == doctest::Approx(2.0));
    CHECK(r.triple_m == doctest::Approx(1.0));
    CHECK(r.eigenoperator == doctest::Approx(0.0));
    CHECK_FALSE(r.passed());
  }

  TEST_CASE("fermi distribution") {
    CHECK(fermi(0.0, 0.3) == 0.5);
    CHECK(fermi(1.0, 1.0) == doctest::Approx(1.0 / (std::numbers::e + 1.0)).epsilon(1e-15));
    CHECK(fermi(1.0, 1.0) == doctest::Approx(0.2689414).epsilon(1e-7));
    CHECK(fermi(1e6, 1.0) == 0.0);
    CHECK(fermi(-1e6, 1.0) == 1.0);
    CHECK(fermi(800.0, 1.0) >= 0.0);
    CHECK(fermi(1.0, std::numeric_limits<double>::infinity()) == 0.5);
    CHECK_THROWS_AS(fermi(1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(fermi(1.0, -1.0), ValidationError);
  }

  TEST_CASE("rates from a bath") {
    const auto hot = rates_from_bath({1.0, std::numeric_limits<double>::infinity()}, 1.0);
    CHECK(hot.gamma_p == 0.5);
    CHECK(hot.gamma_m == 0.5);

    const double e = std::numbers::e;
    const auto r = rates_from_bath({2.0, 1.0}, 1.0);
    CHECK(r.gamma_p == doctest::Approx(2.0 / (e + 1.0)).epsilon(1e-15));
    CHECK(r.gamma_m == doctest::Approx(2.0 * e / (e + 1.0)).epsilon(1e-15));

    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.05, 5.0);
    for (int draw = 0; draw < 500; ++draw) {
      const BathModel bath{u(rng), u(rng)};
      const double E = u(rng);
      const auto rp = rates_from_bath(bath, E);
      CHECK(rp.gamma_p + rp.gamma_m == doctest::Approx(bath.gamma).epsilon(1e-15));
      CHECK(std::abs(rp.gamma_p / rp.gamma_m / std::exp(-E / bath.T) - 1.0) <= 1e-13);
    }
  }

  TEST_CASE("oscillator ladders") {
    const BathModel bath{1.0, 0.7};
    const auto rates = rates_from_bath(bath, 1.3);

    const auto two = build_oscillator(2, 1.3, CouplingRule::constant(1.0), bath);
    REQUIRE(two.transitions.size() == 1);
    CHECK(two.transitions[0].gamma_p == doctest::Approx(rates.gamma_p));
    CHECK(two.transitions[0].gamma_m == doctest::Approx(rates.gamma_m));
    CHECK(two.transitions[0].E_t == doctest::Approx(1.3));

    const auto harmonic = build_oscillator(4, 1.3, CouplingRule::harmonic(0.5), bath);
    REQUIRE(harmonic.energies.size() == 4);
    for (std::size_t k = 0; k < 4; ++k)
      CHECK(harmonic.energies[k] == doctest::Approx(1.3 * static_cast<double>(k)).epsilon(1e-15));
    REQUIRE(harmonic.transitions.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& t = harmonic.transitions[i];
      CHECK(t.i == i);
      CHECK(t.j == i + 1);
      CHECK(t.gamma_p + t.gamma_m == doctest::Approx(0.5 * static_cast<double>(i + 1)));
    }
    CHECK(CouplingRule::harmonic(2.0).materialize(3) == std::vector<double>{2.0, 4.0, 6.0});
    CHECK(CouplingRule::constant(2.0).materialize(3) == std::vector<double>{2.0, 2.0, 2.0});
    CHECK(CouplingRule::from_table({1, 2, 5}).materialize(3) == std::vector<double>{1, 2, 5});

    CHECK_THROWS_AS(build_oscillator(1, 1.0, CouplingRule::harmonic(1.0), bath), ValidationError);
    CHECK_THROWS_AS(build_oscillator(3, 0.0, CouplingRule::harmonic(1.0), bath), ValidationError);
    CHECK_THROWS_AS(build_oscillator(3, 1.0, CouplingRule::from_table({1.0, -1.0}), bath),
                    ValidationError);
    CHECK_THROWS_AS(build_oscillator(4, 1.0, CouplingRule::from_table({1.0}), bath), ValidationError);
  }

  TEST_CASE("ladder validation") {
    CHECK_NOTHROW(make_ladder({0.0, 2.0, 1.0}, {{0, 1, 0.1, 0.2}, {2, 1, 0.1, 0.2}}));
    // Orientation is normalized so the upper level comes second.
    const auto l = make_ladder({0.0, 2.0, 1.0}, {{1, 0, 0.3, 0.1}});
    CHECK(l.transitions[0].i == 0);
    CHECK(l.transitions[0].j == 1);
    CHECK(l.transitions[0].gamma_p == 0.1);
    CHECK(l.transitions[0].gamma_m == 0.3);
    CHECK(l.transitions[0].E_t == 2.0);

    CHECK_THROWS_AS(make_ladder({0.0, 1.0}, {{0, 0, 0.1, 0.1}}), ValidationError);
    CHECK_THROWS_AS(make_ladder({0.0, 1.0}, {{0, 2, 0.1, 0.1}}), ValidationError);
    CHECK_THROWS_AS(make_ladder({0.0, 1.0}, {{0, 1, 0.1, 0.1}, {1, 0, 0.1, 0.1}}), ValidationError);
    CHECK_THROWS_AS(make_ladder({0.0, 0.0}, {{0, 1, 0.1, 0.1}}), ValidationError);
    CHECK_THROWS_AS(make_ladder({0.0, 1.0}, {{0, 1, -0.1, 0.1}}), ValidationError);
    CHECK_THROWS_AS(make_ladder({0.0}, {}), ValidationError);
  }

  TEST_CASE("two-level system validation") {
    TwoLevelSystem sys;
    sys.gamma_p = 0.1;
    sys.gamma_m = 0.2;
    CHECK_NOTHROW(sys.validate());
    sys.E = 0.0;
    CHECK_THROWS_AS(sys.validate(), ValidationError);
    sys.E = 1.0;
    sys.eps = {0.5, 0.5, 0.5};
    CHECK_THROWS_AS(sys.validate(), ValidationError);
    sys.eps = {0, 0, 1};
    sys.gamma_m = -1.0;
    CHECK_THROWS_AS(sys.validate(), ValidationError);
  }

  TEST_CASE("transition projectors") {
    const TransitionProjector p(0, 1, 3);
    CHECK(p.identity() == ComplexMatrix::diagonal(std::vector<double>{1.0, 1.0, 0.0}));
    CHECK(p.identity().trace() == cplx(2.0));
    CHECK(p.identity() * p.identity() == p.identity());

    const auto third = ComplexMatrix::identity(3) * cplx(1.0 / 3.0);
    const auto rho_t = p.project(third);
    CHECK(distance(rho_t, ComplexMatrix::diagonal(std::vector<double>{1.0 / 3, 1.0 / 3, 0.0})) <= 1e-16);
    CHECK(rho_t.trace().real() == doctest::Approx(2.0 / 3.0));

    std::mt19937_64 rng(14);
    for (int draw = 0; draw < 20; ++draw) {
      const std::size_t n = 3 + draw % 4;
      const std::size_t i = draw % n, j = (draw + 1 + draw % 2) % n;
      if (i == j) continue;
      const TransitionProjector q(i, j, n);
      const auto m = test::random_matrix(n, rng);
      const auto projected = q.project(m);
      // Entrywise oracle.
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
          const bool keep = (r == i || r == j) && (c == i || c == j);
          CHECK(projected(r, c) == (keep ? m(r, c) : cplx(0.0)));
        }
      CHECK(q.project(projected) == projected);
      CHECK(q.identity() * projected * q.identity() == projected);
    }
    CHECK_THROWS_AS(TransitionProjector(0, 3, 3), ValidationError);
    CHECK_THROWS_AS(TransitionProjector(1, 1, 3), ValidationError);
  }
}
