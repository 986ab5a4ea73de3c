#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "ebe/errors.hpp"
#include "ebe/propagate.hpp"
#include "ebe/stationary.hpp"
#include "support.hpp"

using namespace ebe;
using ebe::test::distance;

TEST_SUITE("stationary") {
  TEST_CASE("Gibbs states") {
    const double inf = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(61);
    const auto h = test::random_hermitian(4, rng);
    CHECK(distance(gibbs_state(h, inf), ComplexMatrix::identity(4) * cplx(0.25)) <= 1e-15);

    const auto two = gibbs_state(pauli_z() * cplx(0.5), 1.0);
    const double e = std::exp(-1.0);
    // Upper level sits at index 0 for sz/2.
    CHECK(two(1, 1).real() == doctest::Approx(1.0 / (1.0 + e)).epsilon(1e-15));
    CHECK(two(0, 0).real() == doctest::Approx(e / (1.0 + e)).epsilon(1e-15));

    const auto ladder = ComplexMatrix::diagonal(std::vector<double>{0, 0.8, 1.6, 2.4, 3.2});
    const auto g = gibbs_state(ladder, 0.3);
    for (std::size_t i = 0; i + 1 < 5; ++i)
      CHECK(std::log(g(i + 1, i + 1).real() / g(i, i).real()) == doctest::Approx(-0.8 / 0.3));

    const auto gh = gibbs_state(h, 0.7);
    CHECK(gh.is_psd());
    CHECK(std::abs(gh.trace() - 1.0) <= 1e-14);
    CHECK(commutator(h, gh).norm() <= 1e-12);
    CHECK_THROWS_AS(gibbs_state(h, 0.0), ValidationError);
    // Very cold states do not underflow to NaN.
    CHECK(gibbs_state(ladder, 1e-4).all_finite());
  }

  TEST_CASE("closed-form two-level stationary state") {
    TwoLevelSystem sys;
    sys.E = 1.5;
    sys.eps = {0.6, 0.0, 0.8};
    sys.gamma_p = sys.gamma_m = 0.3;
    CHECK(distance(two_level_stationary_analytic(sys), ComplexMatrix::identity(2) * cplx(0.5)) <= 1e-16);

    // Inverted bath: pure excited state.
    sys.gamma_m = 0.0;
    const auto excited = two_level_stationary_analytic(sys);
    CHECK(distance(excited * excited, excited) <= 1e-15);
    CHECK(std::abs((excited * sys.hamiltonian()).trace() - sys.E / 2) <= 1e-15);

    sys.E = 1.0;
    const auto r = rates_from_bath({1.0, 1.0}, 1.0);
    sys.gamma_p = r.gamma_p;
    sys.gamma_m = r.gamma_m;
    CHECK(distance(two_level_stationary_analytic(sys), gibbs_state(sys.hamiltonian(), 1.0)) <= 1e-14);

    sys.gamma_p = sys.gamma_m = 0.0;
    CHECK_THROWS_AS(two_level_stationary_analytic(sys), ValidationError);
  }

  TEST_CASE("detailed balance temperature") {
    TwoLevelSystem sys;
    sys.E = 2.0;
    const auto r = rates_from_bath({1.0, 0.7}, 2.0);
    sys.gamma_p = r.gamma_p;
    sys.gamma_m = r.gamma_m;
    CHECK(*detailed_balance_temperature(sys) == doctest::Approx(0.7));
    sys.gamma_p = sys.gamma_m = 1.0;
    CHECK(std::isinf(*detailed_balance_temperature(sys)));
    sys.gamma_p = 2.0;
    CHECK_FALSE(detailed_balance_temperature(sys).has_value());
  }

  TEST_CASE("numerical fixed point of the two-level EBE") {
    std::mt19937_64 rng(62);
    for (int draw = 0; draw < 30; ++draw) {
      const auto sys = test::random_two_level(rng);
      const auto report = fixed_point(RhsSpec::ebe2(sys));
      CHECK(distance(report.rho_stationary, two_level_stationary_analytic(sys)) <= 1e-10);
      CHECK(report.residual <= 1e-10);
      CHECK(report.multiplicity == 1);
      CHECK(report.spectral_gap > 0.0);
      CHECK(report.commutator_norm <= 1e-10 * sys.E);
      if (sys.gamma_p < sys.gamma_m) CHECK(report.gibbs_distance <= 1e-10);
    }
  }

  TEST_CASE("oscillator fixed points are Gibbs for any positive couplings") {
    const BathModel bath{1.0, 0.6};
    std::vector<double> quadratic(11);
    for (std::size_t i = 0; i < 11; ++i) quadratic[i] = 1.0 + static_cast<double>(i * i);
    for (const auto& rule : {CouplingRule::harmonic(1.0), CouplingRule::constant(1.0),
                             CouplingRule::from_table(quadratic)}) {
      const auto ladder = build_oscillator(12, 1.0, rule, bath);
      const auto report = fixed_point(RhsSpec::eben(ladder), bath.T);
      for (std::size_t i = 0; i < 8; ++i) {
        const double ratio = report.rho_stationary(i + 1, i + 1).real() /
                             report.rho_stationary(i, i).real();
        CHECK(std::abs(ratio - std::exp(-1.0 / bath.T)) <= 1e-8);
      }
      CHECK(report.gibbs_distance <= 1e-8);
      CHECK(report.residual <= 1e-10);
    }
  }

  TEST_CASE("fixed point agrees with long-time propagation") {
    TwoLevelSystem sys;
    sys.E = 1.0;
    sys.eps = {0.0, 0.6, 0.8};
    sys.gamma_p = 0.2;
    sys.gamma_m = 0.5;
    sys.Gamma_pd = 0.05;
    const auto spec = RhsSpec::ebe2(sys);
    const auto report = fixed_point(spec);
    const auto traj = propagate(spec, test::unit_projector(2, 0), 20.0 / report.spectral_gap, 0.5);
    CHECK(trace_distance(traj.states.back(), report.rho_stationary) <= 1e-6);
  }

  TEST_CASE("disconnected transition graphs report multiplicity") {
    const auto ladder = make_ladder({0.0, 1.0, 2.5, 4.0}, {{0, 1, 0.1, 0.3}, {2, 3, 0.2, 0.4}});
    const auto report = fixed_point(RhsSpec::eben(ladder));
    CHECK(report.multiplicity >= 2);
    CHECK(std::abs(report.rho_stationary.trace() - 1.0) <= 1e-12);
  }
}
