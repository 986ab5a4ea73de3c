#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ebe/errors.hpp"
#include "ebe/kernels.hpp"
#include "ebe/stationary.hpp"
#include "support.hpp"

using namespace ebe;
using ebe::test::distance;

namespace {

std::vector<RhsSpec> sample_specs() {
  TwoLevelSystem qubit;
  qubit.E = 1.4;
  qubit.eps = {0.0, 0.6, 0.8};
  qubit.gamma_p = 0.3;
  qubit.gamma_m = 0.9;
  qubit.Gamma_pd = 0.05;
  const auto ladder = build_oscillator(5, 1.0, CouplingRule::harmonic(0.7), {1.0, 0.5});
  return {RhsSpec::ebe2(qubit), RhsSpec::gkls_two_level(qubit), RhsSpec::eben(ladder, 0.1),
          RhsSpec::gkls(ladder.hamiltonian(), pairwise_jumps(ladder))};
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("parallel batch matches the serial reference bit for bit") {
    std::mt19937_64 rng(41);
    for (const auto& spec : sample_specs()) {
      std::vector<ComplexMatrix> in;
      for (int k = 0; k < 257; ++k) in.push_back(test::random_density(spec.dim(), rng));
      std::vector<ComplexMatrix> a(in.size(), ComplexMatrix(spec.dim()));
      std::vector<ComplexMatrix> b(in.size(), ComplexMatrix(spec.dim()));
      apply_batch_serial(spec, in, a);
      apply_batch(spec, in, b);
      CHECK(a == b);
      for (std::size_t k = 0; k < in.size(); k += 37) CHECK(a[k] == master_rhs(in[k], spec));
    }
  }

  TEST_CASE("batch size mismatch is rejected") {
    const auto spec = sample_specs().front();
    std::vector<ComplexMatrix> in(3, ComplexMatrix::identity(2));
    std::vector<ComplexMatrix> out(2, ComplexMatrix(2));
    CHECK_THROWS_AS(apply_batch(spec, in, out), ValidationError);
    std::vector<ComplexMatrix> wrong_dim(3, ComplexMatrix(3));
    CHECK_THROWS_AS(apply_batch_serial(spec, in, wrong_dim), ValidationError);
  }

  TEST_CASE("superoperator reproduces master_rhs") {
    std::mt19937_64 rng(42);
    for (const auto& spec : sample_specs()) {
      const auto s = build_superoperator(spec);
      CHECK(s == build_superoperator_serial(spec));
      REQUIRE(s.dim() == spec.dim() * spec.dim());
      for (int draw = 0; draw < 10; ++draw) {
        const auto rho = test::random_matrix(spec.dim(), rng);
        const auto via_s = devectorize(matvec(s, vectorize(rho)), spec.dim());
        CHECK(distance(via_s, master_rhs(rho, spec)) <= 1e-12 * std::max(1.0, rho.norm()));
      }
    }
  }

  TEST_CASE("unitary superoperator holds the Bohr frequencies") {
    const std::vector<double> energies{0.0, 0.7, 2.1};
    const auto h = ComplexMatrix::diagonal(energies);
    const auto s = build_superoperator(RhsSpec::closed(h));
    const std::size_t n = 3;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t d = 0; d < n; ++d) {
            const cplx expected =
                (a == c && b == d) ? cplx(0.0, -(energies[a] - energies[b])) : cplx(0.0);
            CHECK(std::abs(s(a + b * n, c + d * n) - expected) <= 1e-15);
          }
  }

  TEST_CASE("EBE2 superoperator: single null eigenvalue and Gibbs in its kernel") {
    TwoLevelSystem sys;
    sys.E = 1.0;
    sys.eps = {0.48, 0.6, 0.64};
    const auto rates = rates_from_bath({0.8, 0.7}, sys.E);
    sys.gamma_p = rates.gamma_p;
    sys.gamma_m = rates.gamma_m;
    const auto s = build_superoperator(RhsSpec::ebe2(sys));
    int zeros = 0;
    for (const auto& l : general_eigenvalues(s)) {
      if (std::abs(l) <= 1e-10) ++zeros;
      else CHECK(l.real() < 0.0);
    }
    CHECK(zeros == 1);
    const auto g = vectorize(gibbs_state(sys.hamiltonian(), 0.7));
    const auto image = matvec(s, g);
    double norm = 0.0;
    for (const auto& z : image) norm = std::max(norm, std::abs(z));
    CHECK(norm <= 1e-10);
  }

  TEST_CASE("dimension guard") {
    const auto big = RhsSpec::closed(ComplexMatrix::identity(kMaxSuperoperatorDim + 1));
    CHECK_THROWS_AS(build_superoperator(big), ValidationError);
    CHECK_THROWS_AS(build_superoperator_serial(big), ValidationError);
    CHECK(kernel_threads() >= 1);
  }
}
