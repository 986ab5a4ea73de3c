// Serial reference kernels against their OpenMP counterparts.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include <CLI11.hpp>

#include "ebe/kernels.hpp"
#include "ebe/systems.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double median_ms(int repeats, F&& f) {
  std::vector<double> samples;
  for (int r = 0; r < repeats; ++r) {
    const auto start = Clock::now();
    f();
    samples.push_back(std::chrono::duration<double, std::milli>(Clock::now() - start).count());
  }
  std::nth_element(samples.begin(), samples.begin() + samples.size() / 2, samples.end());
  return samples[samples.size() / 2];
}

std::vector<ebe::ComplexMatrix> random_states(std::size_t n, std::size_t count, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<ebe::ComplexMatrix> states;
  states.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    ebe::ComplexMatrix g(n);
    for (auto& z : g.data()) z = {normal(rng), normal(rng)};
    ebe::ComplexMatrix rho = g * g.adjoint();
    rho *= 1.0 / rho.trace().real();
    states.push_back(std::move(rho));
  }
  return states;
}

struct Case {
  const char* name;
  ebe::RhsSpec spec;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel timings"};
  std::size_t batch = 4096;
  int repeats = 5;
  std::uint64_t seed = 7;
  app.add_option("--batch", batch, "states per batch");
  app.add_option("--repeats", repeats, "timed repetitions (median reported)");
  app.add_option("--seed", seed, "seed for the random states");
  CLI11_PARSE(app, argc, argv);

  ebe::TwoLevelSystem qubit;
  qubit.E = 1.0;
  qubit.eps = {0.3, 0.4, std::sqrt(1.0 - 0.25)};
  qubit.gamma_p = 0.2;
  qubit.gamma_m = 0.7;
  const ebe::BathModel bath{1.0, 0.5};

  std::vector<Case> cases;
  cases.push_back({"ebe2", ebe::RhsSpec::ebe2(qubit)});
  cases.push_back({"gkls2", ebe::RhsSpec::gkls_two_level(qubit)});
  for (std::size_t n : {8u, 16u}) {
    const auto ladder = ebe::build_oscillator(n, 1.0, ebe::CouplingRule::harmonic(1.0), bath);
    cases.push_back({n == 8 ? "eben8" : "eben16", ebe::RhsSpec::eben(ladder)});
    cases.push_back({n == 8 ? "gkls8" : "gkls16",
                     ebe::RhsSpec::gkls(ladder.hamiltonian(), ebe::pairwise_jumps(ladder))});
  }

  std::mt19937_64 rng(seed);
  std::printf("threads=%d batch=%zu repeats=%d\n", ebe::kernel_threads(), batch, repeats);
  std::printf("%-8s %4s %14s %14s %8s %14s %14s %8s %6s\n", "case", "dim", "batch_serial_ms",
              "batch_omp_ms", "speedup", "super_serial_ms", "super_omp_ms", "speedup", "equal");
  bool all_equal = true;
  for (const auto& c : cases) {
    const std::size_t n = c.spec.dim();
    const auto in = random_states(n, batch, rng);
    std::vector<ebe::ComplexMatrix> out_serial(batch, ebe::ComplexMatrix(n));
    std::vector<ebe::ComplexMatrix> out_omp(batch, ebe::ComplexMatrix(n));

    const double t_bs = median_ms(repeats, [&] { ebe::apply_batch_serial(c.spec, in, out_serial); });
    const double t_bp = median_ms(repeats, [&] { ebe::apply_batch(c.spec, in, out_omp); });
    ebe::ComplexMatrix s_serial(1), s_omp(1);
    const double t_ss = median_ms(repeats, [&] { s_serial = ebe::build_superoperator_serial(c.spec); });
    const double t_sp = median_ms(repeats, [&] { s_omp = ebe::build_superoperator(c.spec); });

    const bool equal = out_serial == out_omp && s_serial == s_omp;
    all_equal = all_equal && equal;
    std::printf("%-8s %4zu %14.3f %14.3f %8.2f %14.3f %14.3f %8.2f %6s\n", c.name, n, t_bs, t_bp,
                t_bs / t_bp, t_ss, t_sp, t_ss / t_sp, equal ? "yes" : "NO");
  }
  return all_equal ? 0 : 1;
}
