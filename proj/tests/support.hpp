#pragma once

#include <cmath>
#include <random>

#include "ebe/linalg.hpp"
#include "ebe/systems.hpp"

namespace ebe::test {

inline ComplexMatrix random_matrix(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  ComplexMatrix m(n);
  for (auto& z : m.data()) z = {normal(rng), normal(rng)};
  return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  const ComplexMatrix a = random_matrix(n, rng);
  ComplexMatrix h = a + a.adjoint();
  h *= 0.5;
  return h;
}

inline ComplexMatrix random_density(std::size_t n, std::mt19937_64& rng) {
  const ComplexMatrix g = random_matrix(n, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  return rho;
}

inline std::array<double, 3> random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::array<double, 3> v{};
  double norm = 0.0;
  while (norm < 1e-6) {
    for (auto& x : v) x = normal(rng);
    norm = std::hypot(v[0], v[1], v[2]);
  }
  for (auto& x : v) x /= norm;
  return v;
}

/// E in [0.1, 10], random direction, rates in (0, 2].
inline TwoLevelSystem random_two_level(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TwoLevelSystem sys;
  sys.E = std::pow(10.0, 2.0 * u(rng) - 1.0);
  sys.eps = random_unit_vector(rng);
  sys.gamma_p = 2.0 * u(rng) + 1e-3;
  sys.gamma_m = 2.0 * u(rng) + 1e-3;
  return sys;
}

inline double distance(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).norm(); }

/// Basis projector |k><k| of dimension n.
inline ComplexMatrix unit_projector(std::size_t n, std::size_t k) {
  ComplexMatrix p(n);
  p(k, k) = 1.0;
  return p;
}

}  // namespace ebe::test
