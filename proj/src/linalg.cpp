#include "ebe/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "ebe/errors.hpp"

namespace ebe {

namespace {

using EigenMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

EigenMatrix to_eigen(const ComplexMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  return Eigen::Map<const EigenMatrix>(m.data().data(), n, n);
}

ComplexMatrix from_eigen(const Eigen::MatrixXcd& m) {
  ComplexMatrix out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = m(r, c);
  return out;
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.dim() != b.dim())
    throw ValidationError(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()) + ")");
}

}  // namespace

ConfigErrors::ConfigErrors(std::vector<std::string> errors)
    : ValidationError([&] {
        std::string joined;
        for (const auto& e : errors) {
          if (!joined.empty()) joined += "; ";
          joined += e;
        }
        return joined;
      }()),
      errors_(std::move(errors)) {}

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
  require(dim >= 1, "ComplexMatrix: dim must be >= 1");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> row_major)
    : dim_(dim), data_(std::move(row_major)) {
  require(dim >= 1, "ComplexMatrix: dim must be >= 1");
  require(data_.size() == dim * dim, "ComplexMatrix: entry count must equal dim^2");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : dim_(rows.size()) {
  require(dim_ >= 1, "ComplexMatrix: dim must be >= 1");
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    require(row.size() == dim_, "ComplexMatrix: rows must form a square matrix");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

cplx ComplexMatrix::trace() const noexcept {
  cplx t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

std::vector<double> ComplexMatrix::real_diagonal() const {
  std::vector<double> d(dim_);
  for (std::size_t i = 0; i < dim_; ++i) d[i] = (*this)(i, i).real();
  return d;
}

double ComplexMatrix::norm() const noexcept {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool ComplexMatrix::is_hermitian(double tolerance) const {
  const double scale = std::max(1.0, max_abs());
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = r; c < dim_; ++c)
      if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tolerance * scale) return false;
  return true;
}

bool ComplexMatrix::is_traceless(double tolerance) const {
  return std::abs(trace()) <= tolerance * std::max(1.0, norm());
}

bool ComplexMatrix::is_psd(double tolerance) const {
  if (!is_hermitian()) return false;
  return hermitian_eigenvalues(*this).front() >= -tolerance;
}

bool ComplexMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator+=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator-=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale) noexcept {
  for (auto& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_same_dim(lhs, rhs, "operator*");
  const std::size_t n = lhs.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx a = lhs(i, k);
      if (a == cplx{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

ComplexMatrix operator*(cplx scale, ComplexMatrix m) { return m *= scale; }
ComplexMatrix operator*(ComplexMatrix m, cplx scale) { return m *= scale; }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "anticommutator");
  return a * b + b * a;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim(), nb = b.dim();
  ComplexMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = a(i, j) * b(k, l);
  return out;
}

EigenDecomposition hermitian_eig(const ComplexMatrix& h, double hermitian_tol) {
  require(h.is_hermitian(hermitian_tol), "hermitian_eig: input is not Hermitian within tolerance");
  const std::size_t n = h.dim();
  // Symmetrize so round-off asymmetry does not leak into the solver.
  const EigenMatrix m = to_eigen(h);
  const Eigen::MatrixXcd sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("hermitian_eig: solver did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& evals = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return evals(static_cast<Eigen::Index>(x)) < evals(static_cast<Eigen::Index>(y));
  });

  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const auto src = static_cast<Eigen::Index>(order[k]);
    out.values[k] = evals(src);
    Eigen::VectorXcd v = solver.eigenvectors().col(src);
    v.normalize();

    double largest = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) largest = std::max(largest, std::abs(v(i)));
    Eigen::Index pivot = 0;
    while (std::abs(v(pivot)) < largest - 1e-12) ++pivot;
    v *= std::conj(v(pivot)) / std::abs(v(pivot));
    v(pivot) = std::abs(v(pivot));

    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(static_cast<Eigen::Index>(i));
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h, double hermitian_tol) {
  require(h.is_hermitian(hermitian_tol),
          "hermitian_eigenvalues: input is not Hermitian within tolerance");
  const EigenMatrix m = to_eigen(h);
  const Eigen::MatrixXcd sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("hermitian_eigenvalues: solver did not converge");
  std::vector<double> values(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(values.begin(), values.end());
  return values;
}

GeneralEigenDecomposition general_eig(const ComplexMatrix& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(to_eigen(m)));
  if (solver.info() != Eigen::Success) throw NumericalError("general_eig: solver did not converge");
  const auto& ev = solver.eigenvalues();
  return {std::vector<cplx>(ev.data(), ev.data() + ev.size()), from_eigen(solver.eigenvectors())};
}

std::vector<cplx> general_eigenvalues(const ComplexMatrix& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(to_eigen(m)), false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("general_eigenvalues: solver did not converge");
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

ComplexMatrix matrix_exp(const ComplexMatrix& a) {
  const Eigen::MatrixXcd m = to_eigen(a);
  return from_eigen(m.exp());
}

std::vector<cplx> vectorize(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  std::vector<cplx> v(n * n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) v[r + c * n] = m(r, c);
  return v;
}

ComplexMatrix devectorize(std::span<const cplx> v, std::size_t dim) {
  require(v.size() == dim * dim, "devectorize: vector length must equal dim^2");
  ComplexMatrix m(dim);
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r) m(r, c) = v[r + c * dim];
  return m;
}

std::vector<cplx> matvec(const ComplexMatrix& m, std::span<const cplx> x) {
  require(x.size() == m.dim(), "apply: vector length must equal matrix dim");
  const std::size_t n = m.dim();
  std::vector<cplx> y(n);
  for (std::size_t r = 0; r < n; ++r) {
    cplx acc = 0.0;
    for (std::size_t c = 0; c < n; ++c) acc += m(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "trace_distance");
  double s = 0.0;
  for (double l : hermitian_eigenvalues(a - b)) s += std::abs(l);
  return 0.5 * s;
}

ComplexMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix pauli_y() { return {{0.0, cplx(0.0, -1.0)}, {cplx(0.0, 1.0), 0.0}}; }
ComplexMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

}  // namespace ebe
