#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ebe {

using cplx = std::complex<double>;

namespace tol {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kPsd = 1e-8;  // allowed negativity of the minimum eigenvalue
inline constexpr double kAlgebra = 1e-12;
inline constexpr double kTrace = 1e-9;
}  // namespace tol

/// Dense square complex matrix, row-major storage.
///
/// Carries Hamiltonians, density matrices, jump operators and (at dim^2)
/// superoperators. Values are plain data: copy freely, no shared state.
class ComplexMatrix {
 public:
  /// Zero matrix of size dim x dim. Throws ValidationError for dim == 0.
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<cplx> row_major);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);

  std::size_t dim() const noexcept { return dim_; }

  cplx& operator()(std::size_t row, std::size_t col) noexcept { return data_[row * dim_ + col]; }
  const cplx& operator()(std::size_t row, std::size_t col) const noexcept {
    return data_[row * dim_ + col];
  }

  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  cplx trace() const noexcept;
  std::vector<double> real_diagonal() const;

  /// Frobenius norm.
  double norm() const noexcept;
  double max_abs() const noexcept;

  bool is_hermitian(double tolerance = tol::kHermitian) const;
  bool is_traceless(double tolerance = tol::kAlgebra) const;
  /// Hermitian and minimum eigenvalue >= -tolerance.
  bool is_psd(double tolerance = tol::kPsd) const;
  bool all_finite() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx scale) noexcept;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(cplx scale, ComplexMatrix m);
ComplexMatrix operator*(ComplexMatrix m, cplx scale);

/// AB - BA
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
/// AB + BA
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // orthonormal columns, vectors(:, k) pairs with values[k]
};

/// Eigen-decomposition of a Hermitian matrix.
///
/// Each eigenvector is rotated so that its largest-magnitude component is
/// real and positive (first such index on ties), which makes the output
/// deterministic up to degenerate subspaces.
EigenDecomposition hermitian_eig(const ComplexMatrix& h, double hermitian_tol = tol::kHermitian);

/// Eigenvalues of a Hermitian matrix, ascending.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h,
                                          double hermitian_tol = tol::kHermitian);

struct GeneralEigenDecomposition {
  std::vector<cplx> values;
  ComplexMatrix vectors;  // column k pairs with values[k]
};

/// Eigenvalues and eigenvectors of an arbitrary square matrix (no ordering guarantee).
GeneralEigenDecomposition general_eig(const ComplexMatrix& m);
std::vector<cplx> general_eigenvalues(const ComplexMatrix& m);

/// exp(A) by scaling and squaring with a Pade approximant.
ComplexMatrix matrix_exp(const ComplexMatrix& a);

/// Column-stacking: entry (row, col) lands at index row + col * dim.
std::vector<cplx> vectorize(const ComplexMatrix& m);
ComplexMatrix devectorize(std::span<const cplx> v, std::size_t dim);

/// y = M x for a dense matrix and a vector of matching length.
std::vector<cplx> matvec(const ComplexMatrix& m, std::span<const cplx> x);

/// 1/2 ||a - b||_1 for Hermitian arguments.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

}  // namespace ebe
