#include "ebe/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ebe/errors.hpp"

namespace ebe {

namespace {

void check_batch(const RhsSpec& spec, std::span<const ComplexMatrix> in,
                 std::span<ComplexMatrix> out) {
  spec.validate();
  require(in.size() == out.size(), "apply_batch: input and output batch sizes differ");
  for (std::size_t k = 0; k < in.size(); ++k)
    require(in[k].dim() == spec.dim() && out[k].dim() == spec.dim(),
            "apply_batch: matrix dimension does not match spec");
}

void fill_column(const RhsSpec& spec, std::size_t column, ComplexMatrix& unit,
                 ComplexMatrix& image, ComplexMatrix& s) {
  const std::size_t n = spec.dim();
  const std::size_t row = column % n, col = column / n;
  unit(row, col) = 1.0;
  master_rhs_into(unit, spec, image);
  unit(row, col) = 0.0;
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) s(r + c * n, column) = image(r, c);
}

void check_superoperator(const RhsSpec& spec) {
  spec.validate();
  require(spec.dim() <= kMaxSuperoperatorDim,
          "build_superoperator: dim exceeds the guard of " + std::to_string(kMaxSuperoperatorDim));
}

}  // namespace

void apply_batch_serial(const RhsSpec& spec, std::span<const ComplexMatrix> in,
                        std::span<ComplexMatrix> out) {
  check_batch(spec, in, out);
  for (std::size_t k = 0; k < in.size(); ++k) master_rhs_into(in[k], spec, out[k]);
}

void apply_batch(const RhsSpec& spec, std::span<const ComplexMatrix> in,
                 std::span<ComplexMatrix> out) {
  check_batch(spec, in, out);
  const auto count = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < count; ++k) master_rhs_into(in[k], spec, out[k]);
}

ComplexMatrix build_superoperator_serial(const RhsSpec& spec) {
  check_superoperator(spec);
  const std::size_t n = spec.dim();
  ComplexMatrix s(n * n), unit(n), image(n);
  for (std::size_t column = 0; column < n * n; ++column) fill_column(spec, column, unit, image, s);
  return s;
}

ComplexMatrix build_superoperator(const RhsSpec& spec) {
  check_superoperator(spec);
  const std::size_t n = spec.dim();
  ComplexMatrix s(n * n);
  const auto columns = static_cast<std::ptrdiff_t>(n * n);
#pragma omp parallel
  {
    ComplexMatrix unit(n), image(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t column = 0; column < columns; ++column)
      fill_column(spec, static_cast<std::size_t>(column), unit, image, s);
  }
  return s;
}

int kernel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace ebe
