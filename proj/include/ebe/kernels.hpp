#pragma once

#include <span>

#include "ebe/dissipators.hpp"
#include "ebe/linalg.hpp"

namespace ebe {

// Batched right-hand-side kernels. Each `*_serial` function is the reference
// implementation; the unsuffixed variant distributes independent items over
// OpenMP threads and produces bitwise-identical results.

/// out[k] = master_rhs(in[k], spec). `out` must have in.size() entries of the
/// spec's dimension.
void apply_batch_serial(const RhsSpec& spec, std::span<const ComplexMatrix> in,
                        std::span<ComplexMatrix> out);
void apply_batch(const RhsSpec& spec, std::span<const ComplexMatrix> in,
                 std::span<ComplexMatrix> out);

inline constexpr std::size_t kMaxSuperoperatorDim = 64;

/// Matrix S of rho -> master_rhs(rho) under column-stacking, built by applying
/// the rhs to the dim^2 matrix units. Throws ValidationError for dim > 64.
ComplexMatrix build_superoperator_serial(const RhsSpec& spec);
ComplexMatrix build_superoperator(const RhsSpec& spec);

/// Number of threads the parallel kernels will use.
int kernel_threads();

}  // namespace ebe
