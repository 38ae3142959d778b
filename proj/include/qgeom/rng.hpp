#pragma once

#include "qgeom/opspace.hpp"

#include <cstdint>
#include <random>

namespace qgeom {

/// SplitMix64 finalizer; used to derive independent per-trial streams from a
/// master seed so that scans are reproducible regardless of evaluation order.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

/// Seeded generator. The distributions are implemented here rather than taken
/// from <random> so that draws are identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller (one draw per call, no caching).
  double normal();
  Complex complex_normal();
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

  ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols);

private:
  std::mt19937_64 engine_;
};

ComplexMatrix random_hermitian(Rng& rng, std::size_t n);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
ComplexMatrix random_unitary(Rng& rng, std::size_t n);
ComplexVector random_unit_vector(Rng& rng, std::size_t n);

/// Orthonormalize the columns of `m` in place order (modified Gram-Schmidt,
/// two passes). Columns that become numerically dependent are left as zero and
/// the function returns the number of independent columns.
std::size_t gram_schmidt(ComplexMatrix& m, double tol = 1e-12);

}  // namespace qgeom
