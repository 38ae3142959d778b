#pragma once

// Generators on the purification space whose measured variance reproduces the
// Fubini-Study metric, and a shot-noise simulator for that measurement.

#include "qgeom/opspace.hpp"
#include "qgeom/states.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qgeom {

struct GeneratorSolution {
  HermitianMatrix h_ab;
  /// || i H_AB psi - dpsi ||
  double residual = 0.0;
  std::string construction;  // "commutator" | "rank2"
};

/// H_AB = H_A kron I - I kron H_A^T, so that i H_AB vec(sqrt rho) = vec(i[H_A, sqrt rho]),
/// the square-root derivative along the orbit exp(iH t) rho exp(-iH t).
GeneratorSolution generator_commutator(const DensityMatrix& rho, const HermitianMatrix& h_a);

/// H = -i(|dpsi><psi| - |psi><dpsi|) - Im<psi|dpsi> |psi><psi|, which satisfies
/// i H psi = dpsi whenever Re<psi|dpsi> = 0.
GeneratorSolution generator_rank2(const ComplexVector& psi, const ComplexVector& dpsi);

/// <psi|H^2|psi> - <psi|H|psi>^2
double exact_variance(const HermitianMatrix& h, const ComplexVector& psi);

struct EstimateRecord {
  double exact_variance = 0.0;
  double sample_variance = 0.0;
  double stderr_estimate = 0.0;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::string construction;
  std::vector<std::string> warnings;
};

/// Shots are drawn in blocks of this size, block b using stream_seed(seed, b).
inline constexpr std::uint64_t kShotBlock = 4096;
/// Eigenvalues of H closer than this are merged into one outcome.
inline constexpr double kOutcomeMergeTol = 1e-9;

EstimateRecord simulate_variance(const HermitianMatrix& h, const ComplexVector& psi, std::uint64_t shots,
                                 std::uint64_t seed, const std::string& construction = "");

}  // namespace qgeom
