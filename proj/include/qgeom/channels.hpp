#pragma once

#include "qgeom/opspace.hpp"
#include "qgeom/states.hpp"

#include <cstdint>
#include <vector>

namespace qgeom {

inline constexpr double kTracePreservingTol = 1e-9;

/// CPTP map in Kraus form; sum_i A_i^dagger A_i = I within 1e-9.
class KrausChannel {
public:
  explicit KrausChannel(std::vector<ComplexMatrix> kraus);

  std::size_t in_dim() const { return in_dim_; }
  std::size_t out_dim() const { return out_dim_; }
  std::size_t kraus_count() const { return kraus_.size(); }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }

  /// max |sum A_i^dagger A_i - I|
  double trace_preservation_residual() const;
  bool is_unital(double tol = 1e-9) const;
  /// Transfer matrix sum_i A_i kron conj(A_i) acting on row-major vec (square channels).
  SuperOperator superoperator() const;

private:
  std::size_t in_dim_ = 0;
  std::size_t out_dim_ = 0;
  std::vector<ComplexMatrix> kraus_;
};

KrausChannel identity_channel(std::size_t n);
KrausChannel unitary_channel(const ComplexMatrix& u);
/// {sqrt(1-p) I, sqrt(p) Z} on a qubit.
KrausChannel dephasing_channel(double p);
/// Qubit depolarizing with strength p; p = 1 maps every state to I/2.
KrausChannel depolarizing_channel(double p);

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho);
ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& m);
HermitianMatrix apply_tangent(const KrausChannel& ch, const HermitianMatrix& a);

struct SqrtPushforward {
  ComplexMatrix matrix;  // sum_i A_i sqrt(rho) A_i^dagger
  double deviation;      // Frobenius distance to sqrt(E(rho))
};
SqrtPushforward sqrt_kraus_pushforward(const DensityMatrix& rho, const KrausChannel& ch);

/// Minimal dilation: environment dimension = kraus count, system kron env
/// ordering (index x * m + e), env_state = |0>.
struct StinespringDilation {
  ComplexMatrix unitary;
  ComplexVector env_state;
  std::size_t system_dim = 0;
  std::size_t env_dim = 0;

  /// Tr_env U (rho kron |nu><nu|) U^dagger
  ComplexMatrix apply(const ComplexMatrix& rho) const;
};

/// Throws TooManyKraus when the kraus count exceeds n^2.
StinespringDilation stinespring(const KrausChannel& ch, std::uint64_t completion_seed = 0);

/// Kraus operators from a Haar-random isometry of shape (n k) x n.
KrausChannel random_channel(std::size_t dim, std::size_t kraus_count, std::uint64_t seed);

/// Kraus path A_k(t) = <k| e^{i H_AB t} |nu> and its derivative at t = 0:
/// A_k(0) = <k|nu> I, dA_k/dt = i <k|H_AB|nu>.
struct KrausPath {
  std::vector<ComplexMatrix> kraus;
  std::vector<ComplexMatrix> derivatives;
};
KrausPath kraus_path_from_generator(const HermitianMatrix& h_ab, const ComplexVector& nu, std::size_t n);

}  // namespace qgeom
