#pragma once

#include "qgeom/opspace.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qgeom {

inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;
/// Eigenvalues of a density matrix below this are round-off and read as zero.
inline constexpr double kEigenvalueFloor = 1e-14;

/// Positive semidefinite, unit-trace Hermitian matrix with its spectral
/// decomposition computed once at construction.
class DensityMatrix {
public:
  explicit DensityMatrix(const HermitianMatrix& m);
  explicit DensityMatrix(const ComplexMatrix& m) : DensityMatrix(HermitianMatrix(m)) {}

  std::size_t dim() const { return rho_.dim(); }
  const HermitianMatrix& hermitian() const { return rho_; }
  const ComplexMatrix& matrix() const { return rho_.matrix(); }
  const SpectralDecomposition& spectral() const { return spectral_; }
  double min_eigenvalue() const { return spectral_.eigenvalues(0); }
  /// Eigenvalues with everything below kEigenvalueFloor set to zero.
  RealVector clamped_eigenvalues() const;

  HermitianMatrix sqrt() const;
  HermitianMatrix power(double alpha) const;

private:
  HermitianMatrix rho_;
  SpectralDecomposition spectral_;
};

using Theta = std::vector<double>;

enum class DerivativeMode { analytic, finite_difference };

/// Differentiable map theta -> rho(theta).
///
/// Evaluators must be pure. With an analytic derivative every d rho / d theta_i
/// is checked to be traceless within 1e-9; otherwise central differences with
/// step h (default cbrt(eps) * (1 + |theta_i|)) are used.
class StateFamily {
public:
  using Evaluator = std::function<DensityMatrix(const Theta&)>;
  using Derivative = std::function<std::vector<HermitianMatrix>(const Theta&)>;

  StateFamily(std::string kind, std::size_t dim, std::size_t param_count, Evaluator evaluator,
              Derivative derivative = {}, double fd_step = 0.0);

  const std::string& kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  std::size_t param_count() const { return param_count_; }
  DerivativeMode mode() const {
    return derivative_ ? DerivativeMode::analytic : DerivativeMode::finite_difference;
  }

  DensityMatrix evaluate(const Theta& theta) const;
  std::vector<HermitianMatrix> derivatives(const Theta& theta) const;
  /// Central differences regardless of mode; h <= 0 selects the default step.
  std::vector<HermitianMatrix> finite_difference(const Theta& theta, double h = 0.0) const;

  /// Same family with the analytic derivative dropped.
  StateFamily without_analytic_derivative(double fd_step = 0.0) const;

private:
  void check_theta(const Theta& theta) const;

  std::string kind_;
  std::size_t dim_;
  std::size_t param_count_;
  Evaluator evaluator_;
  Derivative derivative_;
  double fd_step_;
};

/// t -> e^{iHt} rho0 e^{-iHt}, derivative i[H, rho(t)].
StateFamily family_unitary_orbit(const DensityMatrix& rho0, const HermitianMatrix& h);

/// Commuting family U diag(lambda(theta)) U^dagger. The callbacks must return a
/// point of the probability simplex (checked to 1e-10) and its derivative.
StateFamily family_eigenvalue_path(std::function<RealVector(double)> lambda,
                                   std::function<RealVector(double)> lambda_dot,
                                   const ComplexMatrix& basis);
/// lambda(theta) = lambda0 + theta * slope, with sum(slope) = 0.
StateFamily family_linear_eigenvalue_path(const RealVector& lambda0, const RealVector& slope,
                                          const ComplexMatrix& basis);

/// rho(theta) = rho0 + sum_k theta_k * D_k with traceless Hermitian D_k.
StateFamily family_affine(const DensityMatrix& rho0, const std::vector<HermitianMatrix>& directions);

/// Purification (sqrt(rho) V_A kron V_B) sum_i |i i> = vec(sqrt(rho) V_A V_B^T).
struct Purification {
  ComplexVector vector;
  DensityMatrix source;
  ComplexMatrix gauge_a;
  ComplexMatrix gauge_b;

  ComplexMatrix reduced_a() const;
  ComplexMatrix reduced_b() const;
};

Purification purify(const DensityMatrix& rho, const ComplexMatrix& va, const ComplexMatrix& vb);
/// sqrt(rho) V_A V_B^T, the n x n matrix whose vec is the purification.
ComplexMatrix purification_matrix(const ComplexMatrix& sqrt_rho, const ComplexMatrix& va,
                                  const ComplexMatrix& vb);

/// d psi - psi <psi|d psi> for a unit vector psi.
ComplexVector projective_differential(const ComplexVector& psi, const ComplexVector& dpsi);

/// Hilbert-Schmidt (Ginibre) sample G G^dagger / Tr(G G^dagger), G dim x rank.
DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed);

/// Mixture (1 - w) rho + w I/n; keeps sampled states away from the boundary.
DensityMatrix mix_with_identity(const DensityMatrix& rho, double w);

/// Classical Fisher information sum lambda_dot^2 / lambda over lambda > tol.
double classical_fisher(const RealVector& lambda, const RealVector& lambda_dot, double tol = 1e-14);

}  // namespace qgeom
