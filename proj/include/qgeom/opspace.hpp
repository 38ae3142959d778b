#pragma once

// Dense complex-matrix substrate: Hermitian eigendecomposition, matrix
// functions, vectorization and superoperators on the n^2-dimensional operator
// space.
//
// Vectorization convention (used everywhere in the library): row-major
// stacking, vec(M)[i*n + j] = M(i, j). With this convention
//   vec(X M Y^T) = (X kron Y) vec(M),
// vec(M) = (M kron I) sum_i |i>|i>, and the purification sum_i |i i> is vec(I).

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>

namespace qgeom {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianInputTol = 1e-10;
inline constexpr double kNegativeClamp = 1e-12;
inline constexpr double kJacobiTol = 1e-13;

double max_abs(const ComplexMatrix& m);
double hermiticity_residual(const ComplexMatrix& m);
/// max |U^dagger U - I|
double unitarity_residual(const ComplexMatrix& u);
ComplexMatrix identity(std::size_t n);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Square complex matrix that is Hermitian by construction.
///
/// The validating constructor accepts inputs whose residual max|M - M^dagger|
/// is within 1e-10 relative to max(1, max|M|) and stores the exact Hermitian
/// part (M + M^dagger)/2, so the stored residual is zero.
class HermitianMatrix {
public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m);

  /// Trusted construction for matrices produced by library algebra; only
  /// symmetrizes, never throws on residual (shape is still checked).
  static HermitianMatrix symmetrized(const ComplexMatrix& m);
  static HermitianMatrix zero(std::size_t n);
  static HermitianMatrix diagonal(const RealVector& d);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

private:
  ComplexMatrix m_;
};

struct SpectralDecomposition {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // columns, unitary

  std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }
  ComplexMatrix reconstruct() const;
  ComplexMatrix to_eigenbasis(const ComplexMatrix& m) const {
    return eigenvectors.adjoint() * m * eigenvectors;
  }
  ComplexMatrix from_eigenbasis(const ComplexMatrix& m) const {
    return eigenvectors * m * eigenvectors.adjoint();
  }
};

/// Cyclic complex Jacobi. Sweeps until the off-diagonal Frobenius norm is at
/// most 1e-13 * ||M||_F. Deterministic; eigenvalues sorted ascending.
SpectralDecomposition hermitian_eig(const HermitianMatrix& m);
/// Validating overload: throws NonHermitianInput when the residual is too large.
SpectralDecomposition hermitian_eig(const ComplexMatrix& m);

/// Scalar map applied through the spectral calculus.
struct ScalarMap {
  std::string name;
  std::function<double(double)> fn;
  /// Smallest admissible eigenvalue. With `clamp_negative`, eigenvalues in
  /// [-1e-12, domain_min) are raised to domain_min first.
  double domain_min = -std::numeric_limits<double>::infinity();
  bool clamp_negative = false;
  /// Whether the domain includes domain_min itself.
  bool closed = true;
};

ScalarMap sqrt_map();
ScalarMap power_map(double alpha);
/// x^(-1/2) on (0, inf)
ScalarMap inv_sqrt_map();
ScalarMap inverse_map();

HermitianMatrix matrix_function(const SpectralDecomposition& s, const ScalarMap& f);
HermitianMatrix matrix_function(const HermitianMatrix& m, const ScalarMap& f);

ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, std::size_t n);
ComplexMatrix unvec(const ComplexVector& v, std::size_t rows, std::size_t cols);

/// Linear map on n x n operators, stored as an n^2 x n^2 matrix acting on vec(M).
class SuperOperator {
public:
  SuperOperator() = default;
  explicit SuperOperator(ComplexMatrix matrix);

  std::size_t dim() const { return dim_; }
  const ComplexMatrix& matrix() const { return matrix_; }

  ComplexMatrix apply(const ComplexMatrix& m) const;
  SuperOperator adjoint() const { return SuperOperator(matrix_.adjoint()); }
  SuperOperator operator*(const SuperOperator& other) const;
  SuperOperator operator+(const SuperOperator& other) const;
  SuperOperator operator-(const SuperOperator& other) const;
  SuperOperator scaled(Complex s) const { return SuperOperator(matrix_ * s); }

  static SuperOperator identity(std::size_t n);

private:
  std::size_t dim_ = 0;
  ComplexMatrix matrix_;
};

/// M -> X M
SuperOperator left_super(const ComplexMatrix& x);
/// M -> M X
SuperOperator right_super(const ComplexMatrix& x);

/// Tr_B of an operator on H_A (dim n) kron H_B (dim m).
ComplexMatrix partial_trace_second(const ComplexMatrix& op, std::size_t n, std::size_t m);
/// Tr_A of an operator on H_A (dim n) kron H_B (dim m).
ComplexMatrix partial_trace_first(const ComplexMatrix& op, std::size_t n, std::size_t m);

/// Smallest eigenvalue of the Hermitian part of m.
double min_eigenvalue(const ComplexMatrix& m);

}  // namespace qgeom
