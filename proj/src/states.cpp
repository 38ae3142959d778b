#include "qgeom/states.hpp"

#include "qgeom/errors.hpp"
#include "qgeom/rng.hpp"

#include <cmath>
#include <limits>

namespace qgeom {

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(const HermitianMatrix& m) : rho_(m), spectral_(hermitian_eig(m)) {
  const double tr = rho_.trace();
  if (std::abs(tr - 1.0) > kTraceTol)
    throw InvalidDensity("DensityMatrix: trace " + std::to_string(tr) + " differs from 1");
  if (spectral_.eigenvalues(0) < -kPsdTol)
    throw InvalidDensity("DensityMatrix: negative eigenvalue " + std::to_string(spectral_.eigenvalues(0)));
}

RealVector DensityMatrix::clamped_eigenvalues() const {
  RealVector l = spectral_.eigenvalues;
  for (Eigen::Index i = 0; i < l.size(); ++i)
    if (l(i) < kEigenvalueFloor) l(i) = 0.0;
  return l;
}

HermitianMatrix DensityMatrix::sqrt() const {
  // Eigenvalues down to -1e-10 are admitted by the type; clamp them all.
  SpectralDecomposition s = spectral_;
  s.eigenvalues = clamped_eigenvalues();
  return matrix_function(s, sqrt_map());
}

HermitianMatrix DensityMatrix::power(double alpha) const {
  SpectralDecomposition s = spectral_;
  s.eigenvalues = clamped_eigenvalues();
  return matrix_function(s, power_map(alpha));
}

// ---------------------------------------------------------------------------
// StateFamily

StateFamily::StateFamily(std::string kind, std::size_t dim, std::size_t param_count,
                         Evaluator evaluator, Derivative derivative, double fd_step)
    : kind_(std::move(kind)), dim_(dim), param_count_(param_count), evaluator_(std::move(evaluator)),
      derivative_(std::move(derivative)), fd_step_(fd_step) {
  if (param_count_ == 0) throw BadFamily("StateFamily: at least one parameter is required");
  if (!evaluator_) throw BadFamily("StateFamily: missing evaluator");
}

void StateFamily::check_theta(const Theta& theta) const {
  if (theta.size() != param_count_)
    throw ShapeError("StateFamily: expected " + std::to_string(param_count_) + " parameters, got " +
                     std::to_string(theta.size()));
}

DensityMatrix StateFamily::evaluate(const Theta& theta) const {
  check_theta(theta);
  DensityMatrix rho = evaluator_(theta);
  if (rho.dim() != dim_) throw ShapeError("StateFamily: evaluator returned wrong dimension");
  return rho;
}

std::vector<HermitianMatrix> StateFamily::derivatives(const Theta& theta) const {
  check_theta(theta);
  if (!derivative_) return finite_difference(theta, fd_step_);
  auto d = derivative_(theta);
  if (d.size() != param_count_) throw ShapeError("StateFamily: derivative count mismatch");
  for (const auto& di : d) {
    if (di.dim() != dim_) throw ShapeError("StateFamily: derivative dimension mismatch");
    if (std::abs(di.matrix().trace()) > 1e-9 * std::max(1.0, max_abs(di.matrix())))
      throw BadFamily("StateFamily: analytic derivative is not traceless");
  }
  return d;
}

std::vector<HermitianMatrix> StateFamily::finite_difference(const Theta& theta, double h) const {
  check_theta(theta);
  std::vector<HermitianMatrix> out;
  out.reserve(param_count_);
  for (std::size_t i = 0; i < param_count_; ++i) {
    const double step =
        h > 0.0 ? h : std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + std::abs(theta[i]));
    Theta plus = theta;
    Theta minus = theta;
    plus[i] += step;
    minus[i] -= step;
    const ComplexMatrix diff = (evaluator_(plus).matrix() - evaluator_(minus).matrix()) / (2.0 * step);
    out.push_back(HermitianMatrix::symmetrized(diff));
  }
  return out;
}

StateFamily StateFamily::without_analytic_derivative(double fd_step) const {
  return StateFamily(kind_, dim_, param_count_, evaluator_, {}, fd_step);
}

namespace {

ComplexMatrix unitary_exp(const SpectralDecomposition& h, double t) {
  ComplexVector phases(h.eigenvalues.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, h.eigenvalues(k) * t);
  return h.eigenvectors * phases.asDiagonal() * h.eigenvectors.adjoint();
}

void require_unitary(const ComplexMatrix& u, const char* what) {
  if (u.rows() != u.cols()) throw ShapeError(std::string(what) + ": basis must be square");
  if (unitarity_residual(u) > kUnitaryTol) throw NonUnitaryGauge(std::string(what) + ": basis is not unitary");
}

}  // namespace

StateFamily family_unitary_orbit(const DensityMatrix& rho0, const HermitianMatrix& h) {
  if (rho0.dim() != h.dim()) throw ShapeError("family_unitary_orbit: dimension mismatch");
  const SpectralDecomposition hs = hermitian_eig(h);
  const ComplexMatrix r0 = rho0.matrix();
  const ComplexMatrix hm = h.matrix();
  auto rho_at = [hs, r0](double t) {
    const ComplexMatrix u = unitary_exp(hs, t);
    return HermitianMatrix::symmetrized(u * r0 * u.adjoint());
  };
  auto evaluator = [rho_at](const Theta& th) { return DensityMatrix(rho_at(th[0])); };
  auto derivative = [rho_at, hm](const Theta& th) {
    const ComplexMatrix r = rho_at(th[0]).matrix();
    return std::vector<HermitianMatrix>{HermitianMatrix::symmetrized(Complex(0, 1) * commutator(hm, r))};
  };
  return StateFamily("unitary_orbit", rho0.dim(), 1, evaluator, derivative);
}

StateFamily family_eigenvalue_path(std::function<RealVector(double)> lambda,
                                   std::function<RealVector(double)> lambda_dot,
                                   const ComplexMatrix& basis) {
  require_unitary(basis, "family_eigenvalue_path");
  const auto n = static_cast<std::size_t>(basis.rows());
  auto point = [lambda, n](double t) {
    RealVector l = lambda(t);
    if (static_cast<std::size_t>(l.size()) != n) throw ShapeError("family_eigenvalue_path: lambda has wrong length");
    if (std::abs(l.sum() - 1.0) > kTraceTol || l.minCoeff() < -kNegativeClamp)
      throw SimplexViolation("family_eigenvalue_path: lambda(" + std::to_string(t) + ") is off the simplex");
    return l;
  };
  auto evaluator = [point, basis](const Theta& th) {
    const RealVector l = point(th[0]);
    return DensityMatrix(HermitianMatrix::symmetrized(basis * l.cast<Complex>().asDiagonal() * basis.adjoint()));
  };
  auto derivative = [lambda_dot, basis, n](const Theta& th) {
    const RealVector ld = lambda_dot(th[0]);
    if (static_cast<std::size_t>(ld.size()) != n) throw ShapeError("family_eigenvalue_path: lambda_dot has wrong length");
    return std::vector<HermitianMatrix>{
        HermitianMatrix::symmetrized(basis * ld.cast<Complex>().asDiagonal() * basis.adjoint())};
  };
  return StateFamily("eigenvalue_path", n, 1, evaluator, derivative);
}

StateFamily family_linear_eigenvalue_path(const RealVector& lambda0, const RealVector& slope,
                                          const ComplexMatrix& basis) {
  if (lambda0.size() != slope.size() || lambda0.size() != basis.rows())
    throw ShapeError("family_linear_eigenvalue_path: length mismatch");
  if (std::abs(slope.sum()) > kTraceTol)
    throw SimplexViolation("family_linear_eigenvalue_path: slope must sum to zero");
  return family_eigenvalue_path([lambda0, slope](double t) -> RealVector { return lambda0 + t * slope; },
                                [slope](double) -> RealVector { return slope; }, basis);
}

StateFamily family_affine(const DensityMatrix& rho0, const std::vector<HermitianMatrix>& directions) {
  if (directions.empty()) throw BadFamily("family_affine: no directions");
  for (const auto& d : directions) {
    if (d.dim() != rho0.dim()) throw ShapeError("family_affine: direction dimension mismatch");
    if (std::abs(d.trace()) > 1e-9 * std::max(1.0, max_abs(d.matrix())))
      throw BadFamily("family_affine: directions must be traceless");
  }
  const ComplexMatrix r0 = rho0.matrix();
  std::vector<ComplexMatrix> dirs;
  for (const auto& d : directions) dirs.push_back(d.matrix());
  auto evaluator = [r0, dirs](const Theta& th) {
    ComplexMatrix r = r0;
    for (std::size_t k = 0; k < dirs.size(); ++k) r += th[k] * dirs[k];
    return DensityMatrix(HermitianMatrix::symmetrized(r));
  };
  auto derivative = [directions](const Theta&) { return directions; };
  return StateFamily("affine", rho0.dim(), directions.size(), evaluator, derivative);
}

// ---------------------------------------------------------------------------
// Purification

ComplexMatrix purification_matrix(const ComplexMatrix& sqrt_rho, const ComplexMatrix& va,
                                  const ComplexMatrix& vb) {
  return sqrt_rho * va * vb.transpose();
}

Purification purify(const DensityMatrix& rho, const ComplexMatrix& va, const ComplexMatrix& vb) {
  const auto n = static_cast<Eigen::Index>(rho.dim());
  if (va.rows() != n || va.cols() != n || vb.rows() != n || vb.cols() != n)
    throw ShapeError("purify: gauge dimension mismatch");
  if (unitarity_residual(va) > kUnitaryTol) throw NonUnitaryGauge("purify: V_A is not unitary");
  if (unitarity_residual(vb) > kUnitaryTol) throw NonUnitaryGauge("purify: V_B is not unitary");
  return Purification{vec(purification_matrix(rho.sqrt().matrix(), va, vb)), rho, va, vb};
}

ComplexMatrix Purification::reduced_a() const {
  const ComplexMatrix m = unvec(vector, source.dim());
  return m * m.adjoint();
}

ComplexMatrix Purification::reduced_b() const {
  const ComplexMatrix m = unvec(vector, source.dim());
  return m.transpose() * m.conjugate();
}

ComplexVector projective_differential(const ComplexVector& psi, const ComplexVector& dpsi) {
  if (psi.size() != dpsi.size()) throw ShapeError("projective_differential: length mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw NonUnitState("projective_differential: psi is not normalized");
  return dpsi - psi * psi.dot(dpsi);
}

// ---------------------------------------------------------------------------
// Sampling

DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed) {
  if (rank < 1 || rank > dim)
    throw BadRank("random_density: rank " + std::to_string(rank) + " not in [1, " + std::to_string(dim) + "]");
  Rng rng(seed);
  const ComplexMatrix g = rng.gaussian_matrix(dim, rank);
  const ComplexMatrix w = g * g.adjoint();
  return DensityMatrix(HermitianMatrix::symmetrized(w / w.trace().real()));
}

DensityMatrix mix_with_identity(const DensityMatrix& rho, double w) {
  const auto n = rho.dim();
  return DensityMatrix(HermitianMatrix::symmetrized((1.0 - w) * rho.matrix() +
                                                    (w / static_cast<double>(n)) * identity(n)));
}

double classical_fisher(const RealVector& lambda, const RealVector& lambda_dot, double tol) {
  double f = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda(i) > tol) f += lambda_dot(i) * lambda_dot(i) / lambda(i);
  return f;
}

}  // namespace qgeom
