#include "qgeom/opspace.hpp"

#include "qgeom/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace qgeom {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw ShapeError(std::string(what) + ": expected a square matrix, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

double off_diagonal_norm2(const ComplexMatrix& a) {
  double s = 0.0;
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if (i != j) s += std::norm(a(i, j));
  return s;
}

}  // namespace

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(m - m.adjoint());
}

double unitarity_residual(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
}

ComplexMatrix identity(std::size_t n) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// ---------------------------------------------------------------------------
// HermitianMatrix

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
  require_square(m, "HermitianMatrix");
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw NonHermitianInput("HermitianMatrix: non-finite entry");
  }
  const double scale = std::max(1.0, max_abs(m));
  const double residual = hermiticity_residual(m);
  if (residual > kHermitianInputTol * scale) {
    throw NonHermitianInput("HermitianMatrix: residual max|M - M^dagger| = " +
                            std::to_string(residual));
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::symmetrized(const ComplexMatrix& m) {
  require_square(m, "HermitianMatrix::symmetrized");
  HermitianMatrix h;
  h.m_ = 0.5 * (m + m.adjoint());
  return h;
}

HermitianMatrix HermitianMatrix::zero(std::size_t n) {
  return symmetrized(ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& d) {
  ComplexMatrix m = ComplexMatrix::Zero(d.size(), d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) m(i, i) = d(i);
  return symmetrized(m);
}

// ---------------------------------------------------------------------------
// Jacobi eigensolver

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition hermitian_eig(const HermitianMatrix& hm) {
  ComplexMatrix a = hm.matrix();
  const Eigen::Index n = a.rows();
  ComplexMatrix u = ComplexMatrix::Identity(n, n);

  const double total = a.squaredNorm();
  const double target = kJacobiTol * kJacobiTol * total;
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm2(a) > target; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Skip rotations that cannot change the diagonal in floating point.
        if (sweep > 3 && std::abs(app) + 100.0 * g == std::abs(app) &&
            std::abs(aqq) + 100.0 * g == std::abs(aqq)) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const Complex phase = apq / g;
        const double zeta = (aqq - app) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Rotation acting on columns p, q: diag(1, conj(phase)) * [[c, s], [-s, c]].
        const Complex vpp = c;
        const Complex vpq = s;
        const Complex vqp = -s * std::conj(phase);
        const Complex vqq = c * std::conj(phase);

        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * vpp + akq * vqp;
          a(k, q) = akp * vpq + akq * vqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
          a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex ukp = u(k, p);
          const Complex ukq = u(k, q);
          u(k, p) = ukp * vpp + ukq * vqp;
          u(k, q) = ukp * vpq + ukq * vqq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() < a(j, j).real(); });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
    out.eigenvectors.col(k) = u.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

SpectralDecomposition hermitian_eig(const ComplexMatrix& m) {
  return hermitian_eig(HermitianMatrix(m));
}

double min_eigenvalue(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return hermitian_eig(HermitianMatrix::symmetrized(m)).eigenvalues(0);
}

// ---------------------------------------------------------------------------
// Matrix functions

ScalarMap sqrt_map() {
  return {"sqrt", [](double x) { return std::sqrt(x); }, 0.0, true, true};
}

ScalarMap power_map(double alpha) {
  ScalarMap m;
  m.name = "power(" + std::to_string(alpha) + ")";
  m.fn = [alpha](double x) { return x == 0.0 ? (alpha == 0.0 ? 1.0 : 0.0) : std::pow(x, alpha); };
  m.domain_min = 0.0;
  m.clamp_negative = true;
  m.closed = alpha >= 0.0;
  return m;
}

ScalarMap inv_sqrt_map() {
  return {"inv_sqrt", [](double x) { return 1.0 / std::sqrt(x); }, 0.0, false, false};
}

ScalarMap inverse_map() {
  return {"inverse", [](double x) { return 1.0 / x; }, 0.0, false, false};
}

HermitianMatrix matrix_function(const SpectralDecomposition& s, const ScalarMap& f) {
  const Eigen::Index n = s.eigenvalues.size();
  RealVector mapped(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double x = s.eigenvalues(i);
    if (f.clamp_negative && x < f.domain_min && x >= f.domain_min - kNegativeClamp) x = f.domain_min;
    const bool inside = f.closed ? x >= f.domain_min : x > f.domain_min;
    if (!inside) throw DomainError(s.eigenvalues(i), f.name);
    const double y = f.fn(x);
    if (!std::isfinite(y)) throw DomainError(s.eigenvalues(i), f.name);
    mapped(i) = y;
  }
  return HermitianMatrix::symmetrized(s.eigenvectors * mapped.cast<Complex>().asDiagonal() *
                                      s.eigenvectors.adjoint());
}

HermitianMatrix matrix_function(const HermitianMatrix& m, const ScalarMap& f) {
  return matrix_function(hermitian_eig(m), f);
}

// ---------------------------------------------------------------------------
// Vectorization and superoperators

ComplexVector vec(const ComplexMatrix& m) {
  ComplexVector v(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

ComplexMatrix unvec(const ComplexVector& v, std::size_t rows, std::size_t cols) {
  if (static_cast<std::size_t>(v.size()) != rows * cols)
    throw ShapeError("unvec: vector of length " + std::to_string(v.size()) + " cannot fill " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = v(i * m.cols() + j);
  return m;
}

ComplexMatrix unvec(const ComplexVector& v, std::size_t n) { return unvec(v, n, n); }

SuperOperator::SuperOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  require_square(matrix_, "SuperOperator");
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(matrix_.rows()))));
  if (n * n != static_cast<std::size_t>(matrix_.rows()))
    throw ShapeError("SuperOperator: side " + std::to_string(matrix_.rows()) + " is not a square number");
  dim_ = n;
}

ComplexMatrix SuperOperator::apply(const ComplexMatrix& m) const {
  if (static_cast<std::size_t>(m.rows()) != dim_ || static_cast<std::size_t>(m.cols()) != dim_)
    throw ShapeError("SuperOperator::apply: operand dimension mismatch");
  return unvec(matrix_ * vec(m), dim_);
}

SuperOperator SuperOperator::operator*(const SuperOperator& other) const {
  if (dim_ != other.dim_) throw ShapeError("SuperOperator product: dimension mismatch");
  return SuperOperator(matrix_ * other.matrix_);
}

SuperOperator SuperOperator::operator+(const SuperOperator& other) const {
  if (dim_ != other.dim_) throw ShapeError("SuperOperator sum: dimension mismatch");
  return SuperOperator(matrix_ + other.matrix_);
}

SuperOperator SuperOperator::operator-(const SuperOperator& other) const {
  if (dim_ != other.dim_) throw ShapeError("SuperOperator difference: dimension mismatch");
  return SuperOperator(matrix_ - other.matrix_);
}

SuperOperator SuperOperator::identity(std::size_t n) {
  return SuperOperator(qgeom::identity(n * n));
}

SuperOperator left_super(const ComplexMatrix& x) {
  require_square(x, "left_super");
  return SuperOperator(kron(x, qgeom::identity(static_cast<std::size_t>(x.rows()))));
}

SuperOperator right_super(const ComplexMatrix& x) {
  require_square(x, "right_super");
  return SuperOperator(kron(qgeom::identity(static_cast<std::size_t>(x.rows())), x.transpose()));
}

ComplexMatrix partial_trace_second(const ComplexMatrix& op, std::size_t n, std::size_t m) {
  if (static_cast<std::size_t>(op.rows()) != n * m || op.rows() != op.cols())
    throw ShapeError("partial_trace_second: operator is not (n*m)x(n*m)");
  const auto ni = static_cast<Eigen::Index>(n);
  const auto mi = static_cast<Eigen::Index>(m);
  ComplexMatrix out = ComplexMatrix::Zero(ni, ni);
  for (Eigen::Index a = 0; a < ni; ++a)
    for (Eigen::Index b = 0; b < ni; ++b)
      for (Eigen::Index e = 0; e < mi; ++e) out(a, b) += op(a * mi + e, b * mi + e);
  return out;
}

ComplexMatrix partial_trace_first(const ComplexMatrix& op, std::size_t n, std::size_t m) {
  if (static_cast<std::size_t>(op.rows()) != n * m || op.rows() != op.cols())
    throw ShapeError("partial_trace_first: operator is not (n*m)x(n*m)");
  const auto ni = static_cast<Eigen::Index>(n);
  const auto mi = static_cast<Eigen::Index>(m);
  ComplexMatrix out = ComplexMatrix::Zero(mi, mi);
  for (Eigen::Index e = 0; e < mi; ++e)
    for (Eigen::Index f = 0; f < mi; ++f)
      for (Eigen::Index a = 0; a < ni; ++a) out(e, f) += op(a * mi + e, a * mi + f);
  return out;
}

}  // namespace qgeom
