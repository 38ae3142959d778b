#include "qgeom/channels.hpp"

#include "qgeom/errors.hpp"
#include "qgeom/rng.hpp"

#include <cmath>

namespace qgeom {

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw ShapeError("KrausChannel: empty Kraus list");
  out_dim_ = static_cast<std::size_t>(kraus_.front().rows());
  in_dim_ = static_cast<std::size_t>(kraus_.front().cols());
  for (const auto& a : kraus_)
    if (static_cast<std::size_t>(a.rows()) != out_dim_ || static_cast<std::size_t>(a.cols()) != in_dim_)
      throw ShapeError("KrausChannel: Kraus operators have inconsistent shapes");
  const double r = trace_preservation_residual();
  if (r > kTracePreservingTol)
    throw NotTracePreserving("KrausChannel: |sum A^dagger A - I| = " + std::to_string(r));
}

double KrausChannel::trace_preservation_residual() const {
  ComplexMatrix s = ComplexMatrix::Zero(static_cast<Eigen::Index>(in_dim_), static_cast<Eigen::Index>(in_dim_));
  for (const auto& a : kraus_) s += a.adjoint() * a;
  return max_abs(s - identity(in_dim_));
}

bool KrausChannel::is_unital(double tol) const {
  if (in_dim_ != out_dim_) return false;
  ComplexMatrix s = ComplexMatrix::Zero(static_cast<Eigen::Index>(out_dim_), static_cast<Eigen::Index>(out_dim_));
  for (const auto& a : kraus_) s += a * a.adjoint();
  return max_abs(s - identity(out_dim_)) <= tol;
}

SuperOperator KrausChannel::superoperator() const {
  if (in_dim_ != out_dim_) throw ShapeError("KrausChannel::superoperator: channel is not square");
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(in_dim_ * in_dim_),
                                        static_cast<Eigen::Index>(in_dim_ * in_dim_));
  for (const auto& a : kraus_) m += kron(a, a.conjugate());
  return SuperOperator(m);
}

KrausChannel identity_channel(std::size_t n) { return KrausChannel({identity(n)}); }

KrausChannel unitary_channel(const ComplexMatrix& u) { return KrausChannel({u}); }

KrausChannel dephasing_channel(double p) {
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return KrausChannel({std::sqrt(1.0 - p) * identity(2), std::sqrt(p) * z});
}

KrausChannel depolarizing_channel(double p) {
  ComplexMatrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  z << 1, 0, 0, -1;
  const double w = std::sqrt(p / 4.0);
  return KrausChannel({std::sqrt(1.0 - 3.0 * p / 4.0) * identity(2), w * x, w * y, w * z});
}

ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& m) {
  if (static_cast<std::size_t>(m.rows()) != ch.in_dim() || m.rows() != m.cols())
    throw ShapeError("apply: operand dimension does not match the channel input");
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(ch.out_dim()),
                                          static_cast<Eigen::Index>(ch.out_dim()));
  for (const auto& a : ch.kraus()) out += a * m * a.adjoint();
  return out;
}

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
  return DensityMatrix(HermitianMatrix::symmetrized(apply(ch, rho.matrix())));
}

HermitianMatrix apply_tangent(const KrausChannel& ch, const HermitianMatrix& a) {
  return HermitianMatrix::symmetrized(apply(ch, a.matrix()));
}

SqrtPushforward sqrt_kraus_pushforward(const DensityMatrix& rho, const KrausChannel& ch) {
  const ComplexMatrix pushed = apply(ch, rho.sqrt().matrix());
  const ComplexMatrix target = apply(ch, rho).sqrt().matrix();
  return {pushed, (pushed - target).norm()};
}

ComplexMatrix StinespringDilation::apply(const ComplexMatrix& rho) const {
  if (static_cast<std::size_t>(rho.rows()) != system_dim)
    throw ShapeError("StinespringDilation::apply: dimension mismatch");
  const ComplexMatrix env = env_state * env_state.adjoint();
  const ComplexMatrix joint = unitary * kron(rho, env) * unitary.adjoint();
  return partial_trace_second(joint, system_dim, env_dim);
}

StinespringDilation stinespring(const KrausChannel& ch, std::uint64_t completion_seed) {
  if (ch.in_dim() != ch.out_dim()) throw ShapeError("stinespring: only square channels are supported");
  const std::size_t n = ch.in_dim();
  const std::size_t m = ch.kraus_count();
  if (m > n * n)
    throw TooManyKraus("stinespring: " + std::to_string(m) + " Kraus operators exceed the n^2 = " +
                       std::to_string(n * n) + " environment budget");
  const auto ni = static_cast<Eigen::Index>(n);
  const auto mi = static_cast<Eigen::Index>(m);
  const Eigen::Index total = ni * mi;

  // Columns x*m + 0 are fixed by U(|x> kron |0>) = sum_i (A_i|x>) kron |i>;
  // the remaining columns are completed from a seeded random basis.
  ComplexMatrix cols(total, total);
  Eigen::Index c = 0;
  for (Eigen::Index x = 0; x < ni; ++x, ++c) {
    ComplexVector v = ComplexVector::Zero(total);
    for (Eigen::Index i = 0; i < mi; ++i)
      for (Eigen::Index y = 0; y < ni; ++y) v(y * mi + i) = ch.kraus()[static_cast<std::size_t>(i)](y, x);
    cols.col(c) = v;
  }
  Rng rng(completion_seed);
  const ComplexMatrix extra = rng.gaussian_matrix(static_cast<std::size_t>(total), static_cast<std::size_t>(total));
  ComplexMatrix work(total, ni + total);
  work.leftCols(ni) = cols.leftCols(ni);
  work.rightCols(total) = extra;
  gram_schmidt(work);
  // Gram-Schmidt leaves the first n columns unchanged up to round-off since
  // they are already orthonormal; keep the exact isometry columns.
  ComplexMatrix completion(total, total - ni);
  Eigen::Index k = 0;
  for (Eigen::Index j = ni; j < ni + total && k < total - ni; ++j)
    if (work.col(j).norm() > 0.5) completion.col(k++) = work.col(j);
  if (k != total - ni) throw ShapeError("stinespring: unitary completion failed");

  StinespringDilation d;
  d.system_dim = n;
  d.env_dim = m;
  d.env_state = ComplexVector::Zero(mi);
  d.env_state(0) = 1.0;
  d.unitary.resize(total, total);
  Eigen::Index next_free = 0;
  for (Eigen::Index x = 0; x < ni; ++x)
    for (Eigen::Index e = 0; e < mi; ++e)
      d.unitary.col(x * mi + e) = (e == 0) ? ComplexVector(cols.col(x)) : ComplexVector(completion.col(next_free++));
  return d;
}

KrausChannel random_channel(std::size_t dim, std::size_t kraus_count, std::uint64_t seed) {
  if (kraus_count < 1) throw ShapeError("random_channel: kraus_count must be at least 1");
  Rng rng(seed);
  ComplexMatrix v = rng.gaussian_matrix(dim * kraus_count, dim);
  gram_schmidt(v);
  std::vector<ComplexMatrix> kraus;
  const auto n = static_cast<Eigen::Index>(dim);
  for (std::size_t i = 0; i < kraus_count; ++i) kraus.push_back(v.block(static_cast<Eigen::Index>(i) * n, 0, n, n));
  return KrausChannel(std::move(kraus));
}

KrausPath kraus_path_from_generator(const HermitianMatrix& h_ab, const ComplexVector& nu, std::size_t n) {
  const auto m = static_cast<std::size_t>(nu.size());
  if (h_ab.dim() != n * m) throw ShapeError("kraus_path_from_generator: H_AB must act on n*m");
  if (std::abs(nu.norm() - 1.0) > 1e-10) throw NonUnitState("kraus_path_from_generator: nu is not normalized");
  const auto ni = static_cast<Eigen::Index>(n);
  const auto mi = static_cast<Eigen::Index>(m);
  KrausPath path;
  for (Eigen::Index k = 0; k < mi; ++k) {
    path.kraus.push_back(nu(k) * identity(n));
    ComplexMatrix d = ComplexMatrix::Zero(ni, ni);
    for (Eigen::Index a = 0; a < ni; ++a)
      for (Eigen::Index b = 0; b < ni; ++b)
        for (Eigen::Index e = 0; e < mi; ++e) d(a, b) += h_ab.matrix()(a * mi + k, b * mi + e) * nu(e);
    path.derivatives.push_back(Complex(0, 1) * d);
  }
  return path;
}

}  // namespace qgeom
