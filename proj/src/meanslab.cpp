#include "qgeom/meanslab.hpp"

#include "qgeom/errors.hpp"
#include "qgeom/metrics.hpp"
#include "qgeom/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qgeom {

namespace {

constexpr double kMeanSingularTol = 1e-12;

SpectralDecomposition positive_definite_eig(const HermitianMatrix& a, const char* who) {
  SpectralDecomposition s = hermitian_eig(a);
  const double top = std::max(std::abs(s.eigenvalues(s.eigenvalues.size() - 1)), 1e-300);
  if (s.eigenvalues(0) <= kMeanSingularTol * top)
    throw SingularState(std::string(who) + ": first argument is not positive definite (min eigenvalue " +
                        std::to_string(s.eigenvalues(0)) + ")");
  return s;
}

HermitianMatrix mean_from_eig(const SpectralDecomposition& sa, const HermitianMatrix& b, const OperatorFunction& f) {
  const RealVector sq = sa.eigenvalues.cwiseSqrt();
  const ComplexMatrix half = sa.eigenvectors * sq.cast<Complex>().asDiagonal() * sa.eigenvectors.adjoint();
  const ComplexMatrix inv_half =
      sa.eigenvectors * sq.cwiseInverse().cast<Complex>().asDiagonal() * sa.eigenvectors.adjoint();
  const auto inner = HermitianMatrix::symmetrized(inv_half * b.matrix() * inv_half);
  const HermitianMatrix fm = matrix_function(inner, f.as_map());
  return HermitianMatrix::symmetrized(half * fm.matrix() * half);
}

void require_square_sizes(const HermitianMatrix& a, const HermitianMatrix& b, const char* who) {
  if (a.dim() != b.dim() || a.dim() == 0) throw ShapeError(std::string(who) + ": arguments differ in dimension");
}

double spectral_norm(const ComplexMatrix& c) {
  Eigen::JacobiSVD<ComplexMatrix> svd(c);
  return svd.singularValues()(0);
}

double smallest_singular_value(const ComplexMatrix& c) {
  Eigen::JacobiSVD<ComplexMatrix> svd(c);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

HermitianMatrix random_positive_definite(Rng& rng, std::size_t n) {
  const ComplexMatrix g = rng.gaussian_matrix(n, n);
  return HermitianMatrix::symmetrized(g * g.adjoint() / static_cast<double>(n) + 0.05 * identity(n));
}

HermitianMatrix random_psd_increment(Rng& rng, std::size_t n) {
  const std::size_t rank = 1 + rng.index(n);
  const ComplexMatrix g = rng.gaussian_matrix(n, rank);
  return HermitianMatrix::symmetrized(rng.uniform(0.0, 1.0) * g * g.adjoint() / static_cast<double>(n));
}

ComplexMatrix random_contraction(Rng& rng, std::size_t n, ContractionKind kind) {
  const auto ni = static_cast<Eigen::Index>(n);
  switch (kind) {
    case ContractionKind::invertible: {
      const ComplexMatrix u = random_unitary(rng, n);
      const ComplexMatrix v = random_unitary(rng, n);
      RealVector s(ni);
      for (Eigen::Index i = 0; i < ni; ++i) s(i) = rng.uniform(0.3, 1.0);
      return u * s.cast<Complex>().asDiagonal() * v;
    }
    case ContractionKind::rank_deficient: {
      const std::size_t rank = n > 1 ? 1 + rng.index(n - 1) : 1;
      const ComplexMatrix c = rng.gaussian_matrix(n, rank) * rng.gaussian_matrix(rank, n);
      return c / spectral_norm(c);
    }
    case ContractionKind::projector: {
      const std::size_t rank = n > 1 ? 1 + rng.index(n - 1) : 1;
      const ComplexMatrix u = random_unitary(rng, n);
      const ComplexMatrix cols = u.leftCols(static_cast<Eigen::Index>(rank));
      return cols * cols.adjoint();
    }
    case ContractionKind::mixed:
      break;
  }
  throw ShapeError("random_contraction: mixed is not a concrete kind");
}

void record(MeanCheckReport& r, double margin) {
  ++r.trials;
  if (margin < -kOrderSlack) ++r.violations;
  if (r.trials == 1 || margin < r.worst_margin) r.worst_margin = margin;
}

HermitianMatrix to_hermitian(const SuperOperator& k, const char* who) {
  if (k.dim() > kSuperOperatorDimLimit)
    throw SizeLimit(std::string(who) + ": superoperator means are limited to n <= " +
                    std::to_string(kSuperOperatorDimLimit));
  return HermitianMatrix(k.matrix());
}

void require_superop_dim(std::size_t n, const char* who) {
  if (n > kSuperOperatorDimLimit)
    throw SizeLimit(std::string(who) + ": superoperator means are limited to n <= " +
                    std::to_string(kSuperOperatorDimLimit));
}

}  // namespace

std::string to_string(Direction d) { return d == Direction::geq ? "geq" : "leq"; }

Direction direction_from_string(const std::string& s) {
  if (s == "geq") return Direction::geq;
  if (s == "leq") return Direction::leq;
  throw FormatError("unknown direction '" + s + "' (expected geq or leq)");
}

HermitianMatrix sigma_mean(const HermitianMatrix& a, const HermitianMatrix& b, const OperatorFunction& f) {
  require_square_sizes(a, b, "sigma_mean");
  return mean_from_eig(positive_definite_eig(a, "sigma_mean"), b, f);
}

HermitianMatrix sigma_mean_on_support(const HermitianMatrix& a, const HermitianMatrix& b,
                                      const OperatorFunction& f, double rel_tol) {
  require_square_sizes(a, b, "sigma_mean_on_support");
  const SpectralDecomposition s = hermitian_eig(a);
  const auto n = static_cast<Eigen::Index>(a.dim());
  const double top = std::max(std::abs(s.eigenvalues(n - 1)), 1e-300);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if (s.eigenvalues(i) > rel_tol * top) keep.push_back(i);
  if (keep.empty()) return HermitianMatrix::zero(a.dim());
  ComplexMatrix p(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) p.col(static_cast<Eigen::Index>(k)) = s.eigenvectors.col(keep[k]);
  const auto ac = HermitianMatrix::symmetrized(p.adjoint() * a.matrix() * p);
  const auto bc = HermitianMatrix::symmetrized(p.adjoint() * b.matrix() * p);
  const HermitianMatrix m = sigma_mean(ac, bc, f);
  return HermitianMatrix::symmetrized(p * m.matrix() * p.adjoint());
}

double recover_scalar(const MeanFunction& mean, double t, std::size_t dim) {
  if (!(t > 0.0)) throw DomainError(t, "recover_scalar");
  const auto id = HermitianMatrix::symmetrized(identity(dim));
  const auto tid = HermitianMatrix::symmetrized(t * identity(dim));
  return mean(id, tid).matrix()(0, 0).real();
}

double order_margin(const ComplexMatrix& lhs, const ComplexMatrix& rhs, Direction direction) {
  return direction == Direction::leq ? min_eigenvalue(rhs - lhs) : min_eigenvalue(lhs - rhs);
}

double transformer_margin(const HermitianMatrix& a, const HermitianMatrix& b, const ComplexMatrix& c,
                          const OperatorFunction& f, Direction direction) {
  require_square_sizes(a, b, "transformer_margin");
  if (c.rows() != static_cast<Eigen::Index>(a.dim()) || c.cols() != c.rows())
    throw ShapeError("transformer_margin: C must be square of the same dimension");
  const ComplexMatrix lhs = c.adjoint() * sigma_mean(a, b, f).matrix() * c;
  const auto ca = HermitianMatrix::symmetrized(c.adjoint() * a.matrix() * c);
  const auto cb = HermitianMatrix::symmetrized(c.adjoint() * b.matrix() * c);
  const ComplexMatrix rhs = sigma_mean_on_support(ca, cb, f).matrix();
  return order_margin(lhs, rhs, direction);
}

MeanCheckReport check_transformer(const HermitianMatrix& a, const HermitianMatrix& b, const ComplexMatrix& c,
                                  const OperatorFunction& f, Direction direction) {
  MeanCheckReport r;
  r.function = f.name;
  r.direction = direction;
  double margin = transformer_margin(a, b, c, f, direction);
  if (smallest_singular_value(c) > 1e-8) {
    const Direction other = direction == Direction::leq ? Direction::geq : Direction::leq;
    margin = std::min(margin, transformer_margin(a, b, c, f, other));
  }
  record(r, margin);
  return r;
}

MeanCheckReport check_transformer(const OperatorFunction& f, Direction direction, std::size_t trials,
                                  std::uint64_t seed, std::size_t dim, ContractionKind kind) {
  MeanCheckReport r;
  r.seed = seed;
  r.function = f.name;
  r.direction = direction;
  static constexpr ContractionKind cycle[] = {ContractionKind::invertible, ContractionKind::rank_deficient,
                                              ContractionKind::projector};
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(stream_seed(seed, t));
    const ContractionKind k = kind == ContractionKind::mixed ? cycle[t % 3] : kind;
    const HermitianMatrix a = random_positive_definite(rng, dim);
    const HermitianMatrix b = random_positive_definite(rng, dim);
    const ComplexMatrix c = random_contraction(rng, dim, k);
    const MeanCheckReport one = check_transformer(a, b, c, f, direction);
    record(r, one.worst_margin);
  }
  return r;
}

MeanCheckReport check_mean_monotone(const OperatorFunction& f, Direction direction, std::size_t trials,
                                    std::uint64_t seed, std::size_t dim) {
  MeanCheckReport r;
  r.seed = seed;
  r.function = f.name;
  r.direction = direction;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(stream_seed(seed, t));
    const HermitianMatrix a = random_positive_definite(rng, dim);
    const HermitianMatrix b = random_positive_definite(rng, dim);
    const auto a2 = HermitianMatrix::symmetrized(a.matrix() + random_psd_increment(rng, dim).matrix());
    const auto b2 = HermitianMatrix::symmetrized(b.matrix() + random_psd_increment(rng, dim).matrix());
    record(r, order_margin(sigma_mean(a, b, f).matrix(), sigma_mean(a2, b2, f).matrix(), direction));
  }
  return r;
}

CombinedSuperOperator combine_superops(const SuperOperator& k1, const SuperOperator& k2, const OperatorFunction& f,
                                       const std::optional<OperatorFunction>& tau) {
  if (k1.dim() != k2.dim()) throw ShapeError("combine_superops: superoperators differ in dimension");
  const HermitianMatrix h1 = to_hermitian(k1, "combine_superops");
  const HermitianMatrix h2 = to_hermitian(k2, "combine_superops");
  CombinedSuperOperator out{SuperOperator(sigma_mean(h1, h2, f).matrix()), std::nullopt, std::nullopt};
  if (tau) {
    const auto sq1 = HermitianMatrix::symmetrized(h1.matrix() * h1.matrix());
    const auto sq2 = HermitianMatrix::symmetrized(h2.matrix() * h2.matrix());
    out.k_squared = SuperOperator(sigma_mean(sq1, sq2, *tau).matrix());
    out.square_deviation = max_abs(out.k.matrix() * out.k.matrix() - out.k_squared->matrix());
  }
  return out;
}

SuperOperator joint_superop(const DensityMatrix& rho, const std::function<double(double, double)>& fn) {
  const auto n = rho.dim();
  require_superop_dim(n, "joint_superop");
  const auto& s = rho.spectral();
  const RealVector l = rho.clamped_eigenvalues();
  const ComplexMatrix w = kron(s.eigenvectors, s.eigenvectors.conjugate());
  const auto ni = static_cast<Eigen::Index>(n);
  RealVector d(ni * ni);
  for (Eigen::Index k = 0; k < ni; ++k)
    for (Eigen::Index q = 0; q < ni; ++q) d(k * ni + q) = fn(l(k), l(q));
  return SuperOperator(w * d.cast<Complex>().asDiagonal() * w.adjoint());
}

SuperOperator sqrt_derivative_superop(const DensityMatrix& rho) {
  return joint_superop(rho, [](double lk, double lq) { return std::sqrt(lk) + std::sqrt(lq); });
}

SuperOperator petz_superop(const OperatorFunction& f, const DensityMatrix& rho) {
  if (rho.min_eigenvalue() <= kSingularTol)
    throw SingularState("petz_superop: state is not positive definite");
  return joint_superop(rho, [&f](double lk, double lq) { return lq * f(lk / lq); });
}

ConditionMargins monotonicity_condition_margins(const SuperOpBuilder& builder, const KrausChannel& ch,
                                                const DensityMatrix& rho) {
  if (ch.in_dim() != ch.out_dim()) throw ShapeError("monotonicity condition: channel must be square");
  if (ch.in_dim() != rho.dim()) throw ShapeError("monotonicity condition: channel and state differ in dimension");
  require_superop_dim(rho.dim(), "monotonicity condition");
  if (rho.min_eigenvalue() <= kSingularTol) throw SingularState("monotonicity condition: rho is not positive definite");
  const DensityMatrix out = apply(ch, rho);
  if (out.min_eigenvalue() <= kSingularTol)
    throw SingularState("monotonicity condition: E(rho) is not positive definite");
  const ComplexMatrix e = ch.superoperator().matrix();
  const ComplexMatrix k_in = builder(rho).matrix();
  const ComplexMatrix k_out = builder(out).matrix();
  ConditionMargins m;
  m.squared = min_eigenvalue(k_out * k_out - e * k_in * k_in * e.adjoint());
  const ComplexMatrix inv_in = k_in.partialPivLu().inverse();
  const ComplexMatrix inv_out = k_out.partialPivLu().inverse();
  const ComplexMatrix pulled = e.adjoint() * inv_out * e;
  m.inverse_geq = min_eigenvalue(pulled - inv_in);
  m.inverse_leq = min_eigenvalue(inv_in - pulled);
  return m;
}

MeanCheckReport check_monotonicity_condition(const SuperOpBuilder& builder, const KrausChannel& ch,
                                             const DensityMatrix& rho, Direction direction, const std::string& name) {
  MeanCheckReport r;
  r.function = name;
  r.direction = direction;
  const auto n = rho.dim();
  require_superop_dim(n, "check_monotonicity_condition");
  if (ch.in_dim() != ch.out_dim() || ch.in_dim() != n)
    throw ShapeError("check_monotonicity_condition: channel must be square on the state space");
  if (rho.min_eigenvalue() <= kSingularTol)
    throw SingularState("check_monotonicity_condition: rho is not positive definite");
  const DensityMatrix out = apply(ch, rho);
  if (out.min_eigenvalue() <= kSingularTol)
    throw SingularState("check_monotonicity_condition: E(rho) is not positive definite");
  const ComplexMatrix e = ch.superoperator().matrix();
  const ComplexMatrix k_in = builder(rho).matrix();
  const ComplexMatrix k_out = builder(out).matrix();
  record(r, order_margin(e * k_in * k_in * e.adjoint(), k_out * k_out, direction));
  return r;
}

MeanCheckReport scan_monotonicity_condition(const SuperOpBuilder& builder, const std::string& name, std::size_t dim,
                                            std::size_t kraus_count, std::size_t trials, std::uint64_t seed,
                                            Direction direction) {
  MeanCheckReport r;
  r.seed = seed;
  r.function = name;
  r.direction = direction;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t s = stream_seed(seed, t);
    const DensityMatrix rho = random_density(dim, dim, splitmix64(s ^ 1));
    const KrausChannel ch = random_channel(dim, kraus_count, splitmix64(s ^ 2));
    if (apply(ch, rho).min_eigenvalue() <= kSingularTol) continue;
    record(r, check_monotonicity_condition(builder, ch, rho, direction, name).worst_margin);
  }
  return r;
}

LogSqrtRelation sqrt_from_log_superop(const OperatorFunction& g, const DensityMatrix& rho,
                                      const std::vector<HermitianMatrix>& tangents) {
  const auto n = rho.dim();
  require_superop_dim(n, "sqrt_from_log_superop");
  if (rho.min_eigenvalue() <= kSingularTol) throw SingularState("sqrt_from_log_superop: rho is not positive definite");
  LogSqrtRelation out;
  out.k_sqrt = joint_superop(rho, [&g](double lk, double lq) { return std::sqrt(g(lk / lq) * lq); });

  const ComplexMatrix rl = right_super(rho.matrix()).matrix();
  const ComplexMatrix ratio = left_super(rho.matrix()).matrix() * rl.partialPivLu().inverse();
  const HermitianMatrix gm = matrix_function(HermitianMatrix::symmetrized(ratio), g.as_map());
  out.k_log = SuperOperator(HermitianMatrix::symmetrized(gm.matrix() * rl).matrix());

  double dev = max_abs(out.k_sqrt.matrix() * out.k_sqrt.matrix() - out.k_log.matrix());
  const auto ks_lu = out.k_sqrt.matrix().partialPivLu();
  const auto kl_lu = out.k_log.matrix().partialPivLu();
  for (const auto& a : tangents) {
    if (a.dim() != n) throw ShapeError("sqrt_from_log_superop: tangent dimension mismatch");
    const ComplexVector va = vec(a.matrix());
    const ComplexVector x = ks_lu.solve(va);
    const double fs = x.squaredNorm();
    const double fl = va.dot(kl_lu.solve(va)).real();
    out.fisher_sqrt.push_back(fs);
    out.fisher_log.push_back(fl);
    dev = std::max(dev, std::abs(fs - fl));
  }
  out.max_deviation = dev;
  return out;
}

std::vector<SquarePair> search_square_pairs(const std::vector<OperatorFunction>& functions) {
  constexpr int kGrid = 81;
  std::vector<SquarePair> out;
  for (const auto& f : functions)
    for (const auto& g : functions) {
      double dev = 0.0;
      for (int i = 0; i < kGrid; ++i) {
        const double s = std::pow(10.0, -2.0 + 4.0 * i / (kGrid - 1));
        const double lhs = f(s) * f(s);
        const double rhs = g(s * s);
        dev = std::max(dev, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
      }
      out.push_back({f.name, g.name, dev});
    }
  return out;
}

}  // namespace qgeom
