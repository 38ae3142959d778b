#include "qgeom/metrics.hpp"

#include "qgeom/errors.hpp"

#include <cmath>
#include <limits>

namespace qgeom {

namespace {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  // Tr(A B) without forming the product.
  return (a.transpose().cwiseProduct(b)).sum();
}

void require_same_dim(const DensityMatrix& rho, std::size_t n, const char* what) {
  if (rho.dim() != n) throw ShapeError(std::string(what) + ": dimension mismatch");
}

void require_positive_definite(const DensityMatrix& rho, const char* what) {
  if (rho.min_eigenvalue() < kSingularTol)
    throw SingularState(std::string(what) + ": state has eigenvalue " + std::to_string(rho.min_eigenvalue()) +
                        " below 1e-10");
}

template <typename Denominator>
SqrtDerivative solve_in_eigenbasis(const DensityMatrix& rho, const std::vector<HermitianMatrix>& drho,
                                   Denominator denominator, bool hermitian) {
  const auto& s = rho.spectral();
  const RealVector l = rho.clamped_eigenvalues();
  const Eigen::Index n = l.size();
  SqrtDerivative out;
  out.support = BoolMatrix::Constant(n, n, true);
  std::vector<std::vector<double>> den(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = denominator(l(i), l(j));
      den[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = d;
      if (!(d > kSupportTol) || !std::isfinite(d)) out.support(i, j) = false;
    }
  for (std::size_t p = 0; p < drho.size(); ++p) {
    require_same_dim(rho, drho[p].dim(), "sqrt_derivative");
    const ComplexMatrix dt = s.to_eigenbasis(drho[p].matrix());
    ComplexMatrix ct = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        if (out.support(i, j)) {
          ct(i, j) = dt(i, j) / den[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        } else if (std::abs(dt(i, j)) > kSupportTol) {
          out.warnings.push_back({p, static_cast<std::size_t>(i), static_cast<std::size_t>(j), std::abs(dt(i, j))});
        }
      }
    ComplexMatrix c = s.from_eigenbasis(ct);
    if (hermitian) c = 0.5 * (c + c.adjoint());
    out.components.push_back(std::move(c));
  }
  return out;
}

double information_bound(double info) {
  return info > 1e-14 ? 1.0 / info : std::numeric_limits<double>::infinity();
}

}  // namespace

std::string RankDeficiencyWarning::message() const {
  return "RankDeficiencyWarning: parameter " + std::to_string(param) + " mode (" + std::to_string(i) + "," +
         std::to_string(j) + ") outside the support carries |drho| = " + std::to_string(magnitude);
}

// ---------------------------------------------------------------------------
// Square-root derivatives

SqrtDerivative sqrt_derivative(const DensityMatrix& rho, const std::vector<HermitianMatrix>& drho) {
  return solve_in_eigenbasis(
      rho, drho, [](double li, double lj) { return std::sqrt(li) + std::sqrt(lj); }, true);
}

SqrtDerivative sqrt_derivative(const DensityMatrix& rho, const HermitianMatrix& drho) {
  return sqrt_derivative(rho, std::vector<HermitianMatrix>{drho});
}

SqrtDerivative generalized_sqrt_derivative(const DensityMatrix& rho, const std::vector<HermitianMatrix>& drho,
                                           const OperatorFunction& f) {
  return solve_in_eigenbasis(
      rho, drho,
      [&f](double li, double lj) {
        if (!(lj > 0.0)) return 0.0;
        const double sj = std::sqrt(lj);
        const double y = f(std::sqrt(li / lj));
        if (!std::isfinite(y) || y < 0.0) throw DomainError(std::sqrt(li / lj), f.name);
        return y * sj;
      },
      false);
}

SqrtDerivative generalized_sqrt_derivative(const DensityMatrix& rho, const HermitianMatrix& drho,
                                           const OperatorFunction& f) {
  return generalized_sqrt_derivative(rho, std::vector<HermitianMatrix>{drho}, f);
}

// ---------------------------------------------------------------------------
// Quantum geometric tensor

QGTensor QGTensor::from_complex(const ComplexMatrix& g, std::vector<RankDeficiencyWarning> warnings) {
  QGTensor t;
  t.g = g;
  t.gamma = g.real();
  t.sigma = g.imag();
  t.warnings = std::move(warnings);
  return t;
}

double QGTensor::ds2(const std::vector<double>& dtheta) const {
  if (dtheta.size() != params()) throw ShapeError("QGTensor::ds2: dtheta length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < dtheta.size(); ++i)
    for (std::size_t j = 0; j < dtheta.size(); ++j)
      s += gamma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * dtheta[i] * dtheta[j];
  return s;
}

QGTensor fs_qgt(const DensityMatrix& rho, const SqrtDerivative& c) {
  const ComplexMatrix sq = rho.sqrt().matrix();
  const auto d = static_cast<Eigen::Index>(c.components.size());
  ComplexMatrix g(d, d);
  std::vector<Complex> overlap(static_cast<std::size_t>(d));
  for (Eigen::Index i = 0; i < d; ++i) overlap[static_cast<std::size_t>(i)] = trace_product(sq, c.components[static_cast<std::size_t>(i)]);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& ci = c.components[static_cast<std::size_t>(i)];
      const auto& cj = c.components[static_cast<std::size_t>(j)];
      // Tr(sqrt(rho) C^dagger) = conj(Tr(C sqrt(rho))) for Hermitian sqrt(rho).
      g(i, j) = trace_product(ci.adjoint(), cj) -
                std::conj(overlap[static_cast<std::size_t>(i)]) * overlap[static_cast<std::size_t>(j)];
    }
  return QGTensor::from_complex(g, c.warnings);
}

QGTensor fs_qgt(const StateFamily& family, const Theta& theta) {
  const DensityMatrix rho = family.evaluate(theta);
  return fs_qgt(rho, sqrt_derivative(rho, family.derivatives(theta)));
}

std::vector<Complex> dynamical_phase(const DensityMatrix& rho, const SqrtDerivative& c) {
  const ComplexMatrix sq = rho.sqrt().matrix();
  std::vector<Complex> out;
  for (const auto& ci : c.components) out.push_back(Complex(0, 1) * trace_product(ci, sq));
  return out;
}

// ---------------------------------------------------------------------------
// Evolution-specific forms

double metric_unitary(const DensityMatrix& rho, const HermitianMatrix& h) {
  require_same_dim(rho, h.dim(), "metric_unitary");
  const ComplexMatrix k = commutator(rho.sqrt().matrix(), h.matrix());
  return -trace_product(k, k).real();
}

double metric_cptp_kraus(const DensityMatrix& rho, const std::vector<ComplexMatrix>& kraus,
                         const std::vector<ComplexMatrix>& kraus_dot) {
  if (kraus.empty() || kraus.size() != kraus_dot.size())
    throw ShapeError("metric_cptp_kraus: Kraus and derivative lists must be nonempty and equal in length");
  const auto n = static_cast<Eigen::Index>(rho.dim());
  ComplexMatrix tp = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < kraus.size(); ++i) {
    if (kraus[i].rows() != n || kraus[i].cols() != n || kraus_dot[i].rows() != n || kraus_dot[i].cols() != n)
      throw ShapeError("metric_cptp_kraus: Kraus operator dimension mismatch");
    tp += kraus[i].adjoint() * kraus[i];
  }
  if (max_abs(tp - identity(rho.dim())) > 1e-8)
    throw NotTracePreserving("metric_cptp_kraus: sum A^dagger A differs from identity");
  const ComplexMatrix sq = rho.sqrt().matrix();
  std::vector<ComplexMatrix> d;
  for (std::size_t i = 0; i < kraus.size(); ++i)
    d.push_back(kraus_dot[i] * sq * kraus[i].adjoint() + kraus[i] * sq * kraus_dot[i].adjoint());
  Complex first = 0.0;
  Complex second = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) first += trace_product(d[i], d[j]);
    second += trace_product(sq, d[i]);
  }
  return first.real() - std::norm(second);
}

double metric_cptp_dilation(const DensityMatrix& rho, const HermitianMatrix& h_ab, const ComplexVector& nu) {
  const std::size_t n = rho.dim();
  const auto m = static_cast<std::size_t>(nu.size());
  if (m == 0 || h_ab.dim() != n * m) throw ShapeError("metric_cptp_dilation: H_AB must act on n*m");
  if (std::abs(nu.norm() - 1.0) > 1e-10) throw NonUnitState("metric_cptp_dilation: nu is not normalized");
  // <nu| X |nu> over the environment factor.
  auto env_element = [&](const ComplexMatrix& x) {
    const ComplexMatrix proj = kron(identity(n), nu);  // (n m) x n
    return ComplexMatrix(proj.adjoint() * x * proj);
  };
  const ComplexMatrix& h = h_ab.matrix();
  const ComplexMatrix ht = env_element(h);
  const ComplexMatrix ht2 = env_element(h * h);
  const ComplexMatrix sq = rho.sqrt().matrix();
  const Complex value = 2.0 * (trace_product(ht2, rho.matrix()) - trace_product(ht * sq, ht * sq));
  return value.real();
}

// ---------------------------------------------------------------------------
// alpha-metrics

namespace {

struct AlphaTraces {
  ComplexMatrix weight;     // rho^{alpha - 1}
  ComplexMatrix half;       // rho^{alpha - 1/2}
  double norm;              // Tr(rho^alpha)
};

AlphaTraces alpha_traces(const DensityMatrix& rho, double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw DomainError(alpha, "alpha-metric (alpha >= 1)");
  if (alpha > 1.0) require_positive_definite(rho, "alpha-metric");
  return {rho.power(alpha - 1.0).matrix(), rho.power(alpha - 0.5).matrix(), rho.power(alpha).trace()};
}

}  // namespace

QGTensor alpha_qgt_G(const DensityMatrix& rho, const SqrtDerivative& c, double alpha) {
  const AlphaTraces t = alpha_traces(rho, alpha);
  const auto d = static_cast<Eigen::Index>(c.components.size());
  ComplexMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& ci = c.components[static_cast<std::size_t>(i)];
      const auto& cj = c.components[static_cast<std::size_t>(j)];
      const ComplexMatrix ci_dag = ci.adjoint();
      g(i, j) = trace_product(t.weight, ci_dag * cj) / t.norm -
                trace_product(t.half, ci_dag) * trace_product(t.half, cj) / (t.norm * t.norm);
    }
  return QGTensor::from_complex(g, c.warnings);
}

QGTensor alpha_qgt_Gtilde(const DensityMatrix& rho, const SqrtDerivative& c, double alpha) {
  const AlphaTraces t = alpha_traces(rho, alpha);
  const ComplexMatrix sq = rho.sqrt().matrix();
  const auto d = static_cast<Eigen::Index>(c.components.size());
  ComplexMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto& ci = c.components[static_cast<std::size_t>(i)];
      const auto& cj = c.components[static_cast<std::size_t>(j)];
      const ComplexMatrix ci_dag = ci.adjoint();
      g(i, j) = trace_product(t.weight, ci_dag * cj) / t.norm -
                trace_product(t.half, ci_dag) * trace_product(sq, cj) / t.norm -
                trace_product(t.half, cj) * trace_product(sq, ci_dag) / t.norm +
                trace_product(sq, ci_dag) * trace_product(sq, cj);
    }
  return QGTensor::from_complex(g, c.warnings);
}

QGTensor alpha_qgt_G(const StateFamily& family, const Theta& theta, double alpha) {
  const DensityMatrix rho = family.evaluate(theta);
  return alpha_qgt_G(rho, sqrt_derivative(rho, family.derivatives(theta)), alpha);
}

QGTensor alpha_qgt_Gtilde(const StateFamily& family, const Theta& theta, double alpha) {
  const DensityMatrix rho = family.evaluate(theta);
  return alpha_qgt_Gtilde(rho, sqrt_derivative(rho, family.derivatives(theta)), alpha);
}

std::vector<Complex> alpha_dynamical_phase(const DensityMatrix& rho, const SqrtDerivative& c, double alpha) {
  const AlphaTraces t = alpha_traces(rho, alpha);
  std::vector<Complex> out;
  for (const auto& ci : c.components) out.push_back(Complex(0, 1) * trace_product(t.half, ci));
  return out;
}

bool alpha_has_basis_construction(double alpha, std::size_t dim) {
  return alpha >= 2.0 && alpha <= static_cast<double>(dim) && std::floor(alpha) == alpha;
}

// ---------------------------------------------------------------------------
// Baselines

SldFisher sld_qfi(const DensityMatrix& rho, const std::vector<HermitianMatrix>& drho) {
  const auto& s = rho.spectral();
  const RealVector l = rho.clamped_eigenvalues();
  const Eigen::Index n = l.size();
  const auto d = static_cast<Eigen::Index>(drho.size());
  std::vector<ComplexMatrix> dt;
  for (const auto& x : drho) {
    require_same_dim(rho, x.dim(), "sld_qfi");
    dt.push_back(s.to_eigenbasis(x.matrix()));
  }
  SldFisher out;
  out.fisher = RealMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index q = 0; q < n; ++q) {
      const double den = l(k) + l(q);
      if (den <= 1e-12) {
        for (Eigen::Index i = 0; i < d; ++i)
          if (std::abs(dt[static_cast<std::size_t>(i)](k, q)) > kSupportTol)
            out.warnings.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(k),
                                    static_cast<std::size_t>(q), std::abs(dt[static_cast<std::size_t>(i)](k, q))});
        continue;
      }
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
          out.fisher(i, j) +=
              2.0 * (dt[static_cast<std::size_t>(i)](k, q) * dt[static_cast<std::size_t>(j)](q, k)).real() / den;
    }
  return out;
}

SldFisher sld_qfi(const StateFamily& family, const Theta& theta) {
  return sld_qfi(family.evaluate(theta), family.derivatives(theta));
}

Complex petz_metric(const OperatorFunction& f, const DensityMatrix& rho, const HermitianMatrix& a,
                    const HermitianMatrix& b) {
  require_same_dim(rho, a.dim(), "petz_metric");
  require_same_dim(rho, b.dim(), "petz_metric");
  require_positive_definite(rho, "petz_metric");
  const auto& s = rho.spectral();
  const RealVector& l = s.eigenvalues;
  const ComplexMatrix at = s.to_eigenbasis(a.matrix());
  const ComplexMatrix bt = s.to_eigenbasis(b.matrix());
  Complex sum = 0.0;
  for (Eigen::Index k = 0; k < l.size(); ++k)
    for (Eigen::Index q = 0; q < l.size(); ++q) sum += std::conj(at(k, q)) * bt(k, q) / (l(q) * f(l(k) / l(q)));
  return sum;
}

// ---------------------------------------------------------------------------
// Reports

MetricReport metric_report(const StateFamily& family, const Theta& theta,
                           const std::optional<std::vector<double>>& dtheta) {
  const DensityMatrix rho = family.evaluate(theta);
  const SqrtDerivative c = sqrt_derivative(rho, family.derivatives(theta));
  MetricReport r;
  r.theta = theta;
  r.tensor = fs_qgt(rho, c);
  r.dyn_phase = dynamical_phase(rho, c);
  if (dtheta) r.ds2 = r.tensor.ds2(*dtheta);
  const Eigen::Index d = r.tensor.gamma.rows();
  if (d == 1) {
    r.cr_bound.push_back(information_bound(r.tensor.gamma(0, 0)));
  } else {
    Eigen::FullPivLU<RealMatrix> lu(r.tensor.gamma);
    lu.setThreshold(1e-12);
    const bool invertible = lu.isInvertible();
    const RealMatrix inv = invertible ? RealMatrix(lu.inverse()) : RealMatrix();
    for (Eigen::Index i = 0; i < d; ++i)
      r.cr_bound.push_back(invertible ? inv(i, i) : std::numeric_limits<double>::infinity());
  }
  for (const auto& w : c.warnings) r.warnings.push_back(w.message());
  return r;
}

}  // namespace qgeom
