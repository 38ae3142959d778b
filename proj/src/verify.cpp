#include "qgeom/verify.hpp"

#include "qgeom/channels.hpp"
#include "qgeom/errors.hpp"
#include "qgeom/expsim.hpp"
#include "qgeom/meanslab.hpp"
#include "qgeom/metrics.hpp"
#include "qgeom/rng.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

namespace qgeom {

namespace {

constexpr std::size_t kMaxDiagnostics = 20;
constexpr double kInf = std::numeric_limits<double>::infinity();

class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

SuiteResult make_result(std::string name, bool assertion, std::uint64_t seed, std::vector<std::string> columns) {
  SuiteResult r;
  r.name = std::move(name);
  r.assertion = assertion;
  r.seed = seed;
  r.columns = std::move(columns);
  return r;
}

void diagnose(SuiteResult& r, const std::string& message) {
  if (r.diagnostics.size() < kMaxDiagnostics) r.diagnostics.push_back(message);
}

/// Records one case whose deviation must not exceed tol.
void check_case(SuiteResult& r, double deviation, double tol, const std::string& label) {
  ++r.cases;
  if (std::isnan(deviation)) deviation = kInf;
  r.worst_deviation = std::max(r.worst_deviation, deviation);
  if (!(deviation <= tol)) {
    ++r.failures;
    diagnose(r, label + ": deviation " + sci(deviation) + " > " + sci(tol));
  }
}

double spectral_radius(const HermitianMatrix& h) {
  const RealVector e = hermitian_eig(h).eigenvalues;
  return std::max(std::abs(e(0)), std::abs(e(e.size() - 1)));
}

/// Traceless Hermitian matrix with spectral radius `scale`.
HermitianMatrix random_traceless(Rng& rng, std::size_t n, double scale) {
  ComplexMatrix h = random_hermitian(rng, n);
  h -= (h.trace() / static_cast<double>(n)) * identity(n);
  auto hm = HermitianMatrix::symmetrized(h);
  const double r = spectral_radius(hm);
  if (r < 1e-300) return hm;
  return HermitianMatrix::symmetrized(hm.matrix() * (scale / r));
}

enum class FamilyKind { unitary_orbit = 0, eigenvalue_path = 1, affine = 2 };

struct SampledFamily {
  StateFamily family;
  Theta theta;
  FamilyKind kind;
};

/// `mix` is the weight of the maximally mixed state added to the unitary-orbit
/// reference state; zero keeps random (possibly rank-deficient) states.
SampledFamily random_family(Rng& rng, std::size_t n, FamilyKind kind, double mix) {
  switch (kind) {
    case FamilyKind::unitary_orbit: {
      const std::size_t rank = 1 + rng.index(n);
      DensityMatrix rho0 = random_density(n, rank, rng.next_u64());
      if (mix > 0.0) rho0 = mix_with_identity(rho0, mix);
      const auto h = HermitianMatrix::symmetrized(random_hermitian(rng, n));
      return {family_unitary_orbit(rho0, h), {rng.uniform(-1.0, 1.0)}, kind};
    }
    case FamilyKind::eigenvalue_path: {
      const auto ni = static_cast<Eigen::Index>(n);
      RealVector l0(ni), slope(ni);
      for (Eigen::Index i = 0; i < ni; ++i) l0(i) = 0.2 + rng.uniform();
      l0 /= l0.sum();
      for (Eigen::Index i = 0; i < ni; ++i) slope(i) = rng.normal();
      slope.array() -= slope.mean();
      const double top = slope.cwiseAbs().maxCoeff();
      if (top > 0.0) slope *= 0.5 * l0.minCoeff() / top;
      return {family_linear_eigenvalue_path(l0, slope, random_unitary(rng, n)), {rng.uniform(-1.0, 1.0)}, kind};
    }
    case FamilyKind::affine: {
      const DensityMatrix rho0 = mix_with_identity(random_density(n, n, rng.next_u64()), 0.3);
      const double scale = 0.2 * rho0.min_eigenvalue();
      std::vector<HermitianMatrix> dirs{random_traceless(rng, n, scale), random_traceless(rng, n, scale)};
      return {family_affine(rho0, dirs), {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)}, kind};
    }
  }
  throw BadFamily("random_family: unknown kind");
}

RealMatrix gamma_from_vectors(const ComplexVector& psi, const std::vector<ComplexVector>& d) {
  const auto k = static_cast<Eigen::Index>(d.size());
  RealMatrix g(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto& di = d[static_cast<std::size_t>(i)];
      const auto& dj = d[static_cast<std::size_t>(j)];
      g(i, j) = (di.dot(dj) - di.dot(psi) * psi.dot(dj)).real();
    }
  return g;
}

double max_entry_diff(const RealMatrix& a, const RealMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

double inverse_or_inf(double x) { return x > 1e-14 ? 1.0 / x : kInf; }

}  // namespace

ToleranceProfile tolerance_profile_from_string(const std::string& s) {
  if (s == "default") return ToleranceProfile::standard;
  if (s == "strict") return ToleranceProfile::strict;
  throw FormatError("unknown tolerance profile '" + s + "' (expected strict or default)");
}

std::string to_string(ToleranceProfile p) { return p == ToleranceProfile::strict ? "strict" : "default"; }

double scaled_tolerance(double base, ToleranceProfile p) { return p == ToleranceProfile::strict ? base / 10.0 : base; }

std::string to_string(MetricKind k) {
  switch (k) {
    case MetricKind::fs: return "fs";
    case MetricKind::alpha: return "alpha";
    case MetricKind::petz_wy: return "petz_wy";
  }
  return "fs";
}

MetricKind metric_kind_from_string(const std::string& s) {
  if (s == "fs") return MetricKind::fs;
  if (s == "alpha") return MetricKind::alpha;
  if (s == "petz_wy") return MetricKind::petz_wy;
  throw FormatError("unknown metric kind '" + s + "'");
}

// ---------------------------------------------------------------------------

SuiteResult suite_gauge_invariance(std::size_t qubit_samples, std::size_t qutrit_samples, std::uint64_t seed,
                                   ToleranceProfile profile) {
  const Stopwatch clock;
  SuiteResult r = make_result("gauge", true, seed,
                              {"dim", "case", "family", "params", "gamma_norm", "dev_purified", "dev_stencil"});
  const double tol = scaled_tolerance(1e-8, profile);
  const double tol_identity = scaled_tolerance(1e-12, profile);
  constexpr double h = 1e-3;
  for (const auto& [dim, count] : {std::pair<std::size_t, std::size_t>{2, qubit_samples}, {3, qutrit_samples}}) {
    for (std::size_t t = 0; t < count; ++t) {
      Rng rng(stream_seed(stream_seed(seed, dim), t));
      const auto kind = static_cast<FamilyKind>(t % 3);
      const SampledFamily s = random_family(rng, dim, kind, 0.2);
      const bool identity_gauge = t == 0;
      const ComplexMatrix va = identity_gauge ? identity(dim) : random_unitary(rng, dim);
      const ComplexMatrix vb = identity_gauge ? identity(dim) : random_unitary(rng, dim);

      const DensityMatrix rho = s.family.evaluate(s.theta);
      const SqrtDerivative c = sqrt_derivative(rho, s.family.derivatives(s.theta));
      const RealMatrix g_trace = fs_qgt(rho, c).gamma;

      const ComplexMatrix gauge = va * vb.transpose();
      const ComplexVector psi = vec(rho.sqrt().matrix() * gauge);
      std::vector<ComplexVector> dpsi;
      for (const auto& ci : c.components) dpsi.push_back(vec(ci * gauge));
      const RealMatrix g_pur = gamma_from_vectors(psi, dpsi);

      auto psi_at = [&](const Theta& th) { return vec(s.family.evaluate(th).sqrt().matrix() * gauge); };
      std::vector<ComplexVector> dfd;
      for (std::size_t i = 0; i < s.theta.size(); ++i) {
        auto shifted = [&](double k) {
          Theta th = s.theta;
          th[i] += k * h;
          return psi_at(th);
        };
        dfd.push_back((-shifted(2) + 8.0 * shifted(1) - 8.0 * shifted(-1) + shifted(-2)) / (12.0 * h));
      }
      const RealMatrix g_fd = gamma_from_vectors(psi, dfd);

      const double dev_pur = max_entry_diff(g_trace, g_pur);
      const double dev_fd = max_entry_diff(g_trace, g_fd);
      const std::string label = "dim " + std::to_string(dim) + " case " + std::to_string(t);
      check_case(r, dev_pur, identity_gauge ? tol_identity : tol, label + " purified");
      check_case(r, dev_fd, tol, label + " stencil");
      r.rows.push_back({static_cast<double>(dim), static_cast<double>(t), static_cast<double>(kind),
                        static_cast<double>(s.theta.size()), g_trace.cwiseAbs().maxCoeff(), dev_pur, dev_fd});
    }
  }
  r.wall_time_seconds = clock.seconds();
  return r;
}

// ---------------------------------------------------------------------------

SuiteResult suite_monotonicity_metric(MetricKind kind, std::size_t samples, std::uint64_t seed,
                                      const std::vector<double>& alphas, std::size_t dim,
                                      ToleranceProfile profile) {
  const Stopwatch clock;
  const bool asserted = kind == MetricKind::petz_wy;
  SuiteResult r = make_result("monotonicity_" + to_string(kind), asserted, seed,
                              {"alpha", "tilde", "evaluated", "violations", "rate", "unitary_violations",
                               "worst_excess"});
  const double slack = asserted ? scaled_tolerance(1e-9, profile) : 1e-9;

  struct Variant {
    double alpha;
    bool tilde;
    std::size_t evaluated = 0, violations = 0, unitary_violations = 0;
    double worst_excess = 0.0;
  };
  std::vector<Variant> variants;
  if (kind == MetricKind::alpha) {
    for (double a : alphas) {
      variants.push_back({a, false});
      variants.push_back({a, true});
    }
  } else {
    variants.push_back({1.0, false});
  }
  const OperatorFunction wy = wigner_yanase_fn();
  std::size_t skipped = 0;

  for (std::size_t t = 0; t < samples; ++t) {
    Rng rng(stream_seed(seed, t));
    const DensityMatrix rho = random_density(dim, dim, rng.next_u64());
    const StateFamily line = family_affine(rho, {random_traceless(rng, dim, 1.0)});
    const HermitianMatrix a = line.derivatives({0.0})[0];

    const std::size_t pick = t % 5;
    const bool unitary = pick == 0;
    KrausChannel ch = unitary ? unitary_channel(random_unitary(rng, dim))
                      : (pick == 1 && dim == 2) ? dephasing_channel(rng.uniform())
                      : (pick == 2 && dim == 2) ? depolarizing_channel(rng.uniform())
                                                : random_channel(dim, 2 + rng.index(3), rng.next_u64());
    const DensityMatrix out = apply(ch, rho);
    if (out.min_eigenvalue() <= kSingularTol || rho.min_eigenvalue() <= kSingularTol) {
      ++skipped;
      continue;
    }
    const HermitianMatrix ea = apply_tangent(ch, a);
    const SqrtDerivative c_in = sqrt_derivative(rho, a);
    const SqrtDerivative c_out = sqrt_derivative(out, ea);

    for (auto& v : variants) {
      double before = 0.0, after = 0.0;
      switch (kind) {
        case MetricKind::fs:
          before = fs_qgt(rho, c_in).gamma(0, 0);
          after = fs_qgt(out, c_out).gamma(0, 0);
          break;
        case MetricKind::petz_wy:
          before = petz_metric(wy, rho, a, a).real();
          after = petz_metric(wy, out, ea, ea).real();
          break;
        case MetricKind::alpha:
          before = (v.tilde ? alpha_qgt_Gtilde(rho, c_in, v.alpha) : alpha_qgt_G(rho, c_in, v.alpha)).gamma(0, 0);
          after = (v.tilde ? alpha_qgt_Gtilde(out, c_out, v.alpha) : alpha_qgt_G(out, c_out, v.alpha)).gamma(0, 0);
          break;
      }
      ++v.evaluated;
      const double excess = (after - before) / std::max(1.0, std::abs(before));
      v.worst_excess = std::max(v.worst_excess, excess);
      if (!(excess <= slack)) {
        ++v.violations;
        if (unitary) ++v.unitary_violations;
      }
    }
  }

  for (const auto& v : variants) {
    r.cases += v.evaluated;
    r.worst_deviation = std::max(r.worst_deviation, v.worst_excess);
    const double rate = v.evaluated ? static_cast<double>(v.violations) / static_cast<double>(v.evaluated) : 0.0;
    r.rows.push_back({v.alpha, v.tilde ? 1.0 : 0.0, static_cast<double>(v.evaluated),
                      static_cast<double>(v.violations), rate, static_cast<double>(v.unitary_violations),
                      v.worst_excess});
    if (asserted) r.failures += v.violations;
    if (v.violations > 0)
      diagnose(r, (kind == MetricKind::alpha ? std::string(v.tilde ? "Gtilde" : "G") + " alpha " + sci(v.alpha)
                                             : to_string(kind)) +
                      ": " + std::to_string(v.violations) + " of " + std::to_string(v.evaluated) +
                      " trials increased under the channel");
  }
  if (skipped) diagnose(r, std::to_string(skipped) + " trials skipped (singular state after the channel)");
  r.wall_time_seconds = clock.seconds();
  return r;
}

// ---------------------------------------------------------------------------

namespace {

void cramer_rao_rows(SuiteResult& r, const StateFamily& family, const std::vector<double>& thetas,
                     const ComplexMatrix& basis, double case_tag, double slack) {
  if (family.param_count() != 1) throw BadFamily("cramer_rao: family must have a single parameter");
  if (static_cast<std::size_t>(basis.rows()) != family.dim() || basis.rows() != basis.cols())
    throw ShapeError("cramer_rao: measurement basis dimension mismatch");
  if (unitarity_residual(basis) > kUnitaryTol) throw NonUnitaryGauge("cramer_rao: measurement basis is not unitary");
  const auto n = basis.cols();
  for (double theta : thetas) {
    const DensityMatrix rho = family.evaluate({theta});
    const HermitianMatrix drho = family.derivatives({theta})[0];
    const double gamma = fs_qgt(rho, sqrt_derivative(rho, drho)).gamma(0, 0);
    const double f_sld = sld_qfi(rho, {drho}).fisher(0, 0);
    RealVector p(n), pdot(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      p(k) = basis.col(k).dot(rho.matrix() * basis.col(k)).real();
      pdot(k) = basis.col(k).dot(drho.matrix() * basis.col(k)).real();
    }
    const double f_cl = classical_fisher(p, pdot);
    const double ig = inverse_or_inf(gamma), icl = inverse_or_inf(f_cl);
    double relation = 0.0;
    if (std::isinf(ig) && std::isinf(icl)) relation = 0.0;
    else if (ig > icl * (1.0 + 1e-9)) relation = 1.0;
    else if (ig < icl * (1.0 - 1e-9)) relation = -1.0;
    r.rows.push_back({case_tag, theta, gamma, f_sld, f_cl, ig, inverse_or_inf(f_sld), icl, relation});
    check_case(r, std::max(0.0, f_cl - f_sld) / std::max(1.0, f_sld), slack,
               "case " + sci(case_tag) + " theta " + sci(theta) + " F_cl > F_SLD");
  }
}

std::vector<std::string> cramer_rao_columns() {
  return {"case", "theta", "gamma", "f_sld", "f_cl", "inv_gamma", "inv_f_sld", "inv_f_cl", "inv_gamma_vs_inv_f_cl"};
}

}  // namespace

SuiteResult suite_cramer_rao(const StateFamily& family, const std::vector<double>& thetas, const ComplexMatrix& basis,
                             std::uint64_t seed, ToleranceProfile profile) {
  const Stopwatch clock;
  SuiteResult r = make_result("cramer_rao", true, seed, cramer_rao_columns());
  cramer_rao_rows(r, family, thetas, basis, 0.0, scaled_tolerance(1e-8, profile));
  r.wall_time_seconds = clock.seconds();
  return r;
}

SuiteResult suite_cramer_rao_default(std::size_t samples, std::uint64_t seed, ToleranceProfile profile) {
  const Stopwatch clock;
  SuiteResult r = make_result("cramer_rao", true, seed, cramer_rao_columns());
  const double slack = scaled_tolerance(1e-8, profile);

  ComplexMatrix ground = ComplexMatrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  ComplexMatrix sy(2, 2);
  sy << 0, Complex(0, -0.5), Complex(0, 0.5), 0;
  const StateFamily rotation = family_unitary_orbit(DensityMatrix(ground), HermitianMatrix(sy));
  std::vector<double> angles;
  for (int k = 1; k <= 9; ++k) angles.push_back(0.3 * k);
  cramer_rao_rows(r, rotation, angles, identity(2), 0.0, slack);

  RealVector l0(2), slope(2);
  l0 << 0.0, 1.0;
  slope << 1.0, -1.0;
  const StateFamily commuting = family_linear_eigenvalue_path(l0, slope, identity(2));
  std::vector<double> grid;
  for (int k = 1; k <= 9; ++k) grid.push_back(0.1 * k);
  cramer_rao_rows(r, commuting, grid, identity(2), 1.0, slack);

  const DensityMatrix fixed = random_density(2, 2, stream_seed(seed, 0));
  const StateFamily constant = family_affine(fixed, {HermitianMatrix::zero(2)});
  cramer_rao_rows(r, constant, {0.0}, identity(2), 2.0, slack);

  for (std::size_t t = 0; t < samples; ++t) {
    Rng rng(stream_seed(seed, t + 1));
    const std::size_t dim = 2 + t % 2;
    const SampledFamily s = random_family(rng, dim, static_cast<FamilyKind>(t % 2), 0.0);
    cramer_rao_rows(r, s.family, s.theta, random_unitary(rng, dim), 3.0, slack);
  }
  r.wall_time_seconds = clock.seconds();
  return r;
}

SuiteResult suite_domination(std::size_t samples, std::uint64_t seed, ToleranceProfile profile) {
  const Stopwatch clock;
  SuiteResult r = make_result("domination", true, seed, {"dim", "family", "gamma", "f_sld", "ratio"});
  const double slack = scaled_tolerance(1e-9, profile);
  for (std::size_t t = 0; t < samples; ++t) {
    Rng rng(stream_seed(seed, t));
    const std::size_t dim = 2 + t % 3;
    const SampledFamily s = random_family(rng, dim, static_cast<FamilyKind>(t % 2), 0.0);
    const DensityMatrix rho = s.family.evaluate(s.theta);
    const auto drho = s.family.derivatives(s.theta);
    const double gamma = fs_qgt(rho, sqrt_derivative(rho, drho)).gamma(0, 0);
    const double f_sld = sld_qfi(rho, drho).fisher(0, 0);
    check_case(r, std::max(0.0, gamma - f_sld), slack, "case " + std::to_string(t) + " gamma > F_SLD");
    r.rows.push_back({static_cast<double>(dim), static_cast<double>(s.kind), gamma, f_sld,
                      f_sld > 1e-14 ? gamma / f_sld : 0.0});
  }
  r.wall_time_seconds = clock.seconds();
  return r;
}

// ---------------------------------------------------------------------------

SuiteResult suite_dynamical_phase(std::size_t samples, const std::vector<double>& alphas, std::uint64_t seed,
                                  ToleranceProfile profile) {
  const Stopwatch clock;
  SuiteResult r = make_result("dynamical_phase", true, seed,
                              {"alpha", "families", "max_abs_phase", "nonzero_families", "constant_family_phase",
                               "example_phase_imag"});
  const double tol = scaled_tolerance(1e-9, profile);
  const OperatorFunction arith = arithmetic_fn();

  RealVector ex_l0(2), ex_slope(2);
  ex_l0 << 0.0, 1.0;
  ex_slope << 1.0, -1.0;
  const StateFamily example = family_linear_eigenvalue_path(ex_l0, ex_slope, identity(2));
  const DensityMatrix ex_rho = example.evaluate({0.25});
  const auto ex_c = generalized_sqrt_derivative(ex_rho, example.derivatives({0.25}), arith);

  for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
    const double alpha = alphas[ai];
    if (!(alpha >= 1.0)) throw DomainError(alpha, "suite_dynamical_phase (alpha >= 1)");
    double max_phase = 0.0;
    std::size_t nonzero = 0;
    for (std::size_t t = 0; t < samples; ++t) {
      Rng rng(stream_seed(stream_seed(seed, ai), t));
      const std::size_t dim = 2 + t % 3;
      const auto kind = alpha == 1.0 ? static_cast<FamilyKind>(t % 3) : FamilyKind::eigenvalue_path;
      const SampledFamily s = random_family(rng, dim, kind, 0.0);
      const DensityMatrix rho = s.family.evaluate(s.theta);
      const auto drho = s.family.derivatives(s.theta);
      std::vector<Complex> phase;
      if (alpha == 1.0) {
        phase = dynamical_phase(rho, sqrt_derivative(rho, drho));
      } else {
        phase = alpha_dynamical_phase(rho, generalized_sqrt_derivative(rho, drho, arith), alpha);
      }
      double m = 0.0;
      for (const auto& p : phase) m = std::max(m, std::abs(p));
      max_phase = std::max(max_phase, m);
      if (m > 1e-6) ++nonzero;
      if (alpha == 1.0) check_case(r, m, tol, "alpha 1 case " + std::to_string(t));
    }

    const DensityMatrix still = random_density(2, 2, stream_seed(seed, 1000 + ai));
    const StateFamily constant = family_affine(still, {HermitianMatrix::zero(2)});
    const auto c0 = generalized_sqrt_derivative(still, constant.derivatives({0.0}), arith);
    const double constant_phase = std::abs(alpha_dynamical_phase(still, c0, alpha)[0]);
    check_case(r, constant_phase, tol, "constant family alpha " + sci(alpha));

    if (alpha > 1.0) {
      ++r.cases;
      if (nonzero == 0) {
        ++r.failures;
        diagnose(r, "alpha " + sci(alpha) + ": no sampled commuting family has a nonzero phase");
      }
    }
    const Complex ex_phase = alpha_dynamical_phase(ex_rho, ex_c, alpha)[0];
    r.rows.push_back({alpha, static_cast<double>(samples), max_phase, static_cast<double>(nonzero), constant_phase,
                      ex_phase.imag()});
  }
  r.wall_time_seconds = clock.seconds();
  return r;
}

// ---------------------------------------------------------------------------

namespace {

struct EvolutionPaths {
  double trace_formula, unitary, dilation, kraus, dilation_sector, generator;
  double generic_gap;

  double spread() const {
    const double v[] = {trace_formula, unitary, dilation, kraus, dilation_sector, generator};
    return *std::max_element(std::begin(v), std::end(v)) - *std::min_element(std::begin(v), std::end(v));
  }
};

EvolutionPaths evolution_paths(const DensityMatrix& rho, const HermitianMatrix& h, const ComplexVector& nu,
                               const HermitianMatrix& y) {
  const std::size_t n = rho.dim();
  const std::size_t m = static_cast<std::size_t>(nu.size());
  EvolutionPaths p{};
  p.trace_formula = fs_qgt(family_unitary_orbit(rho, h), {0.0}).gamma(0, 0);
  p.unitary = metric_unitary(rho, h);
  const ComplexMatrix ha = kron(h.matrix(), identity(m));
  p.dilation = metric_cptp_dilation(rho, HermitianMatrix::symmetrized(ha), nu);

  const ComplexMatrix q = identity(m) - nu * nu.adjoint();
  const ComplexMatrix iq = kron(identity(n), q);
  const auto sector = HermitianMatrix::symmetrized(ha + iq * y.matrix() * iq);
  const KrausPath path = kraus_path_from_generator(sector, nu, n);
  p.kraus = metric_cptp_kraus(rho, path.kraus, path.derivatives);
  p.dilation_sector = metric_cptp_dilation(rho, sector, nu);

  const GeneratorSolution gen = generator_commutator(rho, h);
  p.generator = exact_variance(gen.h_ab, vec(rho.sqrt().matrix()));

  const KrausPath generic = kraus_path_from_generator(y, nu, n);
  p.generic_gap = metric_cptp_kraus(rho, generic.kraus, generic.derivatives) - metric_cptp_dilation(rho, y, nu);
  return p;
}

}  // namespace

SuiteResult suite_evolution_consistency(std::size_t samples, std::uint64_t seed, ToleranceProfile profile) {
  const Stopwatch clock;
  SuiteResult r = make_result("evolution", true, seed,
                              {"dim", "trace_formula", "unitary", "dilation", "kraus", "dilation_sector", "generator",
                               "spread", "generic_kraus_gap"});
  const double tol = scaled_tolerance(1e-7, profile);

  auto add = [&](const EvolutionPaths& p, std::size_t dim, const std::string& label, std::optional<double> exact) {
    double dev = p.spread();
    if (exact) {
      for (double v : {p.trace_formula, p.unitary, p.dilation, p.kraus, p.dilation_sector, p.generator})
        dev = std::max(dev, std::abs(v - *exact));
    }
    check_case(r, dev, tol, label);
    r.rows.push_back({static_cast<double>(dim), p.trace_formula, p.unitary, p.dilation, p.kraus, p.dilation_sector,
                      p.generator, p.spread(), p.generic_gap});
  };

  {
    const DensityMatrix rho(HermitianMatrix::diagonal(RealVector::Map(std::array<double, 2>{0.75, 0.25}.data(), 2)));
    ComplexMatrix sx(2, 2);
    sx << 0, 1, 1, 0;
    Rng rng(stream_seed(seed, 0));
    const EvolutionPaths p = evolution_paths(rho, HermitianMatrix(sx), random_unit_vector(rng, 2),
                                             HermitianMatrix::symmetrized(random_hermitian(rng, 4)));
    add(p, 2, "diag(3/4,1/4) with sigma_x", 2.0 - std::sqrt(3.0));
  }
  {
    const DensityMatrix rho(HermitianMatrix::diagonal(RealVector::Map(std::array<double, 2>{0.6, 0.4}.data(), 2)));
    const auto h = HermitianMatrix::diagonal(RealVector::Map(std::array<double, 2>{0.3, -1.1}.data(), 2));
    Rng rng(stream_seed(seed, 1));
    const EvolutionPaths p = evolution_paths(rho, h, random_unit_vector(rng, 2),
                                             HermitianMatrix::symmetrized(random_hermitian(rng, 4)));
    add(p, 2, "commuting H and rho", 0.0);
  }
  for (std::size_t t = 0; t < samples; ++t) {
    Rng rng(stream_seed(seed, t + 2));
    const std::size_t dim = 2 + t % 3;
    const DensityMatrix rho = random_density(dim, 1 + rng.index(dim), rng.next_u64());
    const auto h = HermitianMatrix::symmetrized(random_hermitian(rng, dim));
    const ComplexVector nu = random_unit_vector(rng, dim);
    const auto y = HermitianMatrix::symmetrized(random_hermitian(rng, dim * dim));
    add(evolution_paths(rho, h, nu, y), dim, "random case " + std::to_string(t), std::nullopt);
  }
  r.wall_time_seconds = clock.seconds();
  return r;
}

// ---------------------------------------------------------------------------

double trace_power_index_sum(const ComplexMatrix& rho, int k) {
  if (k < 1) throw DomainError(k, "trace_power_index_sum (k >= 1)");
  const auto n = static_cast<std::size_t>(rho.rows());
  const double terms = std::pow(static_cast<double>(n), k);
  if (terms > 1e7) throw SizeLimit("trace_power_index_sum: " + sci(terms) + " terms exceed 1e7");
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(k), 0);
  Complex total = 0.0;
  const auto ni = static_cast<Eigen::Index>(n);
  while (true) {
    Complex term = 1.0;
    for (int a = 0; a < k; ++a) term *= rho(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>((a + 1) % k)]);
    total += term;
    int pos = k - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == ni) {
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
  return total.real();
}

SuiteResult suite_trace_identities(std::size_t samples, int alpha_max, std::uint64_t seed, ToleranceProfile profile) {
  const Stopwatch clock;
  if (alpha_max > 6) throw SizeLimit("suite_trace_identities: alpha_max must be at most 6");
  SuiteResult r = make_result("trace_identities", true, seed, {"dim", "alpha", "index_sum", "spectral", "deviation"});
  const double tol = scaled_tolerance(1e-9, profile);

  auto run = [&](const DensityMatrix& rho, const std::string& label) {
    const RealVector l = rho.clamped_eigenvalues();
    for (int a = 2; a <= alpha_max; ++a) {
      const double lhs = trace_power_index_sum(rho.matrix(), a);
      const double rhs = l.array().pow(a).sum();
      check_case(r, std::abs(lhs - rhs), tol, label + " alpha " + std::to_string(a));
      r.rows.push_back({static_cast<double>(rho.dim()), static_cast<double>(a), lhs, rhs, std::abs(lhs - rhs)});
    }
    const ComplexMatrix& m = rho.matrix();
    Complex pair_sum = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) pair_sum += m(i, j) * m(j, i);
    check_case(r, std::abs(pair_sum.real() - l.squaredNorm()), tol, label + " pair sum");
  };

  run(DensityMatrix(HermitianMatrix::symmetrized(identity(2) / 2.0)), "identity/2");
  for (std::size_t t = 0; t < samples; ++t) {
    Rng rng(stream_seed(seed, t));
    const std::size_t dim = 2 + t % 3;
    run(random_density(dim, 1 + rng.index(dim), rng.next_u64()), "case " + std::to_string(t));
  }
  r.wall_time_seconds = clock.seconds();
  return r;
}

// ---------------------------------------------------------------------------

SuiteResult suite_means(std::size_t trials, std::uint64_t seed, ToleranceProfile profile) {
  const Stopwatch clock;
  SuiteResult r = make_result("means", true, seed, {"function", "check", "trials", "violations", "worst_margin", "partner"});
  const double recover_tol = scaled_tolerance(1e-10, profile);
  const auto catalogue = mean_catalogue();

  // check codes: 0 transformer leq, 1 monotone leq, 2 transformer geq,
  // 3 monotone geq, 4 recover_scalar, 5 square pair (f = function, g = partner)
  auto add_report = [&](std::size_t fi, int check, const MeanCheckReport& rep, bool asserted) {
    r.rows.push_back({static_cast<double>(fi), static_cast<double>(check), static_cast<double>(rep.trials),
                      static_cast<double>(rep.violations), rep.worst_margin, -1.0});
    if (!asserted) return;
    r.cases += rep.trials;
    r.failures += rep.violations;
    r.worst_deviation = std::max(r.worst_deviation, std::max(0.0, -rep.worst_margin));
    if (rep.violations)
      diagnose(r, rep.function + " " + to_string(rep.direction) + ": " + std::to_string(rep.violations) +
                      " violations, worst margin " + sci(rep.worst_margin));
  };

  std::vector<OperatorFunction> functions = catalogue;
  functions.push_back(square_fn());
  for (std::size_t fi = 0; fi < functions.size(); ++fi) {
    const auto& f = functions[fi];
    const bool asserted = fi < catalogue.size();
    const std::uint64_t s = stream_seed(seed, fi);
    add_report(fi, 0, check_transformer(f, Direction::leq, trials, splitmix64(s ^ 1)), asserted);
    add_report(fi, 1, check_mean_monotone(f, Direction::leq, trials, splitmix64(s ^ 2)), asserted);
    add_report(fi, 2, check_transformer(f, Direction::geq, trials, splitmix64(s ^ 3)), false);
    add_report(fi, 3, check_mean_monotone(f, Direction::geq, trials, splitmix64(s ^ 4)), false);

    const MeanFunction mean = [&f](const HermitianMatrix& a, const HermitianMatrix& b) { return sigma_mean(a, b, f); };
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double t = std::pow(10.0, -2.0 + 4.0 * k / 19.0);
      worst = std::max(worst, std::abs(recover_scalar(mean, t) - f(t)) / std::max(1.0, std::abs(f(t))));
    }
    r.rows.push_back({static_cast<double>(fi), 4.0, 20.0, worst > recover_tol ? 1.0 : 0.0, -worst, -1.0});
    if (asserted) check_case(r, worst, recover_tol, f.name + " recover_scalar");
  }

  const auto pairs = search_square_pairs(functions);
  for (std::size_t k = 0; k < pairs.size(); ++k)
    r.rows.push_back({static_cast<double>(k / functions.size()), 5.0, 81.0, pairs[k].deviation < 1e-12 ? 0.0 : 1.0,
                      -pairs[k].deviation, static_cast<double>(k % functions.size())});
  for (const auto& p : pairs)
    if (p.deviation < 1e-12) diagnose(r, "square pair satisfied: f = " + p.f + ", g = " + p.g);
  r.wall_time_seconds = clock.seconds();
  return r;
}

// ---------------------------------------------------------------------------

SuiteResult suite_statistics(std::size_t seeds, std::uint64_t shots, std::uint64_t seed) {
  const Stopwatch clock;
  SuiteResult r = make_result("statistics", true, seed, {"index", "sample_variance", "stderr", "z"});
  r.allowed_failures = seeds - static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(seeds)));
  const DensityMatrix rho(HermitianMatrix::diagonal(RealVector::Map(std::array<double, 2>{0.75, 0.25}.data(), 2)));
  ComplexMatrix sx(2, 2);
  sx << 0, 1, 1, 0;
  const GeneratorSolution gen = generator_commutator(rho, HermitianMatrix(sx));
  const ComplexVector psi = vec(rho.sqrt().matrix());
  for (std::size_t i = 0; i < seeds; ++i) {
    const EstimateRecord e = simulate_variance(gen.h_ab, psi, shots, stream_seed(seed, i), gen.construction);
    const double dev = std::abs(e.sample_variance - e.exact_variance);
    const double z = e.stderr_estimate > 0.0 ? dev / e.stderr_estimate : (dev > 0.0 ? kInf : 0.0);
    ++r.cases;
    r.worst_deviation = std::max(r.worst_deviation, z);
    if (!(z <= 3.0)) {
      ++r.failures;
      diagnose(r, "estimate " + std::to_string(i) + " is " + sci(z) + " standard errors from the exact variance");
    }
    r.rows.push_back({static_cast<double>(i), e.sample_variance, e.stderr_estimate, z});
  }
  r.wall_time_seconds = clock.seconds();
  return r;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "all",        "gauge",           "monotonicity", "monotonicity_fs", "monotonicity_alpha",
      "monotonicity_petz_wy", "cramer_rao", "domination", "dynamical_phase", "evolution",
      "trace_identities", "means", "statistics"};
  return names;
}

std::vector<SuiteResult> run_suite(const std::string& name, const SuiteOptions& o) {
  auto count = [&](std::size_t fallback) { return o.samples.value_or(fallback); };
  const std::uint64_t s = o.seed;
  if (name == "all") {
    std::vector<SuiteResult> out;
    for (const auto& n : suite_names()) {
      if (n == "all" || n == "monotonicity") continue;
      auto part = run_suite(n, o);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  if (name == "gauge") {
    const std::size_t q = count(100);
    return {suite_gauge_invariance(q, std::max<std::size_t>(1, q / 2), s, o.profile)};
  }
  if (name == "monotonicity")
    return {suite_monotonicity_metric(MetricKind::fs, count(500), s, {}, 2, o.profile),
            suite_monotonicity_metric(MetricKind::alpha, count(500), s, {1.0, 1.5, 2.0, 3.0}, 2, o.profile),
            suite_monotonicity_metric(MetricKind::petz_wy, count(500), s, {}, 2, o.profile)};
  if (name == "monotonicity_fs") return {suite_monotonicity_metric(MetricKind::fs, count(500), s, {}, 2, o.profile)};
  if (name == "monotonicity_alpha")
    return {suite_monotonicity_metric(MetricKind::alpha, count(500), s, {1.0, 1.5, 2.0, 3.0}, 2, o.profile)};
  if (name == "monotonicity_petz_wy")
    return {suite_monotonicity_metric(MetricKind::petz_wy, count(500), s, {}, 2, o.profile)};
  if (name == "cramer_rao") return {suite_cramer_rao_default(count(50), s, o.profile)};
  if (name == "domination") return {suite_domination(count(500), s, o.profile)};
  if (name == "dynamical_phase") return {suite_dynamical_phase(count(200), {1.0, 2.0, 3.0}, s, o.profile)};
  if (name == "evolution") return {suite_evolution_consistency(count(100), s, o.profile)};
  if (name == "trace_identities") return {suite_trace_identities(count(20), 6, s, o.profile)};
  if (name == "means") return {suite_means(count(500), s, o.profile)};
  if (name == "statistics") return {suite_statistics(count(100), 100000, s)};
  throw UnknownSuite("unknown suite '" + name + "'");
}

}  // namespace qgeom
