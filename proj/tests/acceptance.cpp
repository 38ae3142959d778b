// One line per acceptance criterion; exit status 1 if any criterion fails.

#include "qgeom/cli.hpp"
#include "qgeom/expsim.hpp"
#include "qgeom/meanslab.hpp"
#include "qgeom/metrics.hpp"
#include "qgeom/rng.hpp"
#include "qgeom/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

using namespace qgeom;

namespace {

int failed = 0;

void report(int id, bool ok, const std::string& what, const std::string& measured) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), measured.c_str());
  if (!ok) ++failed;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

ComplexMatrix pauli_x() {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

HermitianMatrix traceless(Rng& rng, std::size_t n) {
  ComplexMatrix h = random_hermitian(rng, n);
  h -= (h.trace() / static_cast<double>(n)) * identity(n);
  return HermitianMatrix::symmetrized(h);
}

StateFamily commuting_family() {
  RealVector l0(2), slope(2);
  l0 << 0.0, 1.0;
  slope << 1.0, -1.0;
  return family_linear_eigenvalue_path(l0, slope, identity(2));
}

/// Random single-parameter family: a unitary orbit or an affine path through a
/// state of random rank.
StateFamily random_family(std::uint64_t seed, bool full_rank) {
  Rng rng(seed);
  const std::size_t n = 2 + rng.index(3);
  const std::size_t rank = full_rank ? n : 1 + rng.index(n);
  const auto rho = random_density(n, rank, splitmix64(seed));
  if (!full_rank || rng.uniform() < 0.5)
    return family_unitary_orbit(rho, HermitianMatrix::symmetrized(random_hermitian(rng, n)));
  const auto d = traceless(rng, n);
  return family_affine(rho, {HermitianMatrix::symmetrized(d.matrix() * (0.2 * rho.min_eigenvalue()))});
}

void criterion_gauge() {
  const auto r = suite_gauge_invariance(100, 50, 1);
  report(1, r.cases == 300 && r.failures == 0 && r.worst_deviation <= 1e-8,
         "gauge invariance, 100 qubit + 50 qutrit families",
         std::to_string(r.failures) + " failures, worst " + sci(r.worst_deviation));
}

void criterion_evolution() {
  RealVector d(2);
  d << 0.75, 0.25;
  const DensityMatrix rho(HermitianMatrix::diagonal(d));
  const HermitianMatrix h(pauli_x());
  ComplexVector nu = ComplexVector::Zero(2);
  nu(0) = 1.0;
  const double values[] = {
      fs_qgt(family_unitary_orbit(rho, h), {0.0}).gamma(0, 0),
      metric_unitary(rho, h),
      metric_cptp_dilation(rho, HermitianMatrix::symmetrized(kron(h.matrix(), identity(2))), nu),
      exact_variance(generator_commutator(rho, h).h_ab, vec(rho.sqrt().matrix())),
  };
  const auto [lo, hi] = std::minmax_element(std::begin(values), std::end(values));
  const double expected = 2.0 - std::sqrt(3.0);
  const bool near = std::abs(*lo - expected) <= 1e-7 && std::abs(*hi - expected) <= 1e-7;
  report(2, *hi - *lo <= 1e-7 && near, "four evolution paths agree on 2 - sqrt 3",
         "spread " + sci(*hi - *lo) + ", value " + std::to_string(values[0]));
}

void criterion_commuting() {
  const auto fam = commuting_family();
  double worst = 0.0;
  for (int k = 1; k <= 9; ++k) {
    const double th = 0.1 * k;
    worst = std::max(worst, std::abs(fs_qgt(fam, {th}).gamma(0, 0) - 1.0 / (4.0 * th * (1.0 - th))));
  }
  report(3, worst <= 1e-9, "commuting reduction at theta = 0.1..0.9", "worst " + sci(worst));
}

void criterion_alpha_reduction() {
  double worst_g = 0.0, worst_t = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto fam = random_family(stream_seed(4, s), true);
    const Theta th{0.3};
    const auto rho = fam.evaluate(th);
    const auto c = sqrt_derivative(rho, fam.derivatives(th));
    const RealMatrix gamma = fs_qgt(rho, c).gamma;
    worst_g = std::max(worst_g, (alpha_qgt_G(rho, c, 1.0).gamma - gamma).cwiseAbs().maxCoeff());
    worst_t = std::max(worst_t, (alpha_qgt_Gtilde(rho, c, 1.0).gamma - gamma).cwiseAbs().maxCoeff());
  }
  report(4, worst_g <= 1e-10 && worst_t <= 1e-10, "G(1) and Gtilde(1) equal gamma on 50 families",
         "G " + sci(worst_g) + ", Gtilde " + sci(worst_t));
}

void criterion_phase() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto fam = random_family(stream_seed(5, s), s % 2 == 0);
    const Theta th{0.7};
    const auto rho = fam.evaluate(th);
    worst = std::max(worst, std::abs(alpha_dynamical_phase(rho, sqrt_derivative(rho, fam.derivatives(th)), 1.0)[0]));
  }
  const auto fam = commuting_family();
  const auto rho = fam.evaluate({0.25});
  const auto c = generalized_sqrt_derivative(rho, fam.derivatives({0.25}), arithmetic_fn());
  const double p2 = std::abs(alpha_dynamical_phase(rho, c, 2.0)[0]);
  report(5, worst <= 1e-9 && std::abs(p2 - 0.5) <= 1e-9, "phase(1) vanishes, |phase(2)| = 0.5 on the commuting example",
         "worst alpha=1 " + sci(worst) + ", alpha=2 " + std::to_string(p2));
}

void criterion_domination() {
  std::size_t violations = 0;
  double worst = -1e300;
  for (std::uint64_t s = 0; s < 500; ++s) {
    const auto fam = random_family(stream_seed(6, s), s % 3 == 0);
    const Theta th{0.5};
    const double gamma = fs_qgt(fam, th).gamma(0, 0);
    const double f = sld_qfi(fam, th).fisher(0, 0);
    worst = std::max(worst, gamma - f);
    if (gamma > f + 1e-9) ++violations;
  }
  report(6, violations == 0, "gamma <= F_SLD on 500 families",
         std::to_string(violations) + " violations, max gamma - F " + sci(worst));
}

void criterion_means() {
  std::size_t violations = 0;
  for (const auto& f : mean_catalogue()) {
    violations += check_transformer(f, Direction::leq, 500, 7).violations;
    violations += check_mean_monotone(f, Direction::leq, 500, 7).violations;
  }
  double worst = 0.0;
  for (const auto& f : mean_catalogue()) {
    const MeanFunction mean = [&f](const HermitianMatrix& a, const HermitianMatrix& b) { return sigma_mean(a, b, f); };
    for (int k = 0; k < 20; ++k) {
      const double t = std::pow(10.0, -2.0 + 4.0 * k / 19.0);
      worst = std::max(worst, std::abs(recover_scalar(mean, t) - f(t)) / std::max(1.0, f(t)));
    }
  }
  report(7, violations == 0 && worst <= 1e-10 && mean_catalogue().size() == 4,
         "transformer and monotonicity checks, scalar recovery",
         std::to_string(violations) + " violations, recovery " + sci(worst));
}

void criterion_monotonicity() {
  const auto wy = suite_monotonicity_metric(MetricKind::petz_wy, 500, 8);
  const auto fs = suite_monotonicity_metric(MetricKind::fs, 500, 8);
  const auto alpha = suite_monotonicity_metric(MetricKind::alpha, 500, 8);
  auto complete = [](const SuiteResult& r) {
    if (r.rows.empty()) return false;
    for (const auto& row : r.rows)
      if (row.size() != r.columns.size()) return false;
    return true;
  };
  report(8, wy.failures == 0 && wy.cases == 500 && complete(fs) && complete(alpha),
         "Wigner-Yanase Petz metric contracts on 500 qubit triples; fs and alpha tables emitted",
         std::to_string(wy.failures) + " violations, fs rows " + std::to_string(fs.rows.size()) + ", alpha rows " +
             std::to_string(alpha.rows.size()));
}

void criterion_statistics() {
  const auto r = suite_statistics(100, 100000, 9);
  const std::size_t inside = r.cases - r.failures;
  report(9, r.cases == 100 && inside >= 95, "estimates within 3 standard errors over 100 seeds",
         std::to_string(inside) + "/100 inside");
}

void criterion_determinism() {
  const std::vector<std::string> args{"--seed", "7", "verify", "--suite", "all"};
  std::ostringstream a, b, err;
  const int ca = run_cli(args, a, err), cb = run_cli(args, b, err);
  report(10, ca == cb && !a.str().empty() && a.str() == b.str(), "verify --suite all --seed 7 is byte-identical",
         std::to_string(a.str().size()) + " bytes, exit " + std::to_string(ca));
}

}  // namespace

int main() {
  criterion_gauge();
  criterion_evolution();
  criterion_commuting();
  criterion_alpha_reduction();
  criterion_phase();
  criterion_domination();
  criterion_means();
  criterion_monotonicity();
  criterion_statistics();
  criterion_determinism();
  std::printf("%d of 10 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
