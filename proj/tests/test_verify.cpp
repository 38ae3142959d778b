#include "oracles.hpp"

#include "qgeom/errors.hpp"
#include "qgeom/io.hpp"
#include "qgeom/rng.hpp"
#include "qgeom/verify.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace qgeom;

namespace {

std::size_t column(const SuiteResult& r, const std::string& name) {
  const auto it = std::find(r.columns.begin(), r.columns.end(), name);
  REQUIRE(it != r.columns.end());
  return static_cast<std::size_t>(it - r.columns.begin());
}

StateFamily rotation() {
  ComplexMatrix ground = ComplexMatrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  ComplexMatrix y(2, 2);
  y << 0, Complex(0, -0.5), Complex(0, 0.5), 0;
  return family_unitary_orbit(DensityMatrix(ground), HermitianMatrix(y));
}

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("tolerance profiles") {
    CHECK(tolerance_profile_from_string("default") == ToleranceProfile::standard);
    CHECK(tolerance_profile_from_string("strict") == ToleranceProfile::strict);
    CHECK(to_string(ToleranceProfile::standard) == "default");
    CHECK(scaled_tolerance(1e-8, ToleranceProfile::strict) == doctest::Approx(1e-9));
    CHECK_THROWS_AS(tolerance_profile_from_string("lenient"), FormatError);
  }

  TEST_CASE("small suites pass") {
    CHECK(suite_gauge_invariance(10, 5, 1).passed());
    CHECK(suite_gauge_invariance(10, 5, 1, ToleranceProfile::strict).passed());
    CHECK(suite_domination(50, 2).passed());
    CHECK(suite_dynamical_phase(20, {1.0, 2.0}, 3).passed());
    CHECK(suite_evolution_consistency(10, 4).passed());
    CHECK(suite_trace_identities(5, 4, 5).passed());
    CHECK(suite_cramer_rao_default(5, 6).passed());
  }

  TEST_CASE("gauge suite counts its cases") {
    const auto r = suite_gauge_invariance(10, 5, 1);
    CHECK(r.cases == 30);  // purification and stencil paths per family
    CHECK(r.failures == 0);
    CHECK(r.worst_deviation <= 1e-8);
  }

  TEST_CASE("monotonicity tables") {
    const auto wy = suite_monotonicity_metric(MetricKind::petz_wy, 100, 8);
    CHECK(wy.assertion);
    CHECK(wy.passed());
    CHECK(wy.failures == 0);
    const auto alpha = suite_monotonicity_metric(MetricKind::alpha, 100, 8);
    CHECK_FALSE(alpha.assertion);
    CHECK(alpha.passed());
    CHECK(alpha.rows.size() == 8);  // four alphas, G and G tilde
    const auto ev = column(alpha, "evaluated"), viol = column(alpha, "violations"), rate = column(alpha, "rate");
    for (const auto& row : alpha.rows) {
      CHECK(row[ev] > 0);
      CHECK(row[rate] == doctest::Approx(row[viol] / row[ev]));
    }
    CHECK(metric_kind_from_string(to_string(MetricKind::fs)) == MetricKind::fs);
  }

  TEST_CASE("Cramer-Rao table on fixed families") {
    RealVector l0(2), slope(2);
    l0 << 0.0, 1.0;
    slope << 1.0, -1.0;
    const auto commuting = family_linear_eigenvalue_path(l0, slope, identity(2));
    const auto r = suite_cramer_rao(commuting, {0.2, 0.5}, identity(2));
    CHECK(r.passed());
    const auto fcl = column(r, "f_cl"), fsld = column(r, "f_sld"), gamma = column(r, "gamma");
    for (const auto& row : r.rows) {
      CHECK(row[fcl] == doctest::Approx(row[fsld]).epsilon(1e-10));
      CHECK(row[gamma] == doctest::Approx(row[fsld] / 4.0).epsilon(1e-10));
    }

    const auto z = suite_cramer_rao(rotation(), {0.3, 0.9}, identity(2));
    for (const auto& row : z.rows) CHECK(row[column(z, "f_cl")] == doctest::Approx(1.0).epsilon(1e-10));
    // sigma_y eigenbasis carries no information about a rotation generated by sigma_y
    ComplexMatrix ybasis(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    ybasis << s, s, Complex(0, s), Complex(0, -s);
    const auto y = suite_cramer_rao(rotation(), {0.3, 0.9}, ybasis);
    for (const auto& row : y.rows) {
      CHECK(std::abs(row[column(y, "f_cl")]) < 1e-12);
      CHECK(std::isinf(row[column(y, "inv_f_cl")]));
    }

    const auto two = family_affine(random_density(2, 2, 1), {HermitianMatrix::zero(2), HermitianMatrix::zero(2)});
    CHECK_THROWS_AS(suite_cramer_rao(two, {0.0}, identity(2)), BadFamily);
  }

  TEST_CASE("means suite") {
    const auto r = suite_means(100, 9);
    CHECK(r.passed());
    CHECK(r.failures == 0);
    CHECK(std::find(r.columns.begin(), r.columns.end(), "worst_margin") != r.columns.end());
  }

  TEST_CASE("statistics suite allows five percent misses") {
    const auto r = suite_statistics(20, 20000, 10);
    CHECK(r.cases == 20);
    CHECK(r.allowed_failures == 1);
    CHECK(r.passed());
  }

  TEST_CASE("trace power index sums") {
    const auto rho = random_density(3, 3, 11);
    for (int k = 1; k <= 5; ++k) {
      ComplexMatrix p = identity(3);
      for (int i = 0; i < k; ++i) p *= rho.matrix();
      CHECK(trace_power_index_sum(rho.matrix(), k) == doctest::Approx(p.trace().real()).epsilon(1e-12));
    }
    CHECK_THROWS_AS(trace_power_index_sum(random_density(8, 8, 1).matrix(), 9), SizeLimit);
  }

  TEST_CASE("suite registry") {
    const auto& names = suite_names();
    CHECK(std::find(names.begin(), names.end(), "all") != names.end());
    CHECK_THROWS_AS(run_suite("nonsense", {}), UnknownSuite);
    SuiteOptions opt;
    opt.seed = 3;
    opt.samples = 5;
    CHECK(run_suite("monotonicity", opt).size() == 3);
    for (const auto& r : run_suite("gauge", opt)) CHECK(r.passed());
  }

  TEST_CASE("suites are deterministic and serialize identically") {
    SuiteOptions opt;
    opt.seed = 12;
    opt.samples = 5;
    const auto a = run_suite("all", opt), b = run_suite("all", opt);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(suite_to_json(a[i]).dump() == suite_to_json(b[i]).dump());
      CHECK(suite_to_json(suite_from_json(suite_to_json(a[i]))).dump() == suite_to_json(a[i]).dump());
    }
    opt.seed = 13;
    const auto c = run_suite("domination", opt);
    CHECK(suite_to_json(c[0]).dump() != suite_to_json(run_suite("domination", SuiteOptions{12, 5, {}})[0]).dump());
  }
}
