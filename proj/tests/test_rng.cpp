#include "qgeom/operator_function.hpp"
#include "qgeom/errors.hpp"
#include "qgeom/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace qgeom;

TEST_SUITE("rng") {
  TEST_CASE("same seed gives the same stream") {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i) {
      const auto x = a.next_u64();
      CHECK(x == b.next_u64());
      (void)c;
    }
    Rng d(42), e(43);
    CHECK(d.next_u64() != e.next_u64());
  }

  TEST_CASE("stream seeds are distinct across indices") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(stream_seed(7, i));
    CHECK(seen.size() == 1000);
    CHECK(stream_seed(7, 0) != stream_seed(8, 0));
  }

  TEST_CASE("uniform and normal moments") {
    Rng rng(1);
    constexpr int n = 200000;
    double su = 0, sn = 0, sn2 = 0;
    for (int i = 0; i < n; ++i) {
      const double u = rng.uniform();
      CHECK_FALSE((u < 0.0 || u >= 1.0));
      su += u;
      const double z = rng.normal();
      sn += z;
      sn2 += z * z;
    }
    CHECK(std::abs(su / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
    CHECK(std::abs(sn / n) < 5.0 / std::sqrt(n));
    CHECK(std::abs(sn2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
  }

  TEST_CASE("random unitary and unit vectors") {
    Rng rng(3);
    for (std::size_t n = 1; n <= 6; ++n) {
      CHECK(unitarity_residual(random_unitary(rng, n)) < 1e-12);
      CHECK(std::abs(random_unit_vector(rng, n).norm() - 1.0) < 1e-14);
      CHECK(hermiticity_residual(random_hermitian(rng, n)) == 0.0);
    }
  }

  TEST_CASE("gram schmidt reports the rank") {
    Rng rng(4);
    ComplexMatrix m = rng.gaussian_matrix(4, 3);
    m.col(2) = 2.0 * m.col(0) - m.col(1);
    CHECK(gram_schmidt(m) == 2);
    CHECK(m.col(2).norm() == 0.0);
    CHECK(std::abs(m.col(0).dot(m.col(1))) < 1e-14);
  }
}

TEST_SUITE("operator_function") {
  TEST_CASE("catalogue values") {
    CHECK(arithmetic_fn()(3.0) == doctest::Approx(2.0));
    CHECK(geometric_fn()(4.0) == doctest::Approx(2.0));
    CHECK(harmonic_fn()(3.0) == doctest::Approx(1.5));
    CHECK(wigner_yanase_fn()(9.0) == doctest::Approx(4.0));
    for (const auto& f : mean_catalogue()) {
      CHECK(f.normalized);
      CHECK(f.tag == OperatorClass::monotone);
      CHECK(f(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(mean_catalogue().size() == 4);
  }

  TEST_CASE("construction checks positivity and normalization") {
    CHECK_THROWS_AS(make_operator_function("shifted", [](double t) { return t - 1.0; }, OperatorClass::untagged, false),
                    DomainError);
    CHECK_THROWS_AS(make_operator_function("double", [](double t) { return 2.0 * t; }, OperatorClass::untagged, true),
                    DomainError);
    CHECK_NOTHROW(make_operator_function("double", [](double t) { return 2.0 * t; }, OperatorClass::untagged, false));
  }

  TEST_CASE("lookup by name") {
    CHECK(operator_function_by_name("wigner_yanase").name == "wigner_yanase");
    CHECK(operator_function_by_name("square")(3.0) == doctest::Approx(9.0));
    CHECK_THROWS_AS(operator_function_by_name("cubic"), FormatError);
    CHECK(to_string(OperatorClass::convex) == "operator-convex");
  }
}
