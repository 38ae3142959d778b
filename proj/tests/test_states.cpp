#include "oracles.hpp"

#include "qgeom/errors.hpp"
#include "qgeom/rng.hpp"
#include "qgeom/states.hpp"

#include <doctest.h>

using namespace qgeom;

namespace {

DensityMatrix diag_state(double a, double b) {
  RealVector d(2);
  d << a, b;
  return DensityMatrix(HermitianMatrix::diagonal(d));
}

}  // namespace

TEST_SUITE("states") {
  TEST_CASE("density matrix validation") {
    CHECK_NOTHROW(diag_state(0.75, 0.25));
    CHECK_THROWS_AS(diag_state(0.5, 0.4), InvalidDensity);
    CHECK_THROWS_AS(diag_state(1.2, -0.2), InvalidDensity);
    CHECK_NOTHROW(diag_state(1.0 + 1e-11, -1e-11));
    const auto rho = diag_state(1.0 + 1e-11, -1e-11);
    CHECK(rho.clamped_eigenvalues()(0) == 0.0);
  }

  TEST_CASE("sqrt and power") {
    const auto rho = diag_state(0.25, 0.75);
    CHECK(rho.sqrt().matrix()(0, 0).real() == doctest::Approx(0.5));
    CHECK(rho.power(2.0).matrix()(1, 1).real() == doctest::Approx(0.5625));
  }

  TEST_CASE("random density has the requested rank") {
    for (std::size_t n = 1; n <= 5; ++n)
      for (std::size_t r = 1; r <= n; ++r) {
        const auto rho = random_density(n, r, 100 * n + r);
        const RealVector l = rho.spectral().eigenvalues;
        int positive = 0;
        for (Eigen::Index i = 0; i < l.size(); ++i) positive += l(i) > 1e-12;
        CHECK(positive == static_cast<int>(r));
        CHECK(rho.hermitian().trace() == doctest::Approx(1.0).epsilon(1e-13));
      }
    CHECK_THROWS_AS(random_density(3, 0, 1), BadRank);
    CHECK_THROWS_AS(random_density(3, 4, 1), BadRank);
  }

  TEST_CASE("analytic derivatives agree with finite differences") {
    Rng rng(11);
    const auto rho0 = random_density(3, 2, 5);
    const auto h = HermitianMatrix::symmetrized(random_hermitian(rng, 3));
    const auto orbit = family_unitary_orbit(rho0, h);
    const Theta th{0.3};
    CHECK(max_abs(orbit.derivatives(th)[0].matrix() - orbit.finite_difference(th)[0].matrix()) < 1e-8);
    // independent oracle: rho(t) = e^{iHt} rho0 e^{-iHt}
    const ComplexMatrix u = oracle::expm_hermitian(h.matrix(), 0.3);
    CHECK(max_abs(orbit.evaluate(th).matrix() - u * rho0.matrix() * u.adjoint()) < 1e-12);

    RealVector l0(3), slope(3);
    l0 << 0.2, 0.3, 0.5;
    slope << 0.1, 0.05, -0.15;
    const auto path = family_linear_eigenvalue_path(l0, slope, random_unitary(rng, 3));
    CHECK(max_abs(path.derivatives({0.4})[0].matrix() - path.finite_difference({0.4})[0].matrix()) < 1e-8);
    CHECK(path.mode() == DerivativeMode::analytic);
    CHECK(path.without_analytic_derivative().mode() == DerivativeMode::finite_difference);
  }

  TEST_CASE("eigenvalue paths leave the simplex loudly") {
    RealVector l0(2), slope(2);
    l0 << 0.1, 0.9;
    slope << 1.0, -1.0;
    const auto path = family_linear_eigenvalue_path(l0, slope, identity(2));
    CHECK_NOTHROW(path.evaluate({0.5}));
    CHECK_THROWS_AS(path.evaluate({-0.5}), SimplexViolation);
    slope << 1.0, 0.0;
    CHECK_THROWS_AS(family_linear_eigenvalue_path(l0, slope, identity(2)), SimplexViolation);
  }

  TEST_CASE("affine families require traceless directions") {
    const auto rho0 = random_density(2, 2, 3);
    CHECK_THROWS_AS(family_affine(rho0, {HermitianMatrix::symmetrized(identity(2))}), BadFamily);
    CHECK_THROWS_AS(family_affine(rho0, {}), BadFamily);
    const auto fam = family_affine(rho0, {HermitianMatrix::zero(2)});
    CHECK(fam.param_count() == 1);
    CHECK_THROWS_AS(fam.evaluate({0.1, 0.2}), ShapeError);
  }

  TEST_CASE("purification reduces to rho on A for any gauge") {
    Rng rng(8);
    for (int t = 0; t < 10; ++t) {
      const auto rho = random_density(3, 1 + t % 3, 40 + t);
      const ComplexMatrix va = random_unitary(rng, 3), vb = random_unitary(rng, 3);
      const auto p = purify(rho, va, vb);
      CHECK(std::abs(p.vector.norm() - 1.0) < 1e-12);
      CHECK(max_abs(p.reduced_a() - rho.matrix()) < 1e-12);
      // ancilla marginal: (V_B V_A^T) rho^T (V_B V_A^T)^dagger, built by hand
      const ComplexMatrix w = vb * va.transpose();
      CHECK(max_abs(p.reduced_b() - w * rho.matrix().transpose() * w.adjoint()) < 1e-12);
    }
    ComplexMatrix bad = identity(2);
    bad(0, 1) = 0.5;
    CHECK_THROWS_AS(purify(random_density(2, 2, 1), bad, identity(2)), NonUnitaryGauge);
  }

  TEST_CASE("projective differential removes the parallel part") {
    ComplexVector psi(2), d(2);
    psi << 1, 0;
    d << Complex(0, 0.5), 2;
    const ComplexVector p = projective_differential(psi, d);
    CHECK(std::abs(psi.dot(p)) < 1e-15);
    CHECK_THROWS_AS(projective_differential(2.0 * psi, d), NonUnitState);
  }

  TEST_CASE("classical fisher hand value") {
    RealVector l(2), ld(2);
    l << 0.25, 0.75;
    ld << 1.0, -1.0;
    CHECK(classical_fisher(l, ld) == doctest::Approx(1.0 / 0.25 + 1.0 / 0.75));
  }
}
