#include "oracles.hpp"

#include "qgeom/errors.hpp"
#include "qgeom/opspace.hpp"
#include "qgeom/rng.hpp"

#include <doctest.h>

using namespace qgeom;

TEST_SUITE("opspace") {
  TEST_CASE("pauli x has eigenvalues -1 and 1") {
    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    const auto s = hermitian_eig(x);
    CHECK(s.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(s.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(max_abs(s.reconstruct() - x) < 1e-14);
  }

  TEST_CASE("jacobi eigenvalues match the reference solver") {
    for (std::size_t n = 1; n <= 8; ++n) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const ComplexMatrix h = oracle::hermitian(seed * 31 + n, static_cast<Eigen::Index>(n));
        const auto s = hermitian_eig(h);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(h);
        const double scale = std::max(1.0, h.norm());
        CHECK((s.eigenvalues - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12 * scale);
        CHECK(max_abs(s.reconstruct() - h) < 1e-12 * scale);
        CHECK(unitarity_residual(s.eigenvectors) < 1e-12);
        for (Eigen::Index i = 1; i < s.eigenvalues.size(); ++i) CHECK(s.eigenvalues(i - 1) <= s.eigenvalues(i));
      }
    }
  }

  TEST_CASE("degenerate spectra are handled") {
    const auto s = hermitian_eig(identity(4) * 0.25);
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(s.eigenvalues(i) == doctest::Approx(0.25).epsilon(1e-15));
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(0, 1) = Complex(0, 1);
    m(1, 0) = Complex(0, -1);
    const auto t = hermitian_eig(m);
    CHECK(t.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(t.eigenvalues(1) == doctest::Approx(0.0));
    CHECK(t.eigenvalues(2) == doctest::Approx(1.0));
  }

  TEST_CASE("non-hermitian input is rejected") {
    ComplexMatrix m(2, 2);
    m << 1, 2, 0, 1;
    CHECK_THROWS_AS(hermitian_eig(m), NonHermitianInput);
    CHECK_THROWS_AS(HermitianMatrix{m}, NonHermitianInput);
    CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix::Zero(2, 3)), ShapeError);
    ComplexMatrix nearly = identity(2);
    nearly(0, 1) = 1e-12;
    CHECK_NOTHROW(HermitianMatrix{nearly});
    CHECK(hermiticity_residual(HermitianMatrix(nearly).matrix()) == 0.0);
  }

  TEST_CASE("square root of a diagonal state") {
    RealVector d(2);
    d << 0.25, 0.75;
    const auto r = matrix_function(HermitianMatrix::diagonal(d), sqrt_map());
    CHECK(r.matrix()(0, 0).real() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.matrix()(1, 1).real() == doctest::Approx(0.8660254037844386).epsilon(1e-15));
  }

  TEST_CASE("matrix square root squares back and matches the reference") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(seed);
      const auto n = 2 + seed % 5;
      const ComplexMatrix g = rng.gaussian_matrix(n, n);
      const ComplexMatrix psd = g * g.adjoint();
      const auto r = matrix_function(HermitianMatrix(psd), sqrt_map());
      CHECK(max_abs(r.matrix() * r.matrix() - psd) < 1e-11 * psd.norm());
      CHECK(max_abs(r.matrix() - oracle::sqrtm(psd)) < 1e-11 * std::max(1.0, psd.norm()));
    }
  }

  TEST_CASE("matrix functions respect their domain") {
    RealVector d(2);
    d << -0.5, 1.0;
    CHECK_THROWS_AS(matrix_function(HermitianMatrix::diagonal(d), sqrt_map()), DomainError);
    try {
      matrix_function(HermitianMatrix::diagonal(d), sqrt_map());
    } catch (const DomainError& e) {
      CHECK(e.eigenvalue() == doctest::Approx(-0.5));
    }
    d << -1e-13, 1.0;
    const auto r = matrix_function(HermitianMatrix::diagonal(d), sqrt_map());
    CHECK(r.matrix()(0, 0).real() == 0.0);
    d << 0.0, 4.0;
    CHECK_THROWS_AS(matrix_function(HermitianMatrix::diagonal(d), inverse_map()), DomainError);
    CHECK(matrix_function(HermitianMatrix::diagonal(d), power_map(1.5)).matrix()(1, 1).real() ==
          doctest::Approx(8.0));
  }

  TEST_CASE("vec is row-major and intertwines kron") {
    ComplexMatrix m(2, 2);
    m << 1, 2, 3, 4;
    const ComplexVector v = vec(m);
    CHECK(v(1) == Complex(2, 0));
    CHECK(v(2) == Complex(3, 0));
    CHECK(max_abs(unvec(v, 2) - m) == 0.0);
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
      const ComplexMatrix x = rng.gaussian_matrix(3, 3), y = rng.gaussian_matrix(3, 3), z = rng.gaussian_matrix(3, 3);
      CHECK((vec(x * z * y.transpose()) - kron(x, y) * vec(z)).norm() < 1e-12);
      CHECK((left_super(x).apply(z) - x * z).norm() < 1e-12);
      CHECK((right_super(x).apply(z) - z * x).norm() < 1e-12);
      CHECK((vec(z) - oracle::vec(z)).norm() == 0.0);
    }
    CHECK_THROWS_AS(unvec(ComplexVector::Zero(5), 2), ShapeError);
  }

  TEST_CASE("superoperator adjoint is the Hilbert-Schmidt adjoint") {
    Rng rng(9);
    const SuperOperator s(rng.gaussian_matrix(9, 9));
    const ComplexMatrix a = rng.gaussian_matrix(3, 3), b = rng.gaussian_matrix(3, 3);
    const Complex lhs = (a.adjoint() * s.apply(b)).trace();
    const Complex rhs = (s.adjoint().apply(a).adjoint() * b).trace();
    CHECK(std::abs(lhs - rhs) < 1e-12);
    CHECK(max_abs((s * SuperOperator::identity(3)).matrix() - s.matrix()) == 0.0);
    CHECK_THROWS_AS(SuperOperator(ComplexMatrix::Zero(5, 5)), ShapeError);
  }

  TEST_CASE("partial traces of product operators") {
    Rng rng(2);
    const ComplexMatrix a = rng.gaussian_matrix(2, 2), b = rng.gaussian_matrix(3, 3);
    const ComplexMatrix ab = kron(a, b);
    CHECK(max_abs(partial_trace_second(ab, 2, 3) - a * b.trace()) < 1e-12);
    CHECK(max_abs(partial_trace_first(ab, 2, 3) - b * a.trace()) < 1e-12);
  }
}
