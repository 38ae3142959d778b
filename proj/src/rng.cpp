#include "qgeom/rng.hpp"

#include <cmath>
#include <numbers>

namespace qgeom {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ (index * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

ComplexMatrix Rng::gaussian_matrix(std::size_t rows, std::size_t cols) {
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  // Column-major fill order is part of the determinism contract.
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = complex_normal();
  return g;
}

ComplexMatrix random_hermitian(Rng& rng, std::size_t n) {
  const ComplexMatrix g = rng.gaussian_matrix(n, n);
  return 0.5 * (g + g.adjoint());
}

std::size_t gram_schmidt(ComplexMatrix& m, double tol) {
  std::size_t rank = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double original = m.col(j).norm();
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index k = 0; k < j; ++k) {
        const Complex proj = m.col(k).dot(m.col(j));
        m.col(j) -= proj * m.col(k);
      }
    const double nrm = m.col(j).norm();
    if (nrm <= tol * std::max(1.0, original)) {
      m.col(j).setZero();
      continue;
    }
    m.col(j) /= nrm;
    ++rank;
  }
  return rank;
}

ComplexMatrix random_unitary(Rng& rng, std::size_t n) {
  ComplexMatrix g = rng.gaussian_matrix(n, n);
  // Gram-Schmidt on a Ginibre matrix yields Q with R having positive diagonal,
  // which is exactly the Haar measure.
  gram_schmidt(g);
  return g;
}

ComplexVector random_unit_vector(Rng& rng, std::size_t n) {
  ComplexVector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

}  // namespace qgeom
