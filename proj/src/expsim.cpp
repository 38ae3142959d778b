#include "qgeom/expsim.hpp"

#include "qgeom/errors.hpp"
#include "qgeom/metrics.hpp"
#include "qgeom/rng.hpp"

#include <algorithm>
#include <cmath>

namespace qgeom {

namespace {

void require_unit(const ComplexVector& psi, const char* who) {
  if (std::abs(psi.norm() - 1.0) > 1e-9) throw NonUnitState(std::string(who) + ": state vector is not normalized");
}

struct Outcomes {
  std::vector<double> values;
  std::vector<double> cumulative;
};

Outcomes bin_outcomes(const HermitianMatrix& h, const ComplexVector& psi) {
  const SpectralDecomposition s = hermitian_eig(h);
  const ComplexVector amp = s.eigenvectors.adjoint() * psi;
  Outcomes o;
  std::vector<double> probs;
  for (Eigen::Index k = 0; k < amp.size(); ++k) {
    const double x = s.eigenvalues(k);
    const double p = std::norm(amp(k));
    if (!o.values.empty() && x - o.values.back() <= kOutcomeMergeTol) {
      probs.back() += p;
    } else {
      o.values.push_back(x);
      probs.push_back(p);
    }
  }
  double total = 0.0;
  for (double p : probs) total += p;
  double acc = 0.0;
  for (double p : probs) {
    acc += p / total;
    o.cumulative.push_back(acc);
  }
  o.cumulative.back() = 1.0;
  return o;
}

}  // namespace

GeneratorSolution generator_commutator(const DensityMatrix& rho, const HermitianMatrix& h_a) {
  const auto n = rho.dim();
  if (h_a.dim() != n) throw ShapeError("generator_commutator: H_A and rho differ in dimension");
  const ComplexMatrix id = identity(n);
  const ComplexMatrix h = kron(h_a.matrix(), id) - kron(id, h_a.matrix().transpose());
  GeneratorSolution sol{HermitianMatrix::symmetrized(h), 0.0, "commutator"};
  const ComplexMatrix sq = rho.sqrt().matrix();
  const auto drho = HermitianMatrix::symmetrized(Complex(0, 1) * commutator(h_a.matrix(), rho.matrix()));
  const ComplexMatrix c = sqrt_derivative(rho, drho).components[0];
  sol.residual = (Complex(0, 1) * (sol.h_ab.matrix() * vec(sq)) - vec(c)).norm();
  return sol;
}

GeneratorSolution generator_rank2(const ComplexVector& psi, const ComplexVector& dpsi) {
  if (psi.size() != dpsi.size()) throw ShapeError("generator_rank2: psi and dpsi differ in length");
  require_unit(psi, "generator_rank2");
  const Complex overlap = psi.dot(dpsi);
  if (std::abs(overlap.real()) > 1e-9)
    throw NormDrift("generator_rank2: Re<psi|dpsi> = " + std::to_string(overlap.real()) +
                    " (family does not preserve the norm)");
  const Complex i(0, 1);
  const ComplexMatrix h = -i * (dpsi * psi.adjoint() - psi * dpsi.adjoint()) - overlap.imag() * (psi * psi.adjoint());
  GeneratorSolution sol{HermitianMatrix::symmetrized(h), 0.0, "rank2"};
  sol.residual = (i * (sol.h_ab.matrix() * psi) - dpsi).norm();
  return sol;
}

double exact_variance(const HermitianMatrix& h, const ComplexVector& psi) {
  if (static_cast<std::size_t>(psi.size()) != h.dim()) throw ShapeError("exact_variance: dimension mismatch");
  const ComplexVector hp = h.matrix() * psi;
  const double mean = psi.dot(hp).real();
  return std::max(0.0, hp.squaredNorm() - mean * mean);
}

EstimateRecord simulate_variance(const HermitianMatrix& h, const ComplexVector& psi, std::uint64_t shots,
                                 std::uint64_t seed, const std::string& construction) {
  if (shots < 1) throw ShapeError("simulate_variance: shots must be at least 1");
  if (static_cast<std::size_t>(psi.size()) != h.dim()) throw ShapeError("simulate_variance: dimension mismatch");
  require_unit(psi, "simulate_variance");
  EstimateRecord r;
  r.shots = shots;
  r.seed = seed;
  r.construction = construction;
  r.exact_variance = exact_variance(h, psi);

  const Outcomes o = bin_outcomes(h, psi);
  std::vector<std::uint64_t> counts(o.values.size(), 0);
  const std::uint64_t blocks = (shots + kShotBlock - 1) / kShotBlock;
  for (std::uint64_t b = 0; b < blocks; ++b) {
    Rng rng(stream_seed(seed, b));
    const std::uint64_t n = std::min(kShotBlock, shots - b * kShotBlock);
    for (std::uint64_t k = 0; k < n; ++k) {
      const double u = rng.uniform();
      const auto it = std::upper_bound(o.cumulative.begin(), o.cumulative.end(), u);
      const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - o.cumulative.begin()), counts.size() - 1);
      ++counts[idx];
    }
  }

  if (shots == 1) {
    r.warnings.push_back("degenerate sample: one shot gives no variance information");
    return r;
  }
  const auto total = static_cast<double>(shots);
  double mean = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) mean += static_cast<double>(counts[k]) * o.values[k];
  mean /= total;
  double m2 = 0.0, m4 = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double d2 = (o.values[k] - mean) * (o.values[k] - mean);
    m2 += static_cast<double>(counts[k]) * d2;
    m4 += static_cast<double>(counts[k]) * d2 * d2;
  }
  r.sample_variance = m2 / (total - 1.0);
  const double mu2 = m2 / total;
  const double mu4 = m4 / total;
  r.stderr_estimate = std::sqrt(std::max(0.0, mu4 - mu2 * mu2) / total);
  return r;
}

}  // namespace qgeom
