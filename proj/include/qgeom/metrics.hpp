#pragma once

// Square-root derivatives, the mixed-state Fubini-Study quantum geometric
// tensor, alpha-metrics, dynamical phases, evolution-specific forms and the
// SLD / Petz baselines.
//
// Conventions (no global normalization is imposed):
//  * For rank-one families the mixed-state metric equals twice the pure-state
//    Fubini-Study value, because d sqrt(rho) = d rho when rho is a projector.
//  * For commuting families gamma is one quarter of the classical Fisher
//    information of the eigenvalue path.

#include "qgeom/operator_function.hpp"
#include "qgeom/opspace.hpp"
#include "qgeom/states.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qgeom {

inline constexpr double kSupportTol = 1e-8;
inline constexpr double kSingularTol = 1e-10;

/// Non-fatal: an eigenmode pair (i, j) of rho excluded from the support carried
/// a derivative component larger than 1e-8.
struct RankDeficiencyWarning {
  std::size_t param = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  double magnitude = 0.0;
  std::string message() const;
};

/// C^i = d sqrt(rho) / d theta_i, one matrix per parameter.
struct SqrtDerivative {
  std::vector<ComplexMatrix> components;
  /// support(i, j) is true when the eigenmode pair (i, j) was retained.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> support;
  std::vector<RankDeficiencyWarning> warnings;
};

/// Solves sqrt(rho) C + C sqrt(rho) = d rho in the eigenbasis:
/// C_ij = drho_ij / (sqrt(l_i) + sqrt(l_j)) for pairs with denominator > 1e-8.
SqrtDerivative sqrt_derivative(const DensityMatrix& rho, const HermitianMatrix& drho);
SqrtDerivative sqrt_derivative(const DensityMatrix& rho, const std::vector<HermitianMatrix>& drho);

/// C_ij = drho_ij / (f(sqrt(l_i / l_j)) sqrt(l_j)). The arithmetic function
/// (1+t)/2 gives exactly twice sqrt_derivative. Pairs with l_j <= 0 or a
/// denominator below 1e-8 are excluded.
SqrtDerivative generalized_sqrt_derivative(const DensityMatrix& rho, const std::vector<HermitianMatrix>& drho,
                                           const OperatorFunction& f);
SqrtDerivative generalized_sqrt_derivative(const DensityMatrix& rho, const HermitianMatrix& drho,
                                           const OperatorFunction& f);

/// g = gamma + i sigma.
struct QGTensor {
  ComplexMatrix g;
  RealMatrix gamma;
  RealMatrix sigma;
  std::vector<RankDeficiencyWarning> warnings;

  static QGTensor from_complex(const ComplexMatrix& g, std::vector<RankDeficiencyWarning> warnings = {});
  std::size_t params() const { return static_cast<std::size_t>(g.rows()); }
  /// sum gamma^{ij} dtheta_i dtheta_j
  double ds2(const std::vector<double>& dtheta) const;
};

/// g^{ij} = Tr(C^i^dagger C^j) - Tr(sqrt(rho) C^i^dagger) Tr(sqrt(rho) C^j)
QGTensor fs_qgt(const DensityMatrix& rho, const SqrtDerivative& c);
QGTensor fs_qgt(const StateFamily& family, const Theta& theta);

/// i Tr(C^i sqrt(rho)) per parameter.
std::vector<Complex> dynamical_phase(const DensityMatrix& rho, const SqrtDerivative& c);

/// -Tr([sqrt(rho), H]^2)
double metric_unitary(const DensityMatrix& rho, const HermitianMatrix& h);

/// Kraus-path form with D_i = Adot_i sqrt(rho) A_i^dagger + A_i sqrt(rho) Adot_i^dagger:
/// sum_ij Tr(D_i D_j) - |sum_i Tr(sqrt(rho) D_i)|^2.
double metric_cptp_kraus(const DensityMatrix& rho, const std::vector<ComplexMatrix>& kraus,
                         const std::vector<ComplexMatrix>& kraus_dot);

/// 2 Tr(<nu|H^2|nu> rho - <nu|H|nu> sqrt(rho) <nu|H|nu> sqrt(rho)), system kron env ordering.
double metric_cptp_dilation(const DensityMatrix& rho, const HermitianMatrix& h_ab, const ComplexVector& nu);

/// G^{cd}(alpha). Throws SingularState when alpha > 1 and min eigenvalue < 1e-10.
QGTensor alpha_qgt_G(const DensityMatrix& rho, const SqrtDerivative& c, double alpha);
QGTensor alpha_qgt_G(const StateFamily& family, const Theta& theta, double alpha);
/// G~^{cd}(alpha), the projected generalization.
QGTensor alpha_qgt_Gtilde(const DensityMatrix& rho, const SqrtDerivative& c, double alpha);
QGTensor alpha_qgt_Gtilde(const StateFamily& family, const Theta& theta, double alpha);
/// i Tr(rho^{alpha - 1/2} C^i)
std::vector<Complex> alpha_dynamical_phase(const DensityMatrix& rho, const SqrtDerivative& c, double alpha);
/// Integer alpha in {2, ..., n}: the range with an explicit basis-overlap construction.
bool alpha_has_basis_construction(double alpha, std::size_t dim);

struct SldFisher {
  RealMatrix fisher;
  std::vector<RankDeficiencyWarning> warnings;
};
/// F^{ij} = sum_{kl, l_k + l_l > 1e-12} 2 Re(drho^i_kl drho^j_lk) / (l_k + l_l)
SldFisher sld_qfi(const DensityMatrix& rho, const std::vector<HermitianMatrix>& drho);
SldFisher sld_qfi(const StateFamily& family, const Theta& theta);

/// sum_kl conj(A_kl) B_kl / (l_l f(l_k / l_l)) in the eigenbasis of rho.
Complex petz_metric(const OperatorFunction& f, const DensityMatrix& rho, const HermitianMatrix& a,
                    const HermitianMatrix& b);

struct MetricReport {
  Theta theta;
  QGTensor tensor;
  std::vector<Complex> dyn_phase;
  std::optional<double> ds2;
  /// 1/gamma^{ii} for one parameter, (gamma^{-1})^{ii} otherwise; +inf when
  /// the information vanishes.
  std::vector<double> cr_bound;
  std::vector<std::string> warnings;
};

MetricReport metric_report(const StateFamily& family, const Theta& theta,
                           const std::optional<std::vector<double>>& dtheta = std::nullopt);

}  // namespace qgeom
