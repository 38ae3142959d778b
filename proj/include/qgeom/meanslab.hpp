#pragma once

// Operator sigma-means, superoperator combinations and empirical checks of
// the monotonicity conditions. All checks are report-only: they count how
// often an ordering fails by more than the 1e-8 slack and never throw on a
// violated inequality.

#include "qgeom/channels.hpp"
#include "qgeom/operator_function.hpp"
#include "qgeom/opspace.hpp"
#include "qgeom/states.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qgeom {

inline constexpr double kOrderSlack = 1e-8;
/// Largest system dimension for which n^4-entry superoperator means are formed.
inline constexpr std::size_t kSuperOperatorDimLimit = 8;

/// Ordering tested by a check: `leq` means lhs <= rhs, `geq` means lhs >= rhs.
enum class Direction { geq, leq };
std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);

/// A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}; A positive definite, B PSD.
HermitianMatrix sigma_mean(const HermitianMatrix& a, const HermitianMatrix& b, const OperatorFunction& f);

/// sigma_mean restricted to the support of A (used when A is singular, e.g.
/// after compression by a projector). B must live on the same support.
HermitianMatrix sigma_mean_on_support(const HermitianMatrix& a, const HermitianMatrix& b,
                                      const OperatorFunction& f, double rel_tol = 1e-10);

using MeanFunction = std::function<HermitianMatrix(const HermitianMatrix&, const HermitianMatrix&)>;
/// f(t) := I sigma (t I), read off the (0,0) entry.
double recover_scalar(const MeanFunction& mean, double t, std::size_t dim = 2);

struct MeanCheckReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  /// Minimum over trials of the signed margin; negative values mean the
  /// ordering was violated by that amount.
  double worst_margin = 0.0;
  std::uint64_t seed = 0;
  std::string function;
  Direction direction = Direction::leq;
};

/// Signed margin of lhs `direction` rhs: min eig(rhs - lhs) for leq,
/// min eig(lhs - rhs) for geq.
double order_margin(const ComplexMatrix& lhs, const ComplexMatrix& rhs, Direction direction);

/// Margin of C^dagger (A sigma B) C  `direction`  (C^dagger A C) sigma (C^dagger B C).
double transformer_margin(const HermitianMatrix& a, const HermitianMatrix& b, const ComplexMatrix& c,
                          const OperatorFunction& f, Direction direction);
MeanCheckReport check_transformer(const HermitianMatrix& a, const HermitianMatrix& b, const ComplexMatrix& c,
                                  const OperatorFunction& f, Direction direction);

enum class ContractionKind { invertible, rank_deficient, projector, mixed };

/// Random trials over positive definite A, B (dim x dim) and contractions C.
/// `mixed` cycles through invertible, rank-deficient and projector draws.
MeanCheckReport check_transformer(const OperatorFunction& f, Direction direction, std::size_t trials,
                                  std::uint64_t seed, std::size_t dim = 3,
                                  ContractionKind kind = ContractionKind::mixed);

/// Samples A <= A', B <= B' (random PSD increments) and tests
/// (A sigma B) `direction` (A' sigma B').
MeanCheckReport check_mean_monotone(const OperatorFunction& f, Direction direction, std::size_t trials,
                                    std::uint64_t seed, std::size_t dim = 3);

struct CombinedSuperOperator {
  SuperOperator k;
  /// K1^2 tau K2^2 when a companion function was supplied.
  std::optional<SuperOperator> k_squared;
  /// max |K^2 - K1^2 tau K2^2| when k_squared is present.
  std::optional<double> square_deviation;
};

/// K = K1 sigma_f K2 on the n^2 x n^2 matrices (both positive definite).
CombinedSuperOperator combine_superops(const SuperOperator& k1, const SuperOperator& k2,
                                       const OperatorFunction& f,
                                       const std::optional<OperatorFunction>& tau = std::nullopt);

/// Superoperator F(L_rho, R_rho) built by joint spectral calculus:
/// eigenvalue F(l_k, l_q) on the common eigenvector |u_k> kron conj|u_q>.
SuperOperator joint_superop(const DensityMatrix& rho, const std::function<double(double, double)>& fn);
/// L_{sqrt rho} + R_{sqrt rho}; its inverse maps d rho to d sqrt(rho).
SuperOperator sqrt_derivative_superop(const DensityMatrix& rho);
/// R_rho f(L_rho R_rho^{-1}) (Petz operator).
SuperOperator petz_superop(const OperatorFunction& f, const DensityMatrix& rho);

using SuperOpBuilder = std::function<SuperOperator(const DensityMatrix&)>;

struct ConditionMargins {
  /// min eig(K^2_{E(rho)} - E K^2_rho E^dagger)
  double squared = 0.0;
  /// min eig(E^dagger K^{-1}_{E(rho)} E - K^{-1}_rho)
  double inverse_geq = 0.0;
  /// min eig(K^{-1}_rho - E^dagger K^{-1}_{E(rho)} E)
  double inverse_leq = 0.0;
};

ConditionMargins monotonicity_condition_margins(const SuperOpBuilder& builder, const KrausChannel& ch,
                                                const DensityMatrix& rho);
/// Tests E K^2_rho E^dagger <= K^2_{E(rho)} (direction leq) or its reverse (geq)
/// for one (channel, state) pair; trials = 1.
MeanCheckReport check_monotonicity_condition(const SuperOpBuilder& builder, const KrausChannel& ch,
                                             const DensityMatrix& rho, Direction direction,
                                             const std::string& name = "custom");
/// Same test over random full-rank states and random channels.
MeanCheckReport scan_monotonicity_condition(const SuperOpBuilder& builder, const std::string& name,
                                            std::size_t dim, std::size_t kraus_count, std::size_t trials,
                                            std::uint64_t seed, Direction direction);

struct LogSqrtRelation {
  SuperOperator k_sqrt;  // sqrt(g(L^2 R^-2) R^2), L/R from sqrt(rho), joint spectral calculus
  SuperOperator k_log;   // g(L R^-1) R, L/R from rho, generic n^2-dimensional calculus
  std::vector<double> fisher_sqrt;  // <K_s^-1 A, K_s^-1 A>
  std::vector<double> fisher_log;   // <A, K_l^-1 A>
  double max_deviation = 0.0;
};

LogSqrtRelation sqrt_from_log_superop(const OperatorFunction& g, const DensityMatrix& rho,
                                      const std::vector<HermitianMatrix>& tangents);

struct SquarePair {
  std::string f;
  std::string g;
  /// max over the grid of |f(s)^2 - g(s^2)| / max(1, g(s^2)); zero means K = f(P T^-1) T and
  /// K^2 = g(P^2 T^-2) T^2 hold simultaneously for commuting P, T.
  double deviation = 0.0;
};

/// Evaluates every (f, g) pair of `functions` on a log grid over [1e-2, 1e2].
std::vector<SquarePair> search_square_pairs(const std::vector<OperatorFunction>& functions);

}  // namespace qgeom
