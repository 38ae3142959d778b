#pragma once

#include "qgeom/opspace.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qgeom {

/// Declared operator class of a scalar function. Tags are metadata only; the
/// meanslab checks verify them empirically.
enum class OperatorClass { convex, concave, monotone, untagged };

std::string to_string(OperatorClass c);

/// Positive scalar function on (0, inf) used for means, Petz metrics and
/// generalized square-root derivatives.
struct OperatorFunction {
  std::string name;
  std::function<double(double)> fn;
  OperatorClass tag = OperatorClass::untagged;
  bool normalized = false;  // declares f(1) = 1

  double operator()(double t) const { return fn(t); }
  /// Spectral-calculus view on [0, inf) with the usual -1e-12 clamp.
  ScalarMap as_map() const;
};

/// Builds an OperatorFunction and checks positivity on a log grid over
/// [1e-3, 1e3] and, if `normalized`, that |f(1) - 1| <= 1e-12.
OperatorFunction make_operator_function(std::string name, std::function<double(double)> fn,
                                        OperatorClass tag, bool normalized);

OperatorFunction arithmetic_fn();     // (1 + t) / 2
OperatorFunction geometric_fn();      // sqrt(t)
OperatorFunction harmonic_fn();       // 2t / (1 + t)
OperatorFunction wigner_yanase_fn();  // ((1 + sqrt t) / 2)^2
OperatorFunction square_fn();         // t^2
OperatorFunction constant_one_fn();   // 1

/// The four normalized operator-monotone functions used by the mean checks.
std::vector<OperatorFunction> mean_catalogue();
/// Lookup by name over the catalogue plus square and one; throws FormatError.
OperatorFunction operator_function_by_name(const std::string& name);

}  // namespace qgeom
