#include "qgeom/operator_function.hpp"

#include "qgeom/errors.hpp"

#include <cmath>

namespace qgeom {

std::string to_string(OperatorClass c) {
  switch (c) {
    case OperatorClass::convex: return "operator-convex";
    case OperatorClass::concave: return "operator-concave";
    case OperatorClass::monotone: return "operator-monotone";
    case OperatorClass::untagged: return "untagged";
  }
  return "untagged";
}

ScalarMap OperatorFunction::as_map() const {
  return {name, fn, 0.0, true, true};
}

OperatorFunction make_operator_function(std::string name, std::function<double(double)> fn,
                                        OperatorClass tag, bool normalized) {
  OperatorFunction f{std::move(name), std::move(fn), tag, normalized};
  for (int k = 0; k <= 60; ++k) {
    const double t = std::pow(10.0, -3.0 + 0.1 * k);
    const double y = f(t);
    if (!(y > 0.0) || !std::isfinite(y)) throw DomainError(t, f.name);
  }
  if (normalized && std::abs(f(1.0) - 1.0) > 1e-12)
    throw DomainError(1.0, f.name + " (declared f(1)=1)");
  return f;
}

OperatorFunction arithmetic_fn() {
  return make_operator_function("arithmetic", [](double t) { return 0.5 * (1.0 + t); },
                                OperatorClass::monotone, true);
}

OperatorFunction geometric_fn() {
  return make_operator_function("geometric", [](double t) { return std::sqrt(t); },
                                OperatorClass::monotone, true);
}

OperatorFunction harmonic_fn() {
  return make_operator_function("harmonic", [](double t) { return 2.0 * t / (1.0 + t); },
                                OperatorClass::monotone, true);
}

OperatorFunction wigner_yanase_fn() {
  return make_operator_function("wigner_yanase",
                                [](double t) {
                                  const double h = 0.5 * (1.0 + std::sqrt(t));
                                  return h * h;
                                },
                                OperatorClass::monotone, true);
}

OperatorFunction square_fn() {
  return make_operator_function("square", [](double t) { return t * t; }, OperatorClass::convex, true);
}

OperatorFunction constant_one_fn() {
  return make_operator_function("one", [](double) { return 1.0; }, OperatorClass::untagged, true);
}

std::vector<OperatorFunction> mean_catalogue() {
  return {arithmetic_fn(), geometric_fn(), harmonic_fn(), wigner_yanase_fn()};
}

OperatorFunction operator_function_by_name(const std::string& name) {
  for (auto& f : mean_catalogue())
    if (f.name == name) return f;
  if (name == "square") return square_fn();
  if (name == "one") return constant_one_fn();
  throw FormatError("unknown operator function '" + name + "'");
}

}  // namespace qgeom
