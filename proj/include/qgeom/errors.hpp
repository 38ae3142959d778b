#pragma once

#include <stdexcept>
#include <string>

namespace qgeom {

/// Base of every error raised by the library. `kind()` is a stable tag used by
/// the CLI and the Python bindings to map failures onto exit codes/exceptions.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define QGEOM_DEFINE_ERROR(Name)                                              \
  class Name : public Error {                                                 \
  public:                                                                     \
    explicit Name(const std::string& what) : Error(#Name, what) {}            \
  };

QGEOM_DEFINE_ERROR(NonHermitianInput)
QGEOM_DEFINE_ERROR(ShapeError)
QGEOM_DEFINE_ERROR(NonUnitaryGauge)
QGEOM_DEFINE_ERROR(NonUnitState)
QGEOM_DEFINE_ERROR(BadRank)
QGEOM_DEFINE_ERROR(SimplexViolation)
QGEOM_DEFINE_ERROR(InvalidDensity)
QGEOM_DEFINE_ERROR(TooManyKraus)
QGEOM_DEFINE_ERROR(NotTracePreserving)
QGEOM_DEFINE_ERROR(SingularState)
QGEOM_DEFINE_ERROR(NormDrift)
QGEOM_DEFINE_ERROR(SizeLimit)
QGEOM_DEFINE_ERROR(BadFamily)
QGEOM_DEFINE_ERROR(FormatError)
QGEOM_DEFINE_ERROR(UnknownSuite)

#undef QGEOM_DEFINE_ERROR

/// Raised by matrix functions when an eigenvalue falls outside the domain of f.
class DomainError : public Error {
public:
  DomainError(double eigenvalue, const std::string& function)
      : Error("DomainError", "eigenvalue " + std::to_string(eigenvalue) +
                                 " outside the domain of " + function),
        eigenvalue_(eigenvalue), function_(function) {}
  double eigenvalue() const noexcept { return eigenvalue_; }
  const std::string& function() const noexcept { return function_; }

private:
  double eigenvalue_;
  std::string function_;
};

}  // namespace qgeom
