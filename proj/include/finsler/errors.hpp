#ifndef FINSLER_ERRORS_HPP
#define FINSLER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace finsler {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument validation (bad tolerances, Randers-type parameters, ...).
struct InvalidArgument : Error {
  using Error::Error;
};

// The quartic 1+(k1+k3)s^2+k2 s^4 (or its b^2 counterpart) is not positive
// somewhere on the requested interval.
struct DenominatorVanishes : Error {
  using Error::Error;
};

struct NonConvergence : Error {
  using Error::Error;
};

struct NotRegularAtZero : Error {
  using Error::Error;
};

struct OutOfRegularRange : Error {
  using Error::Error;
};

struct SolutionLeavesAdmissibleRegion : Error {
  using Error::Error;
};

struct NonPositiveResult : Error {
  using Error::Error;
};

struct TargetOutOfRange : Error {
  using Error::Error;
};

struct DegenerateField : Error {
  using Error::Error;
};

struct OutsideDomain : Error {
  using Error::Error;
};

struct EmptyDomain : Error {
  using Error::Error;
};

struct RegularityViolated : Error {
  using Error::Error;
};

struct ChartExit : Error {
  using Error::Error;
};

}  // namespace finsler

#endif
