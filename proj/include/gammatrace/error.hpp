#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gammatrace {

enum class ErrorKind {
  kInvalidArgument,
  kCapExceeded,
  kNotPrime,
  kLevelMissing,
  kDivisionByZero,
  kNotSigmaPositive,
  kNotWStable,
  kNotSurjective,
  kTowerTooShallow,
  kInvalidTwistedPoint,
  kNotConstant,
  kNotCyclic,
  kNotNormalized,
  kSolverSingular,
  kNotTopStratum,
  kNotComputableLocus,
  kSystemInconsistent,
  kRankDeficient,
  kVanishingFailed,
  kConfigInvalid,
  kOverflow,
};

std::string_view to_string(ErrorKind kind);

/// Every failure in the library is reported through this type; `kind()` lets
/// callers (and the CLI exit-code logic) branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gammatrace
