#include "gammatrace/error.hpp"

namespace gammatrace {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kCapExceeded: return "CapExceeded";
    case ErrorKind::kNotPrime: return "NotPrime";
    case ErrorKind::kLevelMissing: return "LevelMissing";
    case ErrorKind::kDivisionByZero: return "DivisionByZero";
    case ErrorKind::kNotSigmaPositive: return "NotSigmaPositive";
    case ErrorKind::kNotWStable: return "NotWStable";
    case ErrorKind::kNotSurjective: return "NotSurjective";
    case ErrorKind::kTowerTooShallow: return "TowerTooShallow";
    case ErrorKind::kInvalidTwistedPoint: return "InvalidTwistedPoint";
    case ErrorKind::kNotConstant: return "NotConstant";
    case ErrorKind::kNotCyclic: return "NotCyclic";
    case ErrorKind::kNotNormalized: return "NotNormalized";
    case ErrorKind::kSolverSingular: return "SolverSingular";
    case ErrorKind::kNotTopStratum: return "NotTopStratum";
    case ErrorKind::kNotComputableLocus: return "NotComputableLocus";
    case ErrorKind::kSystemInconsistent: return "SystemInconsistent";
    case ErrorKind::kRankDeficient: return "RankDeficient";
    case ErrorKind::kVanishingFailed: return "VanishingFailed";
    case ErrorKind::kConfigInvalid: return "ConfigInvalid";
    case ErrorKind::kOverflow: return "Overflow";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace gammatrace
