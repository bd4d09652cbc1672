#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gammatrace/cyclotomic.hpp"

namespace gammatrace {

struct CheckRecord {
  std::string name;
  bool pass = false;
  std::optional<CycNum> value;  // exact value when the check produces one
  std::uint64_t cases = 0;      // number of instances examined
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::map<std::string, std::string> params;
  std::vector<CheckRecord> checks;

  bool pass() const;
  void add(CheckRecord r) { checks.push_back(std::move(r)); }
  /// Appends every check of `other`, prefixing names with `prefix/`.
  void absorb(const SuiteReport& other, const std::string& prefix);
};

/// Canonical JSON: sorted keys, two-space indent, trailing newline.
std::string to_json(const std::vector<SuiteReport>& reports);
/// One row per check: suite, check, status, cases, conductor, coefficients, detail.
std::string to_csv(const std::vector<SuiteReport>& reports);

}  // namespace gammatrace
