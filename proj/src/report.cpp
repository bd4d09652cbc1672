#include "gammatrace/report.hpp"

#include <json.hpp>
#include <sstream>

namespace gammatrace {

bool SuiteReport::pass() const {
  if (checks.empty()) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void SuiteReport::absorb(const SuiteReport& other, const std::string& prefix) {
  for (auto c : other.checks) {
    c.name = prefix + "/" + c.name;
    checks.push_back(std::move(c));
  }
}

namespace {

nlohmann::json value_json(const CycNum& v) {
  nlohmann::json j;
  j["conductor"] = v.conductor();
  j["coefficients"] = v.coefficient_strings();
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_json(const std::vector<SuiteReport>& reports) {
  nlohmann::json root;
  root["pass"] = true;
  root["suites"] = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json s;
    s["suite"] = r.suite;
    s["params"] = r.params;
    s["pass"] = r.pass();
    s["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks) {
      nlohmann::json cj;
      cj["name"] = c.name;
      cj["status"] = c.pass ? "pass" : "fail";
      cj["cases"] = c.cases;
      cj["detail"] = c.detail;
      cj["value"] = c.value ? value_json(*c.value) : nlohmann::json();
      s["checks"].push_back(std::move(cj));
    }
    if (!r.pass()) root["pass"] = false;
    root["suites"].push_back(std::move(s));
  }
  return root.dump(2) + "\n";
}

std::string to_csv(const std::vector<SuiteReport>& reports) {
  std::ostringstream os;
  os << "suite,check,status,cases,conductor,coefficients,detail\n";
  for (const auto& r : reports)
    for (const auto& c : r.checks) {
      std::string coeffs, conductor;
      if (c.value) {
        conductor = std::to_string(c.value->conductor());
        for (const auto& s : c.value->coefficient_strings()) coeffs += (coeffs.empty() ? "" : " ") + s;
      }
      os << csv_field(r.suite) << ',' << csv_field(c.name) << ',' << (c.pass ? "pass" : "fail") << ',' << c.cases
         << ',' << conductor << ',' << csv_field(coeffs) << ',' << csv_field(c.detail) << '\n';
    }
  return os.str();
}

}  // namespace gammatrace
