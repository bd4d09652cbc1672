#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gammatrace/error.hpp"
#include "gammatrace/suites.hpp"

using namespace gammatrace;

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int run(const std::string& config_path, const std::vector<std::string>& suites, const std::string& out,
        unsigned jobs, const std::optional<std::uint64_t>& seed) {
  std::ifstream in(config_path);
  if (!in) throw Error(ErrorKind::kConfigInvalid, "cannot read config file " + config_path);
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig cfg = parse_config(buf.str());
  if (!suites.empty()) cfg.suites = suites;
  if (seed) cfg.seed = *seed;
  validate_config(cfg);

  const std::vector<SuiteReport> reports = run_suites(cfg, jobs);
  bool pass = true;
  for (const auto& r : reports) {
    std::size_t failed = 0;
    for (const auto& c : r.checks) failed += c.pass ? 0 : 1;
    std::cout << (r.pass() ? "PASS " : "FAIL ") << r.suite << " (" << r.checks.size() - failed << "/" << r.checks.size()
              << " checks)\n";
    for (const auto& c : r.checks)
      if (!c.pass) std::cout << "  fail " << c.name << ": " << c.detail << "\n";
    pass = pass && r.pass();
  }
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw Error(ErrorKind::kConfigInvalid, "cannot write " + out);
    os << (ends_with(out, ".csv") ? to_csv(reports) : to_json(reports));
  }
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification harness for torus gamma functions and their induction"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run verification suites from a JSON config");
  std::string config_path, out;
  std::vector<std::string> suites;
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
  run_cmd->add_option("--config", config_path, "Config file")->required();
  run_cmd->add_option("--suite", suites, "Suite to run (repeatable); overrides the config");
  run_cmd->add_option("--out", out, "Report path; .csv writes CSV, anything else JSON");
  run_cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", seed, "Sampling seed");

  app.add_subcommand("list-suites", "List suite names");
  auto* explain_cmd = app.add_subcommand("explain", "Print what a suite certifies");
  std::string explain_name;
  explain_cmd->add_option("suite", explain_name, "Suite name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("list-suites")) {
      for (const auto& s : suite_names()) std::cout << s << "\n";
      return 0;
    }
    if (app.got_subcommand("explain")) {
      const std::string statement = suite_statement(explain_name);
      std::cout << explain_name << ": " << statement << "\n";
      return 0;
    }
    return run(config_path, suites, out, jobs, seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
