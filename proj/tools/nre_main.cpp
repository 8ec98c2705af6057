#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nre/error.hpp"
#include "nre/runner.hpp"

namespace {

void print_summary(const nre::RunReport& report) {
  for (const auto& s : report.systems) {
    std::cout << s.report.label << ": T=" << s.report.measured_transient << " P=" << s.report.measured_period;
    if (s.report.predicted_period) std::cout << (s.report.matches() ? " (matches prediction)" : " (MISMATCH)");
    std::cout << '\n';
  }
  std::size_t passed = 0;
  for (const auto& c : report.claims) {
    if (c.passed) {
      ++passed;
      continue;
    }
    std::cout << "FAIL " << nre::claim_info(c.claim).id;
    if (c.m) std::cout << " m=" << *c.m;
    if (c.d) std::cout << " d=" << *c.d;
    std::cout << ": " << c.detail << '\n';
  }
  if (!report.claims.empty()) std::cout << passed << '/' << report.claims.size() << " claims passed\n";
  std::cout << "report written to " << (report.config.out / "report.json").string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact simulator and claim checker for neuronal recurrence systems"};
  app.set_version_flag("--version", std::string(nre::kToolVersion));

  std::string config_path;
  std::optional<int> m;
  std::vector<int> d;
  std::string mode;
  std::optional<std::uint64_t> budget;
  std::vector<std::string> claims;
  std::string out;
  bool emit_traces = false;
  std::optional<std::uint64_t> seed;
  bool long_tier = false;
  std::string system;
  std::optional<int> lane;
  std::optional<std::uint64_t> steps;
  std::string trace_format;
  std::optional<unsigned> threads;
  bool list_claims = false;

  app.add_option("--config", config_path, "JSON config file; flags override its fields")->check(CLI::ExistingFile);
  app.add_option("--m", m, "scale parameter m");
  app.add_option("--d", d, "perturbation index d (repeatable)");
  app.add_option("--mode", mode, "construct | simulate | cycle | verify | chain | basin");
  app.add_option("--budget", budget, "step budget for cycle detection");
  app.add_option("--claims", claims, "claim ids to run (default: whole suite)")->delimiter(',');
  app.add_option("--out", out, "output directory");
  app.add_flag("--emit-traces", emit_traces, "write traces next to the report");
  app.add_option("--seed", seed, "seed for sampled checks");
  app.add_flag("--long", long_tier, "add m = 16 and m = 21 to the claim grid");
  app.add_option("--system", system, "x | v | y | w | z");
  app.add_option("--lane", lane, "lane i for x and v");
  app.add_option("--steps", steps, "simulation length");
  app.add_option("--trace-format", trace_format, "text-bits | run-length");
  app.add_option("--threads", threads, "worker threads for verify (0 = all cores)");
  app.add_flag("--list-claims", list_claims, "print the claim inventory and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list_claims) {
    for (const auto& info : nre::claim_inventory()) {
      std::cout << info.id << (info.d_indexed ? " [per d]" : "") << ": " << info.statement << '\n';
    }
    return 0;
  }

  try {
    nre::ExperimentConfig config;
    if (!config_path.empty()) {
      std::ifstream file(config_path);
      if (!file) throw nre::Error(nre::ErrorKind::Io, "cannot open " + config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(file);
      } catch (const nlohmann::json::parse_error& e) {
        throw nre::Error(nre::ErrorKind::InvalidArgument, config_path + ": " + e.what());
      }
      config = nre::config_from_json(j);
    }
    if (m) config.m = m;
    if (!d.empty()) config.d = d;
    if (!mode.empty()) config.mode = nre::parse_mode(mode);
    if (budget) config.budget = *budget;
    if (!claims.empty()) config.claims = claims;
    if (!out.empty()) config.out = out;
    if (emit_traces) config.emit_traces = true;
    if (seed) config.seed = *seed;
    if (long_tier) config.long_tier = true;
    if (!system.empty()) config.system = nre::parse_system(system);
    if (lane) config.lane = lane;
    if (steps) config.steps = *steps;
    if (!trace_format.empty()) config.trace_format = nre::parse_trace_format(trace_format);
    if (threads) config.threads = *threads;

    const nre::RunReport report = nre::cmd_run(config);
    print_summary(report);
    return nre::exit_status(report);
  } catch (const nre::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
