#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nre/construction.hpp"
#include "nre/engine.hpp"
#include "nre/error.hpp"
#include "nre/runner.hpp"
#include "nre/trace_io.hpp"

using namespace nre;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "nre-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream file(path, std::ios::binary);
  std::ostringstream out;
  out << file.rdbuf();
  return out.str();
}

}  // namespace

TEST_SUITE("trace_io") {

TEST_CASE("text-bits layout") {
  CHECK(encode_trace(Bits{1, 0, 1, 1, 0}, TraceFormat::TextBits, 2) == "10\n11\n0\n");
  CHECK(encode_trace(Bits{1, 0, 1, 1}, TraceFormat::TextBits, 2) == "10\n11\n");
}

TEST_CASE("run-length layout") {
  CHECK(encode_trace(Bits{0, 0, 0, 1, 1, 0}, TraceFormat::RunLength, 1) ==
        "0\xC3\x97" "3\n1\xC3\x97" "2\n0\xC3\x97" "1\n");
  CHECK(encode_trace(Bits(500, 0), TraceFormat::RunLength, 1) == "0\xC3\x97" "500\n");
}

TEST_CASE("x trace ones at the closed-form offsets") {
  const WindowParams p = window_params(6);
  const RecurrenceSystem x = build_x(p, 0);
  const Bits trace = run(compile(x), x.init, 20);
  REQUIRE(trace.size() == 90);
  const std::string text = encode_trace(trace, TraceFormat::TextBits, x.memory());
  std::string flat;
  for (char c : text) {
    if (c != '\n') flat.push_back(c);
  }
  std::vector<std::size_t> ones;
  for (std::size_t t = 0; t < flat.size(); ++t) {
    if (flat[t] == '1') ones.push_back(t);
  }
  CHECK(ones == std::vector<std::size_t>{2, 19, 36, 53, 70, 87});
}

TEST_CASE("round trips") {
  std::mt19937_64 rng(11);
  const fs::path dir = scratch("roundtrip");
  for (int trial = 0; trial < 50; ++trial) {
    Bits trace(1 + rng() % 300);
    for (auto& b : trace) b = static_cast<std::uint8_t>((rng() % 4) == 0);
    for (TraceFormat f : {TraceFormat::TextBits, TraceFormat::RunLength}) {
      CHECK(decode_trace(encode_trace(trace, f, 1 + rng() % 40), f) == trace);
      const fs::path path = dir / "t.txt";
      export_trace(trace, path, f, 7);
      CHECK(import_trace(path, f) == trace);
    }
  }
}

TEST_CASE("trace errors") {
  CHECK_THROWS_AS(decode_trace("10x\n", TraceFormat::TextBits), Error);
  CHECK_THROWS_AS(decode_trace("2\xC3\x97" "3\n", TraceFormat::RunLength), Error);
  CHECK_THROWS_AS(decode_trace("1x3\n", TraceFormat::RunLength), Error);
  try {
    import_trace("/nonexistent/dir/trace.txt", TraceFormat::TextBits);
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
    CHECK(std::string(e.what()).find("/nonexistent/dir/trace.txt") != std::string::npos);
  }
  CHECK_THROWS_AS(export_trace(Bits{}, scratch("empty") / "t", TraceFormat::TextBits, 1), Error);
  CHECK(parse_trace_format("run-length") == TraceFormat::RunLength);
  CHECK_THROWS_AS(parse_trace_format("hex"), Error);
}

}

TEST_SUITE("report") {

TEST_CASE("config parsing") {
  const auto j = nlohmann::json::parse(R"({"m": 6, "d": [0, 1], "mode": "cycle", "budget": 1000,
                                           "claims": ["prop1"], "emit_traces": true, "seed": 9})");
  const ExperimentConfig c = config_from_json(j);
  CHECK(c.m == 6);
  CHECK(c.d == std::vector<int>{0, 1});
  CHECK(c.mode == Mode::Cycle);
  CHECK(c.budget == 1000);
  CHECK(c.emit_traces);
  CHECK(c.seed == 9);
  CHECK(config_from_json(to_json(c)).claims == c.claims);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"bogus": 1})")), Error);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"m": "six"})")), Error);
  ExperimentConfig bad;
  bad.m = 1;
  CHECK_THROWS_AS(validate(bad), Error);
  bad.m = 6;
  bad.budget = 0;
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("chain mode report") {
  ExperimentConfig c;
  c.m = 6;
  c.mode = Mode::Chain;
  c.out = scratch("chain");
  const RunReport r = cmd_run(c);
  CHECK(exit_status(r) == 0);
  CHECK(r.details["chain"] == nlohmann::json::array({442, 26, 1}));
  CHECK(r.details["divides"] == nlohmann::json::array({true, true}));
  const auto j = nlohmann::json::parse(slurp(c.out / "report.json"));
  CHECK(j["tool_version"] == std::string(kToolVersion));
  CHECK(j["window_params"]["primes"] == nlohmann::json::array({17, 13}));
  CHECK(j["claims"][0]["claim"] == "chain");
  CHECK(j["all_passed"] == true);
  const std::string csv = slurp(c.out / "cycles.csv");
  CHECK(csv.find("system,m,d,T_measured,P_measured,T_predicted,P_predicted,match") == 0);
  CHECK(csv.find("\"z(m=6,d=0)\",6,0,139,26,139,26,true") != std::string::npos);
}

TEST_CASE("reports are deterministic apart from timing") {
  ExperimentConfig c;
  c.m = 6;
  c.mode = Mode::Verify;
  c.claims = {"prop1", "phases", "basin", "divisor_rule"};
  c.out = scratch("det");
  auto first = to_json(cmd_run(c));
  auto second = to_json(cmd_run(c));
  first.erase("wall_clock_seconds");
  second.erase("wall_clock_seconds");
  CHECK(first == second);
}

TEST_CASE("cycle mode with traces") {
  ExperimentConfig c;
  c.m = 6;
  c.mode = Mode::Cycle;
  c.system = SystemKind::Z;
  c.d = {0};
  c.emit_traces = true;
  c.trace_format = TraceFormat::RunLength;
  c.out = scratch("cycle");
  const RunReport r = cmd_run(c);
  REQUIRE(r.systems.size() == 1);
  CHECK(r.systems[0].report.measured_transient == 139);
  CHECK(r.systems[0].report.measured_period == 26);
  REQUIRE(r.files.size() == 1);
  const Bits trace = import_trace(r.files[0], TraceFormat::RunLength);
  CHECK(trace.size() == 140 + 165);
}

TEST_CASE("claim failure gives exit status 1 and still writes the report") {
  ExperimentConfig c;
  c.m = 6;
  c.mode = Mode::Chain;
  c.budget = 10;
  c.out = scratch("fail");
  const RunReport r = cmd_run(c);
  CHECK(exit_status(r) == 1);
  CHECK(fs::exists(c.out / "report.json"));
  CHECK(r.claims.at(0).counterexample->where == "BudgetExceeded");
}

TEST_CASE("construct and simulate modes") {
  ExperimentConfig c;
  c.m = 6;
  c.mode = Mode::Construct;
  c.out = scratch("construct");
  const RunReport built = cmd_run(c);
  CHECK(built.details["perturbations"][0]["theta2"] == "241/80");
  CHECK(built.details["perturbations"][0]["tot"] == 10);

  c.mode = Mode::Simulate;
  c.system = SystemKind::X;
  c.lane = 0;
  c.steps = 20;
  c.out = scratch("simulate");
  const RunReport sim = cmd_run(c);
  CHECK(sim.details["runs"][0]["first_ones"] == nlohmann::json::array({2, 19, 36, 53, 70, 87}));
}

}
