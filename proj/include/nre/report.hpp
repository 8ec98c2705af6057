#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nre/cycles.hpp"
#include "nre/numtheory.hpp"
#include "nre/trace_io.hpp"
#include "nre/verify.hpp"

namespace nre {

inline constexpr std::string_view kToolName = "nre";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Mode { Construct, Simulate, Cycle, Verify, Chain, Basin };
enum class SystemKind { X, V, Y, W, Z };

std::string_view mode_name(Mode mode);
Mode parse_mode(std::string_view name);
std::string_view system_name(SystemKind kind);
SystemKind parse_system(std::string_view name);

struct ExperimentConfig {
  std::optional<int> m;           // verify without m runs the whole grid
  std::vector<int> d;             // empty means every admissible d
  Mode mode = Mode::Verify;
  std::uint64_t budget = 1'000'000'000;
  std::vector<std::string> claims;  // claim ids; empty means the default suite
  std::filesystem::path out = "nre-out";
  bool emit_traces = false;
  std::uint64_t seed = 1;
  bool long_tier = false;
  std::optional<SystemKind> system;  // simulate and cycle; unset means all
  std::optional<int> lane;           // lane i for x and v
  std::uint64_t steps = 0;           // simulate length; 0 picks 2 * memory
  TraceFormat trace_format = TraceFormat::TextBits;
  unsigned threads = 0;
};

/// Throws InvalidArgument on unknown keys, bad values or a missing m
/// where the mode needs one.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);
void validate(const ExperimentConfig& config);

struct SystemRecord {
  std::string label;
  std::optional<int> m;
  std::optional<int> d;
  CycleReport report;
};

struct RunReport {
  ExperimentConfig config;
  std::optional<WindowParams> params;
  std::vector<SystemRecord> systems;
  std::vector<ClaimResult> claims;
  nlohmann::json details = nlohmann::json::object();  // mode-specific payload
  std::vector<std::string> files;
  double wall_clock_seconds = 0.0;

  bool all_passed() const;
};

nlohmann::json to_json(const WindowParams& params);
nlohmann::json to_json(const CycleReport& report);
nlohmann::json to_json(const ClaimResult& result);
nlohmann::json to_json(const RunReport& report);

/// Header system,m,d,T_measured,P_measured,T_predicted,P_predicted,match.
std::string csv_table(const RunReport& report);

/// Writes report.json and cycles.csv into `dir`, creating it if needed.
void write_report(const RunReport& report, const std::filesystem::path& dir);

}  // namespace nre
