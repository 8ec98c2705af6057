#include "nre/report.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "nre/error.hpp"

namespace nre {

namespace {

constexpr std::array<std::string_view, 6> kModes{"construct", "simulate", "cycle", "verify", "chain", "basin"};
constexpr std::array<std::string_view, 5> kSystems{"x", "v", "y", "w", "z"};

template <typename T>
T get_field(const nlohmann::json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("config field '") + key + "': " + e.what());
  }
}

bool present(const nlohmann::json& j, const char* key) { return j.contains(key) && !j.at(key).is_null(); }

std::string optional_text(const std::optional<std::uint64_t>& value) {
  return value ? std::to_string(*value) : std::string();
}

}  // namespace

std::string_view mode_name(Mode mode) { return kModes[static_cast<std::size_t>(mode)]; }

Mode parse_mode(std::string_view name) {
  for (std::size_t i = 0; i < kModes.size(); ++i) {
    if (kModes[i] == name) return static_cast<Mode>(i);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown mode '" + std::string(name) + "'");
}

std::string_view system_name(SystemKind kind) { return kSystems[static_cast<std::size_t>(kind)]; }

SystemKind parse_system(std::string_view name) {
  for (std::size_t i = 0; i < kSystems.size(); ++i) {
    if (kSystems[i] == name) return static_cast<SystemKind>(i);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown system '" + std::string(name) + "'");
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "config must be a JSON object");
  static const std::set<std::string> known{"m",          "d",     "mode",   "budget", "claims",       "out",
                                           "emit_traces", "seed", "long",   "system", "lane",         "steps",
                                           "trace_format", "threads"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw Error(ErrorKind::InvalidArgument, "unknown config field '" + key + "'");
  }
  ExperimentConfig c;
  if (present(j, "m")) c.m = get_field<int>(j, "m");
  if (j.contains("d")) {
    if (j.at("d").is_number_integer()) c.d = {get_field<int>(j, "d")};
    else c.d = get_field<std::vector<int>>(j, "d");
  }
  if (j.contains("mode")) c.mode = parse_mode(get_field<std::string>(j, "mode"));
  if (j.contains("budget")) c.budget = get_field<std::uint64_t>(j, "budget");
  if (j.contains("claims")) c.claims = get_field<std::vector<std::string>>(j, "claims");
  if (j.contains("out")) c.out = get_field<std::string>(j, "out");
  if (j.contains("emit_traces")) c.emit_traces = get_field<bool>(j, "emit_traces");
  if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed");
  if (j.contains("long")) c.long_tier = get_field<bool>(j, "long");
  if (present(j, "system")) c.system = parse_system(get_field<std::string>(j, "system"));
  if (present(j, "lane")) c.lane = get_field<int>(j, "lane");
  if (j.contains("steps")) c.steps = get_field<std::uint64_t>(j, "steps");
  if (j.contains("trace_format")) c.trace_format = parse_trace_format(get_field<std::string>(j, "trace_format"));
  if (j.contains("threads")) c.threads = get_field<unsigned>(j, "threads");
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["m"] = c.m ? nlohmann::json(*c.m) : nlohmann::json(nullptr);
  j["d"] = c.d;
  j["mode"] = mode_name(c.mode);
  j["budget"] = c.budget;
  j["claims"] = c.claims;
  j["out"] = c.out.string();
  j["emit_traces"] = c.emit_traces;
  j["seed"] = c.seed;
  j["long"] = c.long_tier;
  j["system"] = c.system ? nlohmann::json(system_name(*c.system)) : nlohmann::json(nullptr);
  j["lane"] = c.lane ? nlohmann::json(*c.lane) : nlohmann::json(nullptr);
  j["steps"] = c.steps;
  j["trace_format"] = trace_format_name(c.trace_format);
  j["threads"] = c.threads;
  return j;
}

void validate(const ExperimentConfig& c) {
  if (c.m && *c.m < 2) throw Error(ErrorKind::InvalidArgument, "m must be at least 2");
  if (!c.m && c.mode != Mode::Verify) {
    throw Error(ErrorKind::InvalidArgument, std::string("mode ") + std::string(mode_name(c.mode)) + " needs m");
  }
  if (c.budget == 0) throw Error(ErrorKind::InvalidArgument, "budget must be positive");
  for (int d : c.d) {
    if (d < 0) throw Error(ErrorKind::InvalidArgument, "d must be non-negative");
  }
  for (const auto& id : c.claims) {
    if (!parse_claim(id)) throw Error(ErrorKind::InvalidArgument, "unknown claim '" + id + "'");
  }
  if (c.lane && *c.lane < 0) throw Error(ErrorKind::InvalidArgument, "lane must be non-negative");
  if (c.mode == Mode::Simulate && !c.system) throw Error(ErrorKind::InvalidArgument, "mode simulate needs a system");
}

bool RunReport::all_passed() const {
  for (const auto& c : claims) {
    if (!c.passed) return false;
  }
  return true;
}

nlohmann::json to_json(const WindowParams& p) {
  return {{"m", p.m},       {"primes", p.primes}, {"rho", p.rho}, {"alphas", p.alphas},
          {"k", p.k},       {"h", p.h},           {"mu", p.mu},   {"beta", p.beta_m}};
}

nlohmann::json to_json(const CycleReport& r) {
  nlohmann::json j;
  j["label"] = r.label;
  j["measured_transient"] = r.measured_transient;
  j["measured_period"] = r.measured_period;
  j["predicted_transient"] = r.predicted_transient ? nlohmann::json(*r.predicted_transient) : nlohmann::json(nullptr);
  j["predicted_period"] = r.predicted_period ? nlohmann::json(*r.predicted_period) : nlohmann::json(nullptr);
  j["transient_match"] = r.transient_match;
  j["period_match"] = r.period_match;
  j["certified"] = r.certified;
  j["steps_executed"] = r.steps_executed;
  j["zero_fixed_point"] = r.zero_fixed_point();
  return j;
}

nlohmann::json to_json(const ClaimResult& r) {
  nlohmann::json j;
  j["claim"] = claim_info(r.claim).id;
  j["m"] = r.m ? nlohmann::json(*r.m) : nlohmann::json(nullptr);
  j["d"] = r.d ? nlohmann::json(*r.d) : nlohmann::json(nullptr);
  j["passed"] = r.passed;
  j["detail"] = r.detail;
  if (r.counterexample) {
    j["counterexample"] = {{"where", r.counterexample->where},
                           {"index", r.counterexample->index},
                           {"expected", r.counterexample->expected},
                           {"observed", r.counterexample->observed}};
  } else {
    j["counterexample"] = nullptr;
  }
  j["evidence"] = r.evidence;
  nlohmann::json cycles = nlohmann::json::array();
  for (const auto& c : r.cycles) cycles.push_back(to_json(c));
  j["cycles"] = cycles;
  return j;
}

nlohmann::json to_json(const RunReport& r) {
  nlohmann::json j;
  j["tool"] = kToolName;
  j["tool_version"] = kToolVersion;
  j["config"] = to_json(r.config);
  j["window_params"] = r.params ? to_json(*r.params) : nlohmann::json(nullptr);
  nlohmann::json systems = nlohmann::json::array();
  for (const auto& s : r.systems) {
    nlohmann::json entry = to_json(s.report);
    entry["m"] = s.m ? nlohmann::json(*s.m) : nlohmann::json(nullptr);
    entry["d"] = s.d ? nlohmann::json(*s.d) : nlohmann::json(nullptr);
    systems.push_back(entry);
  }
  j["systems"] = systems;
  nlohmann::json claims = nlohmann::json::array();
  for (const auto& c : r.claims) claims.push_back(to_json(c));
  j["claims"] = claims;
  j["all_passed"] = r.all_passed();
  j["details"] = r.details;
  j["files"] = r.files;
  j["wall_clock_seconds"] = r.wall_clock_seconds;
  return j;
}

std::string csv_table(const RunReport& r) {
  std::ostringstream out;
  out << "system,m,d,T_measured,P_measured,T_predicted,P_predicted,match\n";
  for (const auto& s : r.systems) {
    const auto& c = s.report;
    out << '"' << s.report.label << '"' << ',' << (s.m ? std::to_string(*s.m) : "") << ','
        << (s.d ? std::to_string(*s.d) : "") << ',' << c.measured_transient << ',' << c.measured_period << ','
        << optional_text(c.predicted_transient) << ',' << optional_text(c.predicted_period) << ','
        << (c.matches() ? "true" : "false") << '\n';
  }
  return out.str();
}

void write_report(const RunReport& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  const auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    file << text;
    if (!file) throw Error(ErrorKind::Io, "write failed for " + path.string());
  };
  write(dir / "report.json", to_json(r).dump(2) + "\n");
  write(dir / "cycles.csv", csv_table(r));
}

}  // namespace nre
