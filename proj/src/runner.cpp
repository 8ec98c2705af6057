#include "nre/runner.hpp"

#include <algorithm>
#include <chrono>
#include <regex>

#include "nre/construction.hpp"
#include "nre/engine.hpp"
#include "nre/error.hpp"

namespace nre {

namespace {

struct Built {
  RecurrenceSystem system;
  Prediction predicted;
  std::optional<int> d;
};

std::vector<int> requested_d(const ExperimentConfig& c, const WindowParams& p) {
  std::vector<int> out = c.d;
  if (out.empty()) {
    for (int d = 0; d < p.rho; ++d) out.push_back(d);
  }
  for (int d : out) {
    if (d >= p.rho) throw Error(ErrorKind::IndexOutOfRange, "d=" + std::to_string(d) + " needs d < rho=" + std::to_string(p.rho));
  }
  return out;
}

std::vector<int> requested_lanes(const ExperimentConfig& c, const WindowParams& p) {
  if (c.lane) {
    if (*c.lane >= p.rho) throw Error(ErrorKind::IndexOutOfRange, "lane " + std::to_string(*c.lane));
    return {*c.lane};
  }
  std::vector<int> out;
  for (int i = 0; i < p.rho; ++i) out.push_back(i);
  return out;
}

std::vector<Built> requested_systems(const ExperimentConfig& c, const WindowParams& p) {
  std::vector<SystemKind> kinds;
  if (c.system) kinds = {*c.system};
  else kinds = {SystemKind::X, SystemKind::V, SystemKind::Y, SystemKind::W, SystemKind::Z};
  std::vector<Built> out;
  for (SystemKind kind : kinds) {
    switch (kind) {
      case SystemKind::X:
        for (int i : requested_lanes(c, p)) out.push_back({build_x(p, i), predict_x(p, i), std::nullopt});
        break;
      case SystemKind::V:
        for (int i : requested_lanes(c, p)) out.push_back({build_v(p, i), predict_v(p, i), std::nullopt});
        break;
      case SystemKind::Y:
        out.push_back({build_y(p), predict_y(p), std::nullopt});
        break;
      case SystemKind::W:
        for (int d : requested_d(c, p)) out.push_back({build_w(p, d), predict_w(p, d), d});
        break;
      case SystemKind::Z:
        for (int d : requested_d(c, p)) out.push_back({build_z(p, d), predict_z(p, d), d});
        break;
    }
  }
  return out;
}

std::string file_stem(const std::string& label) {
  std::string out;
  for (char ch : label) {
    if (std::isalnum(static_cast<unsigned char>(ch))) out.push_back(ch);
    else if (ch == '=' || ch == ',' || ch == '(') out.push_back('_');
  }
  return out;
}

std::optional<int> label_d(const std::string& label) {
  static const std::regex pattern(R"(d=(\d+))");
  std::smatch match;
  if (std::regex_search(label, match, pattern)) return std::stoi(match[1].str());
  return std::nullopt;
}

void emit(RunReport& report, const ExperimentConfig& c, const RecurrenceSystem& system, std::uint64_t steps) {
  const Bits trace = run(compile(system), system.init, steps);
  const std::string ext = c.trace_format == TraceFormat::TextBits ? ".bits" : ".rle";
  const auto path = c.out / ("trace_" + file_stem(system.label) + ext);
  export_trace(trace, path, c.trace_format, system.memory());
  report.files.push_back(path.string());
}

nlohmann::json describe(const RecurrenceSystem& s) {
  nlohmann::json taps = nlohmann::json::array();
  for (std::size_t j = 0; j < s.weights.size(); ++j) {
    if (s.weights[j] != 0) taps.push_back({j + 1, to_string(s.weights[j])});
  }
  std::string init;
  for (auto b : s.init) init.push_back(b ? '1' : '0');
  return {{"label", s.label}, {"memory", s.memory()}, {"threshold", to_string(s.threshold)},
          {"taps", taps},     {"init", init}};
}

nlohmann::json describe(const PerturbationPlan& plan) {
  return {{"d", plan.d},
          {"b0", plan.b0},
          {"a", plan.a},
          {"tot", plan.tot},
          {"lambda", to_string(plan.lambda)},
          {"beta", to_string(plan.beta_d)},
          {"xi", to_string(plan.xi_d)},
          {"theta2", to_string(plan.theta2)}};
}

void add_claim(RunReport& report, ClaimResult result) {
  for (const auto& cycle : result.cycles) {
    report.systems.push_back({cycle.label, result.m, label_d(cycle.label), cycle});
  }
  report.claims.push_back(std::move(result));
}

CheckOptions check_options(const ExperimentConfig& c) {
  CheckOptions o;
  o.step_budget = c.budget;
  return o;
}

void run_construct(RunReport& report, const ExperimentConfig& c, const WindowParams& p) {
  nlohmann::json systems = nlohmann::json::array();
  for (const auto& b : requested_systems(c, p)) {
    auto entry = describe(b.system);
    entry["predicted_transient"] = b.predicted.transient;
    entry["predicted_period"] = b.predicted.period;
    systems.push_back(entry);
  }
  report.details["systems"] = systems;
  nlohmann::json plans = nlohmann::json::array();
  for (int d : requested_d(c, p)) plans.push_back(describe(perturbation_plan(p, d)));
  report.details["perturbations"] = plans;
  nlohmann::json lengths = nlohmann::json::array();
  for (int d = 0; d < p.rho; ++d) {
    const auto l = cycle_lengths(p, d);
    lengths.push_back({{"d", d}, {"l0", to_string(l.l0)}, {"l1", to_string(l.l1)}, {"l2", to_string(l.l2)}});
  }
  report.details["cycle_lengths"] = lengths;
}

void run_simulate(RunReport& report, const ExperimentConfig& c, const WindowParams& p) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& b : requested_systems(c, p)) {
    const std::uint64_t steps = c.steps ? c.steps : 2 * b.system.memory();
    const Bits trace = run(compile(b.system), b.system.init, steps);
    std::vector<std::uint64_t> ones;
    for (std::size_t t = 0; t < trace.size() && ones.size() < 64; ++t) {
      if (trace[t]) ones.push_back(t);
    }
    const Bits tail(trace.end() - static_cast<std::ptrdiff_t>(b.system.memory()), trace.end());
    runs.push_back({{"label", b.system.label},
                    {"length", trace.size()},
                    {"ones", std::count(trace.begin(), trace.end(), 1)},
                    {"first_ones", ones},
                    {"final_window_ones", std::count(tail.begin(), tail.end(), 1)}});
    if (c.emit_traces) emit(report, c, b.system, steps);
  }
  report.details["runs"] = runs;
}

void run_cycle(RunReport& report, const ExperimentConfig& c, const WindowParams& p) {
  const CheckOptions o = check_options(c);
  for (const auto& b : requested_systems(c, p)) {
    const CompiledSystem cs = compile(b.system);
    CycleReport r = b.predicted.transient + b.predicted.period <= o.detect_limit
                        ? detect_cycle(cs, b.system.init, o.step_budget, b.predicted)
                        : verify_predicted(cs, b.system.init, b.predicted.transient, b.predicted.period);
    report.systems.push_back({b.system.label, p.m, b.d, r});
    if (c.emit_traces) {
      emit(report, c, b.system, std::min<std::uint64_t>(r.measured_transient + r.measured_period, o.window_cap));
    }
  }
}

void run_chain(RunReport& report, const ExperimentConfig& c, const WindowParams& p) {
  RunOptions options;
  options.check = check_options(c);
  ClaimResult result = run_item({Claim::Chain, p.m, std::nullopt}, options);
  std::vector<std::uint64_t> chain;
  for (const auto& cycle : result.cycles) chain.push_back(cycle.measured_period);
  report.details["chain"] = chain;
  report.details["divides"] = result.evidence.value("divides", nlohmann::json::array());
  add_claim(report, std::move(result));
}

void run_basin(RunReport& report, const ExperimentConfig& c, const WindowParams& p) {
  BasinSelector selector;
  selector.seed = c.seed;
  const int beta_e = *std::min_element(p.beta_m.begin(), p.beta_m.end());
  std::vector<int> ds = c.d;
  if (ds.empty()) {
    for (int d = 0; d < std::min(p.rho, beta_e); ++d) ds.push_back(d);
  }
  for (int d : ds) {
    if (beta_e - d > 20) {
      selector.enumerate = false;
      selector.samples = 64;
    }
    add_claim(report, run_item({Claim::Basin, p.m, d}, RunOptions{check_options(c), selector, c.seed, 1}));
  }
}

void run_verify(RunReport& report, const ExperimentConfig& c) {
  std::vector<Claim> filter;
  for (const auto& id : c.claims) filter.push_back(*parse_claim(id));
  std::vector<WorkItem> items;
  for (const auto& item : claim_grid(c.long_tier || (c.m && *c.m > 11), filter)) {
    if (c.m && item.m && *item.m != *c.m) continue;
    if (!c.d.empty() && item.d && std::find(c.d.begin(), c.d.end(), *item.d) == c.d.end()) continue;
    items.push_back(item);
  }
  if (c.m && std::none_of(items.begin(), items.end(), [](const WorkItem& w) { return w.m.has_value(); })) {
    // Scales outside the built-in grid get the per-m claims directly.
    for (const auto& info : claim_inventory()) {
      if (info.kind == ClaimKind::Composition) continue;
      if (!filter.empty() && std::find(filter.begin(), filter.end(), info.claim) == filter.end()) continue;
      items.push_back({info.claim, c.m, std::nullopt});
    }
  }
  RunOptions options;
  options.check = check_options(c);
  options.basin.seed = c.seed;
  options.seed = c.seed;
  options.threads = c.threads;
  for (auto& result : run_items(items, options)) add_claim(report, std::move(result));
}

}  // namespace

RunReport cmd_run(const ExperimentConfig& config) {
  validate(config);
  const auto started = std::chrono::steady_clock::now();
  RunReport report;
  report.config = config;
  if (config.m) report.params = window_params(*config.m);

  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + config.out.string() + ": " + ec.message());

  switch (config.mode) {
    case Mode::Construct: run_construct(report, config, *report.params); break;
    case Mode::Simulate: run_simulate(report, config, *report.params); break;
    case Mode::Cycle: run_cycle(report, config, *report.params); break;
    case Mode::Verify: run_verify(report, config); break;
    case Mode::Chain: run_chain(report, config, *report.params); break;
    case Mode::Basin: run_basin(report, config, *report.params); break;
  }
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_report(report, config.out);
  return report;
}

int exit_status(const RunReport& report) { return report.all_passed() ? 0 : 1; }

}  // namespace nre
