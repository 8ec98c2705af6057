#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nre/cycles.hpp"

namespace nre {

enum class Claim {
  WindowParamBounds,
  Prop1,
  Prop2,
  PosDisjoint,
  XCycle,
  VFixed,
  SumBounds,
  S1Range,
  YCycle,
  YDeshuffle,
  WCycle,
  B0MethodsAgree,
  ChainEqualsDirect,
  Phases,
  ZSummary,
  Chain,
  Basin,
  Example1Period2,
  Example1Period3,
  DivisorRule,
};

enum class ClaimKind { Static, Dynamics, Phases, Chain, Basin, Composition };

struct ClaimInfo {
  Claim claim;
  std::string_view id;
  ClaimKind kind;
  bool d_indexed;
  std::string_view statement;
};

std::span<const ClaimInfo> claim_inventory();
const ClaimInfo& claim_info(Claim claim);
std::optional<Claim> parse_claim(std::string_view id);

/// Replayable evidence attached to every failing result.
struct Counterexample {
  std::string where;  // which sequence or set
  std::int64_t index = 0;  // time step or set element
  std::string expected;
  std::string observed;
};

struct ClaimResult {
  Claim claim{};
  std::optional<int> m;
  std::optional<int> d;
  std::optional<int> i;
  bool passed = false;
  std::string detail;
  std::optional<Counterexample> counterexample;
  nlohmann::json evidence = nlohmann::json::object();
  std::vector<CycleReport> cycles;  // every trajectory measured on the way
};

struct CheckOptions {
  std::uint64_t step_budget = 1'000'000'000;
  // Above this many predicted steps, measured pairs come from
  // verify_predicted instead of a full detect_cycle.
  std::uint64_t detect_limit = 4'000'000;
  // Upper bound on the length of windows scanned by trace-wise checks.
  std::uint64_t window_cap = 2'000'000;
};

ClaimResult check_static(Claim claim, int m);
ClaimResult check_dynamics(Claim claim, int m, std::optional<int> d, const CheckOptions& options = {});
ClaimResult check_phases(int m, int d, const CheckOptions& options = {});
ClaimResult check_chain(int m, const CheckOptions& options = {});

/// Which free prefixes to try: all 2^width of them, or `samples` drawn
/// from a seeded generator.
struct BasinSelector {
  bool enumerate = true;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
};

/// Throws HypothesisUnmet when d >= min_i beta(m, alpha_i).
ClaimResult check_basin(int m, int d, const BasinSelector& selector = {},
                        const CheckOptions& options = {});

ClaimResult check_composition(Claim claim, std::uint64_t seed = 1);

struct WorkItem {
  Claim claim{};
  std::optional<int> m;
  std::optional<int> d;
};

/// Default grid uses m in {6, 11}; the long tier adds m = 16 and m = 21.
std::vector<WorkItem> claim_grid(bool long_tier, std::span<const Claim> filter = {});

struct RunOptions {
  CheckOptions check;
  BasinSelector basin;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Evaluates one work item, turning operational errors into failing results.
ClaimResult run_item(const WorkItem& item, const RunOptions& options = {});
std::vector<ClaimResult> run_items(std::span<const WorkItem> items, const RunOptions& options = {});

}  // namespace nre
