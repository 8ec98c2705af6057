#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nre/construction.hpp"
#include "nre/engine.hpp"

namespace nre {

/// Minimal (transient, period) of a trajectory. State s is the window
/// x(s)..x(s + memory - 1); the pair satisfies state(T + P) = state(T) with
/// both T and P minimal.
struct CycleReport {
  std::string label;
  std::uint64_t measured_transient = 0;
  std::uint64_t measured_period = 0;
  std::optional<std::uint64_t> predicted_transient;
  std::optional<std::uint64_t> predicted_period;
  bool transient_match = true;
  bool period_match = true;
  bool certified = false;
  std::uint64_t steps_executed = 0;
  Bits attractor_entry;  // state(T)

  bool matches() const { return transient_match && period_match; }
  /// True when the attractor is the all-zero fixed point.
  bool zero_fixed_point() const;
};

/// Brent-style cycle finding over full window states, followed by a
/// single-pass minimality certificate. Throws BudgetExceeded when more than
/// `step_budget` steps would be needed.
CycleReport detect_cycle(const CompiledSystem& cs, const Bits& init, std::uint64_t step_budget,
                         std::optional<Prediction> predicted = std::nullopt);

/// Confirms a claimed (T, P) in one pass of T + P steps: state(T + P) must
/// equal state(T), state(T + P/q) must differ for every prime q | P, and
/// state(T - 1 + P) must differ from state(T - 1) when T > 0.
/// Throws PredictionFailed naming the first violated check.
CycleReport verify_predicted(const CompiledSystem& cs, const Bits& init, std::uint64_t transient,
                             std::uint64_t period);

}  // namespace nre
