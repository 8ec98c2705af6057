#include "nre/cycles.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "nre/error.hpp"
#include "nre/numtheory.hpp"

namespace nre {

bool CycleReport::zero_fixed_point() const {
  return measured_period == 1 &&
         std::all_of(attractor_entry.begin(), attractor_entry.end(), [](std::uint8_t b) { return b == 0; });
}

namespace {

class BudgetedWalk {
 public:
  BudgetedWalk(const CompiledSystem& cs, std::uint64_t budget) : cs_(cs), budget_(budget) {}

  void advance(BitState& state) {
    if (++steps_ > budget_) {
      throw Error(ErrorKind::BudgetExceeded,
                  cs_.label + ": no repeated state within " + std::to_string(budget_) + " steps");
    }
    step(cs_, state);
  }

  std::uint64_t steps() const { return steps_; }

 private:
  const CompiledSystem& cs_;
  std::uint64_t budget_;
  std::uint64_t steps_ = 0;
};

Bits copy_window(const BitState& state) {
  const auto w = state.window();
  return {w.begin(), w.end()};
}

}  // namespace

CycleReport detect_cycle(const CompiledSystem& cs, const Bits& init, std::uint64_t step_budget,
                         std::optional<Prediction> predicted) {
  const BitState origin(init);
  if (origin.memory() != cs.memory) {
    throw Error(ErrorKind::ShapeMismatch, cs.label + ": init length does not match memory");
  }
  BudgetedWalk walk(cs, step_budget);

  // Period: the hare runs ahead while the tortoise teleports to it at
  // every power of two.
  std::uint64_t power = 1;
  std::uint64_t period = 1;
  BitState tortoise = origin;
  BitState hare = origin;
  walk.advance(hare);
  while (!(tortoise == hare)) {
    if (power == period) {
      tortoise = hare;
      power *= 2;
      period = 0;
    }
    walk.advance(hare);
    ++period;
  }

  // Transient: two walkers `period` apart meet at the cycle entry.
  tortoise = origin;
  hare = origin;
  for (std::uint64_t s = 0; s < period; ++s) walk.advance(hare);
  std::uint64_t transient = 0;
  while (!(tortoise == hare)) {
    walk.advance(tortoise);
    walk.advance(hare);
    ++transient;
  }

  CycleReport report;
  report.label = cs.label;
  try {
    report = verify_predicted(cs, init, transient, period);
    report.certified = true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PredictionFailed) throw;
    report.measured_transient = transient;
    report.measured_period = period;
    report.attractor_entry = copy_window(tortoise);
    report.certified = false;
  }
  report.steps_executed += walk.steps();
  report.predicted_transient.reset();
  report.predicted_period.reset();
  report.transient_match = report.period_match = true;
  if (predicted) {
    report.predicted_transient = predicted->transient;
    report.predicted_period = predicted->period;
    report.transient_match = predicted->transient == transient;
    report.period_match = predicted->period == period;
  }
  return report;
}

CycleReport verify_predicted(const CompiledSystem& cs, const Bits& init, std::uint64_t transient,
                             std::uint64_t period) {
  if (period == 0) {
    throw Error(ErrorKind::InvalidArgument, "predicted period must be at least 1");
  }
  BitState state(init);
  if (state.memory() != cs.memory) {
    throw Error(ErrorKind::ShapeMismatch, cs.label + ": init length does not match memory");
  }
  const std::string what = cs.label + " (T=" + std::to_string(transient) + ", P=" + std::to_string(period) + ")";

  // Probe times measured in state indices, visited in ascending order.
  enum class Probe { SaveBefore, SaveEntry, MustDifferBefore, MustDifferDivisor, MustEqual };
  struct Checkpoint {
    std::uint64_t at;
    Probe probe;
    std::uint64_t divisor;
  };
  std::vector<Checkpoint> checkpoints;
  if (transient > 0) {
    checkpoints.push_back({transient - 1, Probe::SaveBefore, 0});
    checkpoints.push_back({transient - 1 + period, Probe::MustDifferBefore, 0});
  }
  checkpoints.push_back({transient, Probe::SaveEntry, 0});
  for (std::uint64_t q : prime_divisors(period)) {
    checkpoints.push_back({transient + period / q, Probe::MustDifferDivisor, q});
  }
  checkpoints.push_back({transient + period, Probe::MustEqual, 0});
  std::stable_sort(checkpoints.begin(), checkpoints.end(),
                   [](const Checkpoint& a, const Checkpoint& b) { return a.at < b.at; });

  BitState before;
  BitState entry;
  std::uint64_t steps = 0;
  for (const Checkpoint& cp : checkpoints) {
    while (state.start() < cp.at) {
      step(cs, state);
      ++steps;
    }
    switch (cp.probe) {
      case Probe::SaveBefore:
        before = state;
        break;
      case Probe::SaveEntry:
        entry = state;
        break;
      case Probe::MustDifferBefore:
        if (state == before) {
          throw Error(ErrorKind::PredictionFailed,
                      what + ": transient not minimal, state(T-1+P) equals state(T-1)");
        }
        break;
      case Probe::MustDifferDivisor:
        if (state == entry) {
          throw Error(ErrorKind::PredictionFailed,
                      what + ": period not minimal, P/" + std::to_string(cp.divisor) + " is also a period");
        }
        break;
      case Probe::MustEqual:
        if (!(state == entry)) {
          throw Error(ErrorKind::PredictionFailed, what + ": state(T+P) differs from state(T)");
        }
        break;
    }
  }

  CycleReport report;
  report.label = cs.label;
  report.measured_transient = transient;
  report.measured_period = period;
  report.predicted_transient = transient;
  report.predicted_period = period;
  report.certified = true;
  report.steps_executed = steps;
  report.attractor_entry = copy_window(entry);
  return report;
}

}  // namespace nre
