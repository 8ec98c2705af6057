#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nre/construction.hpp"
#include "nre/numeric.hpp"

namespace nre {

/// A RecurrenceSystem scaled by the least common denominator of its
/// weights and threshold, so that one step is pure integer arithmetic.
struct CompiledSystem {
  struct Tap {
    std::uint32_t offset;  // j in x(n - j), 1-based
    std::int64_t weight;   // a_j * denominator
  };

  std::size_t memory = 0;
  std::vector<Tap> taps;  // nonzero weights only, ascending offset
  std::int64_t threshold = 0;
  std::int64_t denominator = 1;
  std::string label;
};

CompiledSystem compile(const RecurrenceSystem& system);

/// Sliding window over the last `memory` outputs x(n - memory)..x(n - 1).
///
/// The window is stored twice back to back so that it is always a
/// contiguous span; a polynomial rolling hash and a popcount are kept up to
/// date so states can be compared and summarized in O(1) on the fast path.
class BitState {
 public:
  BitState() = default;
  explicit BitState(std::span<const std::uint8_t> init);

  std::size_t memory() const noexcept { return memory_; }
  /// Index n of the next output; equals memory() for a fresh state.
  std::uint64_t time() const noexcept { return time_; }
  /// Index of the first element of the window (time() - memory()).
  std::uint64_t start() const noexcept { return time_ - memory_; }
  std::size_t popcount() const noexcept { return ones_; }
  std::uint64_t hash() const noexcept { return hash_; }

  /// Oldest first.
  std::span<const std::uint8_t> window() const noexcept {
    return {buffer_.data() + head_, memory_};
  }
  /// x(n - j) for 1 <= j <= memory.
  std::uint8_t back(std::size_t j) const noexcept { return buffer_[head_ + memory_ - j]; }

  void push(std::uint8_t bit) noexcept;

  friend bool operator==(const BitState& a, const BitState& b) noexcept;

 private:
  std::size_t memory_ = 0;
  std::vector<std::uint8_t> buffer_;  // 2 * memory
  std::size_t head_ = 0;
  std::uint64_t time_ = 0;
  std::size_t ones_ = 0;
  std::uint64_t hash_ = 0;
  std::uint64_t top_power_ = 1;  // base^(memory - 1)
};

/// sum_j scaled a_j x(n - j) - scaled theta; the next output is 1 iff >= 0.
std::int64_t activation(const CompiledSystem& cs, const BitState& state);

/// Computes x(n), slides the window and returns the new bit.
std::uint8_t step(const CompiledSystem& cs, BitState& state);

/// Advances `state` by `steps` outputs without storing them.
void advance(const CompiledSystem& cs, BitState& state, std::uint64_t steps);

/// Full trace x(0)..x(memory + steps - 1); the prefix equals init.
Bits run(const CompiledSystem& cs, const Bits& init, std::uint64_t steps);

/// Reference evaluation straight from the rational weights: every window
/// position is visited and the comparison is done in exact rationals.
Bits dense_oracle_run(const RecurrenceSystem& system, const Bits& init, std::uint64_t steps);

/// Yields x(0), x(1), ... one value at a time in constant memory.
class Stream {
 public:
  Stream(const CompiledSystem& cs, const Bits& init);

  std::uint8_t next();
  /// Index of the value the next call to next() returns.
  std::uint64_t index() const noexcept { return index_; }
  const BitState& state() const noexcept { return state_; }

 private:
  const CompiledSystem* cs_;
  BitState state_;
  std::uint64_t index_ = 0;
};

}  // namespace nre
