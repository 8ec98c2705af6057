#include "nre/engine.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

#include "nre/error.hpp"

namespace nre {

namespace {

constexpr std::uint64_t kHashBase = 0x9E3779B97F4A7C15ull;

void require_init(std::size_t memory, std::size_t init_size, const std::string& label) {
  if (init_size != memory) {
    throw Error(ErrorKind::ShapeMismatch, label + ": init has " + std::to_string(init_size) +
                                              " bits, memory is " + std::to_string(memory));
  }
}

}  // namespace

CompiledSystem compile(const RecurrenceSystem& system) {
  BigInt lcd = denominator(system.threshold);
  for (const Rational& w : system.weights) {
    const BigInt& den = denominator(w);
    lcd = lcd / boost::multiprecision::gcd(lcd, den) * den;
  }

  CompiledSystem cs;
  cs.memory = system.memory();
  cs.label = system.label;
  cs.denominator = to_i64(lcd);

  BigInt magnitude = 0;
  for (std::size_t j = 1; j <= system.memory(); ++j) {
    const Rational& w = system.weights[j - 1];
    if (w == 0) continue;
    const BigInt scaled = numerator(w) * (lcd / denominator(w));
    magnitude += abs(scaled);
    cs.taps.push_back({static_cast<std::uint32_t>(j), to_i64(scaled)});
  }
  const BigInt scaled_threshold = numerator(system.threshold) * (lcd / denominator(system.threshold));
  magnitude += abs(scaled_threshold);
  if (magnitude > std::numeric_limits<std::int64_t>::max()) {
    throw Error(ErrorKind::Overflow, system.label + ": scaled affine form can overflow 64 bits");
  }
  cs.threshold = to_i64(scaled_threshold);
  return cs;
}

BitState::BitState(std::span<const std::uint8_t> init)
    : memory_(init.size()), buffer_(2 * init.size()), time_(init.size()) {
  for (std::size_t i = 0; i < memory_; ++i) {
    const std::uint8_t bit = init[i] ? 1 : 0;
    buffer_[i] = buffer_[i + memory_] = bit;
    ones_ += bit;
    hash_ = hash_ * kHashBase + bit;
  }
  for (std::size_t i = 1; i < memory_; ++i) top_power_ *= kHashBase;
}

void BitState::push(std::uint8_t bit) noexcept {
  const std::uint8_t oldest = buffer_[head_];
  buffer_[head_] = buffer_[head_ + memory_] = bit;
  head_ = head_ + 1 == memory_ ? 0 : head_ + 1;
  ones_ += bit;
  ones_ -= oldest;
  hash_ = (hash_ - oldest * top_power_) * kHashBase + bit;
  ++time_;
}

bool operator==(const BitState& a, const BitState& b) noexcept {
  if (a.memory_ != b.memory_ || a.hash_ != b.hash_ || a.ones_ != b.ones_) return false;
  return std::memcmp(a.window().data(), b.window().data(), a.memory_) == 0;
}

std::int64_t activation(const CompiledSystem& cs, const BitState& state) {
  std::int64_t sum = -cs.threshold;
  for (const auto& tap : cs.taps) {
    if (state.back(tap.offset)) sum += tap.weight;
  }
  return sum;
}

std::uint8_t step(const CompiledSystem& cs, BitState& state) {
  if (state.memory() != cs.memory) {
    throw Error(ErrorKind::ShapeMismatch, cs.label + ": state length " +
                                              std::to_string(state.memory()) + " != memory " +
                                              std::to_string(cs.memory));
  }
  const std::uint8_t bit = activation(cs, state) >= 0 ? 1 : 0;
  state.push(bit);
  return bit;
}

void advance(const CompiledSystem& cs, BitState& state, std::uint64_t steps) {
  for (std::uint64_t s = 0; s < steps; ++s) step(cs, state);
}

Bits run(const CompiledSystem& cs, const Bits& init, std::uint64_t steps) {
  require_init(cs.memory, init.size(), cs.label);
  Bits trace(init);
  trace.reserve(init.size() + steps);
  BitState state(init);
  for (std::uint64_t s = 0; s < steps; ++s) trace.push_back(step(cs, state));
  return trace;
}

Bits dense_oracle_run(const RecurrenceSystem& system, const Bits& init, std::uint64_t steps) {
  const std::size_t memory = system.memory();
  require_init(memory, init.size(), system.label);
  Bits trace(init);
  trace.reserve(init.size() + steps);
  for (std::uint64_t s = 0; s < steps; ++s) {
    const std::size_t n = trace.size();
    Rational sum = 0;
    for (std::size_t j = 1; j <= memory; ++j) {
      if (trace[n - j]) sum += system.weights[j - 1];
    }
    trace.push_back(sum - system.threshold >= 0 ? 1 : 0);
  }
  return trace;
}

Stream::Stream(const CompiledSystem& cs, const Bits& init) : cs_(&cs), state_(init) {
  require_init(cs.memory, init.size(), cs.label);
}

std::uint8_t Stream::next() {
  const std::uint64_t n = index_++;
  if (n < state_.memory()) return state_.window()[n];
  return step(*cs_, state_);
}

}  // namespace nre
