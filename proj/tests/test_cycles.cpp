#include <doctest.h>

#include <functional>
#include <map>
#include <random>
#include <string>

#include "nre/construction.hpp"
#include "nre/cycles.hpp"
#include "nre/engine.hpp"
#include "nre/error.hpp"

using namespace nre;

namespace {

struct Pair {
  std::uint64_t transient;
  std::uint64_t period;
};

// Records every window until one repeats.
Pair brute_force_cycle(const CompiledSystem& cs, const Bits& init) {
  std::map<std::string, std::uint64_t> seen;
  BitState state(init);
  for (std::uint64_t s = 0;; ++s) {
    const auto w = state.window();
    const std::string key(w.begin(), w.end());
    const auto [it, inserted] = seen.emplace(key, s);
    if (!inserted) return {it->second, s - it->second};
    step(cs, state);
  }
}

RecurrenceSystem random_system(std::mt19937_64& rng) {
  RecurrenceSystem s;
  const std::size_t memory = 1 + rng() % 12;
  for (std::size_t j = 0; j < memory; ++j) {
    s.weights.emplace_back(static_cast<long long>(rng() % 9) - 4, static_cast<long long>(1 + rng() % 4));
  }
  s.threshold = Rational(static_cast<long long>(rng() % 9) - 4, static_cast<long long>(1 + rng() % 3));
  for (std::size_t j = 0; j < memory; ++j) s.init.push_back(static_cast<std::uint8_t>(rng() & 1u));
  s.label = "random";
  return s;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Io;
}

}  // namespace

TEST_SUITE("cycles") {

TEST_CASE("Brent agrees with a brute-force oracle on random systems") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 400; ++trial) {
    const RecurrenceSystem s = random_system(rng);
    const CompiledSystem cs = compile(s);
    const Pair expected = brute_force_cycle(cs, s.init);
    const CycleReport report = detect_cycle(cs, s.init, 1'000'000);
    CHECK(report.measured_transient == expected.transient);
    CHECK(report.measured_period == expected.period);
    CHECK(report.certified);
  }
}

TEST_CASE("Brent agrees with the oracle on the m = 6 systems") {
  const WindowParams p = window_params(6);
  std::vector<RecurrenceSystem> systems{build_x(p, 0), build_x(p, 1), build_v(p, 0), build_v(p, 1), build_y(p)};
  for (int d = 0; d < p.rho; ++d) {
    systems.push_back(build_w(p, d));
    systems.push_back(build_z(p, d));
  }
  for (const auto& s : systems) {
    const CompiledSystem cs = compile(s);
    const Pair expected = brute_force_cycle(cs, s.init);
    const CycleReport report = detect_cycle(cs, s.init, 1'000'000);
    CHECK_MESSAGE(report.measured_transient == expected.transient, s.label);
    CHECK_MESSAGE(report.measured_period == expected.period, s.label);
  }
}

TEST_CASE("measured pairs for m = 6") {
  const WindowParams p = window_params(6);
  const auto pair = [](const RecurrenceSystem& s) {
    const CycleReport r = detect_cycle(compile(s), s.init, 1'000'000);
    return std::make_pair(r.measured_transient, r.measured_period);
  };
  using P = std::pair<std::uint64_t, std::uint64_t>;
  CHECK(pair(build_x(p, 0)) == P{0, 17});
  CHECK(pair(build_x(p, 1)) == P{0, 13});
  CHECK(pair(build_v(p, 0)) == P{53, 1});
  CHECK(pair(build_v(p, 1)) == P{57, 1});
  CHECK(pair(build_y(p)) == P{0, 442});
  CHECK(pair(build_w(p, 0)) == P{105, 26});
  CHECK(pair(build_w(p, 1)) == P{114, 1});
  CHECK(pair(build_z(p, 0)) == P{139, 26});
  CHECK(pair(build_z(p, 1)) == P{556, 1});
}

TEST_CASE("prediction flags") {
  const WindowParams p = window_params(6);
  const RecurrenceSystem z = build_z(p, 0);
  const CompiledSystem cs = compile(z);
  CycleReport ok = detect_cycle(cs, z.init, 1'000'000, predict_z(p, 0));
  CHECK(ok.matches());
  CHECK(ok.predicted_period == 26u);
  CycleReport off = detect_cycle(cs, z.init, 1'000'000, Prediction{138, 26});
  CHECK_FALSE(off.transient_match);
  CHECK(off.period_match);
  CHECK_FALSE(off.matches());
}

TEST_CASE("zero fixed point") {
  const WindowParams p = window_params(6);
  const RecurrenceSystem v = build_v(p, 0);
  CHECK(detect_cycle(compile(v), v.init, 10'000).zero_fixed_point());
  const RecurrenceSystem y = build_y(p);
  CHECK_FALSE(detect_cycle(compile(y), y.init, 10'000).zero_fixed_point());
}

TEST_CASE("budget") {
  const WindowParams p = window_params(6);
  const RecurrenceSystem y = build_y(p);
  CHECK(kind_of([&] { detect_cycle(compile(y), y.init, 100); }) == ErrorKind::BudgetExceeded);
}

TEST_CASE("verify_predicted") {
  const WindowParams p = window_params(6);
  const RecurrenceSystem y = build_y(p);
  const CompiledSystem ycs = compile(y);
  const CycleReport r = verify_predicted(ycs, y.init, 0, 442);
  CHECK(r.certified);
  CHECK(r.measured_period == 442);
  CHECK(kind_of([&] { verify_predicted(ycs, y.init, 0, 221); }) == ErrorKind::PredictionFailed);
  CHECK(kind_of([&] { verify_predicted(ycs, y.init, 0, 884); }) == ErrorKind::PredictionFailed);

  const RecurrenceSystem z = build_z(p, 0);
  const CompiledSystem zcs = compile(z);
  CHECK(verify_predicted(zcs, z.init, 139, 26).certified);
  // Not minimal in T, and a period that is not a period at all.
  CHECK(kind_of([&] { verify_predicted(zcs, z.init, 140, 26); }) == ErrorKind::PredictionFailed);
  CHECK(kind_of([&] { verify_predicted(zcs, z.init, 138, 26); }) == ErrorKind::PredictionFailed);
  CHECK(kind_of([&] { verify_predicted(zcs, z.init, 139, 13); }) == ErrorKind::PredictionFailed);
  CHECK(kind_of([&] { verify_predicted(zcs, z.init, 139, 0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("verify_predicted agrees with detection on random systems") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const RecurrenceSystem s = random_system(rng);
    const CompiledSystem cs = compile(s);
    const Pair expected = brute_force_cycle(cs, s.init);
    CHECK(verify_predicted(cs, s.init, expected.transient, expected.period).certified);
    if (expected.period > 1) {
      CHECK(kind_of([&] { verify_predicted(cs, s.init, expected.transient, 2 * expected.period); }) ==
            ErrorKind::PredictionFailed);
    }
  }
}

TEST_CASE("m = 11 pairs") {
  const WindowParams p = window_params(11);
  const RecurrenceSystem y = build_y(p);
  const CycleReport ry = detect_cycle(compile(y), y.init, 10'000'000, predict_y(p));
  CHECK(ry.measured_period == 62031);
  CHECK(ry.measured_transient == 0);
  const std::uint64_t transients[] = {583, 3194, 62547};
  const std::uint64_t periods[] = {2001, 69, 1};
  for (int d = 0; d < p.rho; ++d) {
    const RecurrenceSystem z = build_z(p, d);
    const CycleReport r = detect_cycle(compile(z), z.init, 10'000'000);
    CHECK(r.measured_transient == transients[d]);
    CHECK(r.measured_period == periods[d]);
  }
}

}
