#include <doctest.h>

#include <random>
#include <vector>

#include "nre/construction.hpp"
#include "nre/engine.hpp"
#include "nre/error.hpp"

using namespace nre;

namespace {

RecurrenceSystem random_system(std::mt19937_64& rng) {
  RecurrenceSystem s;
  const std::size_t memory = 1 + rng() % 24;
  for (std::size_t j = 0; j < memory; ++j) {
    if (rng() % 3 == 0) {
      s.weights.emplace_back(0);
    } else {
      const auto num = static_cast<long long>(rng() % 21) - 10;
      const auto den = static_cast<long long>(1 + rng() % 12);
      s.weights.emplace_back(num, den);
    }
  }
  s.threshold = Rational(static_cast<long long>(rng() % 17) - 8, static_cast<long long>(1 + rng() % 9));
  for (std::size_t j = 0; j < memory; ++j) s.init.push_back(static_cast<std::uint8_t>(rng() & 1u));
  s.label = "random";
  return s;
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("compile scales to integers") {
  const WindowParams p = window_params(6);
  const CompiledSystem y = compile(build_y(p));
  CHECK(y.denominator == 1);
  CHECK(y.taps.size() == 8);
  CHECK(y.threshold == 4);
  const CompiledSystem z = compile(build_z(p, 0));
  CHECK(z.denominator == 80);
  CHECK(z.threshold == 241);

  RecurrenceSystem empty;
  empty.weights = {Rational(0), Rational(0)};
  empty.threshold = 0;
  const CompiledSystem zero = compile(empty);
  CHECK(zero.taps.empty());
  BitState state(Bits{1, 1});
  CHECK(step(zero, state) == 1);
  empty.threshold = Rational(1, 2);
  BitState again(Bits{1, 1});
  CHECK(step(compile(empty), again) == 0);
}

TEST_CASE("compile reports overflow") {
  RecurrenceSystem s;
  s.weights = {Rational(BigInt(1) << 70)};
  s.threshold = 0;
  s.init = {0};
  try {
    compile(s);
    FAIL("expected Overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }
}

TEST_CASE("bit state window") {
  BitState s(Bits{1, 0, 1, 1});
  CHECK(s.memory() == 4);
  CHECK(s.time() == 4);
  CHECK(s.popcount() == 3);
  CHECK(s.back(1) == 1);
  CHECK(s.back(3) == 0);
  s.push(0);
  CHECK(s.time() == 5);
  CHECK(s.start() == 1);
  CHECK(std::vector<std::uint8_t>(s.window().begin(), s.window().end()) == std::vector<std::uint8_t>{0, 1, 1, 0});
  CHECK(s.popcount() == 2);
  const BitState fresh(Bits{0, 1, 1, 0});
  CHECK(s == fresh);
  CHECK(s.hash() == fresh.hash());
  CHECK_FALSE(s == BitState(Bits{0, 1, 1, 1}));
}

TEST_CASE("x and v traces") {
  const WindowParams p = window_params(6);
  const RecurrenceSystem x = build_x(p, 0);
  const Bits trace = run(compile(x), x.init, 20);
  CHECK(trace[70] == 1);
  for (std::size_t n = 71; n <= 86; ++n) CHECK(trace[n] == 0);
  CHECK(trace[87] == 1);

  for (int i = 0; i < p.rho; ++i) {
    const RecurrenceSystem v = build_v(p, i);
    const Bits vt = run(compile(v), v.init, 200);
    for (std::size_t n = 70; n < vt.size(); ++n) CHECK(vt[n] == 0);
  }
}

TEST_CASE("run keeps the prefix and is deterministic") {
  const WindowParams p = window_params(6);
  const RecurrenceSystem y = build_y(p);
  const CompiledSystem cs = compile(y);
  CHECK(run(cs, y.init, 0) == y.init);
  const Bits a = run(cs, y.init, 1000);
  const Bits b = run(cs, y.init, 1000);
  CHECK(a == b);
  CHECK(Bits(a.begin(), a.begin() + 140) == y.init);
  for (std::size_t t = 0; t + 442 < a.size(); ++t) CHECK(a[t] == a[t + 442]);
}

TEST_CASE("z(.,0) tail is 26-periodic") {
  const WindowParams p = window_params(6);
  const RecurrenceSystem z = build_z(p, 0);
  const Bits trace = run(compile(z), z.init, 400);
  for (std::size_t t = 139; t + 26 < trace.size(); ++t) CHECK(trace[t] == trace[t + 26]);
}

TEST_CASE("stream matches run") {
  const WindowParams p = window_params(11);
  const RecurrenceSystem z = build_z(p, 1);
  const CompiledSystem cs = compile(z);
  const Bits trace = run(cs, z.init, 2000);
  Stream stream(cs, z.init);
  for (std::size_t t = 0; t < trace.size(); ++t) {
    CHECK(stream.index() == t);
    CHECK(stream.next() == trace[t]);
  }
}

TEST_CASE("advance equals run") {
  const WindowParams p = window_params(6);
  const RecurrenceSystem z = build_z(p, 1);
  const CompiledSystem cs = compile(z);
  const Bits trace = run(cs, z.init, 500);
  BitState state(z.init);
  advance(cs, state, 500);
  CHECK(state.time() == 640);
  const Bits tail(trace.end() - 140, trace.end());
  CHECK(state == BitState(tail));
}

TEST_CASE("shape mismatch") {
  const WindowParams p = window_params(6);
  const CompiledSystem cs = compile(build_y(p));
  BitState wrong(Bits{0, 1});
  CHECK_THROWS_AS(step(cs, wrong), Error);
  CHECK_THROWS_AS(run(cs, Bits{0, 1}, 3), Error);
}

TEST_CASE("sparse engine matches the dense rational oracle on random systems") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const RecurrenceSystem s = random_system(rng);
    CHECK(run(compile(s), s.init, 400) == dense_oracle_run(s, s.init, 400));
  }
}

TEST_CASE("sparse engine matches the dense rational oracle on the constructed systems") {
  for (int m : {6, 11}) {
    const WindowParams p = window_params(m);
    const RecurrenceSystem y = build_y(p);
    CHECK(run(compile(y), y.init, 10000) == dense_oracle_run(y, y.init, 10000));
    for (int d = 0; d < p.rho; ++d) {
      const RecurrenceSystem z = build_z(p, d);
      CHECK(run(compile(z), z.init, 10000) == dense_oracle_run(z, z.init, 10000));
    }
  }
}

}
