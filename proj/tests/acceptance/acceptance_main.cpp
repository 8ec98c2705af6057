// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "nre/construction.hpp"
#include "nre/cycles.hpp"
#include "nre/engine.hpp"
#include "nre/error.hpp"
#include "nre/verify.hpp"

using namespace nre;

namespace {

struct Outcome {
  bool passed = true;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok && passed) {
      passed = false;
      note = what;
    }
  }
};

using Pair = std::pair<std::uint64_t, std::uint64_t>;

Pair measured(const RecurrenceSystem& s) {
  const CycleReport r = detect_cycle(compile(s), s.init, 100'000'000);
  return {r.measured_transient, r.measured_period};
}

std::string text(Pair p) { return "(" + std::to_string(p.first) + ", " + std::to_string(p.second) + ")"; }

void expect_pair(Outcome& o, const RecurrenceSystem& s, Pair want) {
  const Pair got = measured(s);
  o.require(got == want, s.label + " measured " + text(got) + ", expected " + text(want));
}

Outcome criterion1() {
  Outcome o;
  const WindowParams p = window_params(6);
  expect_pair(o, build_x(p, 0), {0, 17});
  expect_pair(o, build_x(p, 1), {0, 13});
  expect_pair(o, build_v(p, 0), {53, 1});
  expect_pair(o, build_v(p, 1), {57, 1});
  expect_pair(o, build_y(p), {0, 442});
  expect_pair(o, build_w(p, 0), {105, 26});
  expect_pair(o, build_w(p, 1), {114, 1});
  expect_pair(o, build_z(p, 0), {139, 26});
  expect_pair(o, build_z(p, 1), {556, 1});
  return o;
}

Outcome criterion2() {
  Outcome o;
  const WindowParams p = window_params(11);
  const std::uint64_t primes[] = {31, 29, 23};
  for (int i = 0; i < 3; ++i) expect_pair(o, build_x(p, i), {0, primes[i]});
  expect_pair(o, build_y(p), {0, 62031});
  const Pair z[] = {{583, 2001}, {3194, 69}, {62547, 1}};
  for (int d = 0; d < 3; ++d) {
    expect_pair(o, build_z(p, d), z[d]);
    o.require(z[d].first == predict_z(p, d).transient, "L4(" + std::to_string(d) + ") disagrees");
  }
  return o;
}

Outcome from_claims(const std::vector<ClaimResult>& results) {
  Outcome o;
  for (const auto& r : results) {
    std::string where = std::string(claim_info(r.claim).id);
    if (r.m) where += " m=" + std::to_string(*r.m);
    if (r.d) where += " d=" + std::to_string(*r.d);
    o.require(r.passed, where + ": " + r.detail);
  }
  return o;
}

Outcome criterion3() {
  std::vector<ClaimResult> results{check_chain(6), check_chain(11)};
  Outcome o = from_claims(results);
  for (const auto& r : results) {
    for (const auto& ok : r.evidence["divides"]) o.require(ok.get<bool>(), "divisibility flag false");
    o.require(r.cycles.back().zero_fixed_point(), "final attractor is not the zero fixed point");
  }
  return o;
}

Outcome criterion4() {
  std::vector<ClaimResult> results;
  for (int d = 0; d < 2; ++d) results.push_back(check_phases(6, d));
  for (int d = 0; d < 3; ++d) results.push_back(check_phases(11, d));
  Outcome o = from_claims(results);
  for (const auto& r : results) {
    o.require(r.evidence["anomalies"] == *r.d + 1, "anomaly count");
  }
  o.require(results[1].evidence["phase3_steps"] == 0 && results[4].evidence["phase3_steps"] == 0,
            "phase 3 not empty at d = rho - 1");
  return o;
}

Outcome criterion5() {
  std::vector<ClaimResult> results;
  for (int m : {6, 11, 16}) {
    results.push_back(check_static(Claim::Prop1, m));
    results.push_back(check_static(Claim::Prop2, m));
  }
  return from_claims(results);
}

Outcome criterion6() {
  Outcome o = from_claims({check_static(Claim::B0MethodsAgree, 6), check_static(Claim::B0MethodsAgree, 11)});
  const WindowParams p = window_params(6);
  o.require(compute_B0(p, 0, B0Method::Algebraic).size() == 10, "Tot(0) for m = 6 is not 10");
  return o;
}

Outcome criterion7() {
  Outcome o = from_claims({check_static(Claim::ChainEqualsDirect, 6), check_static(Claim::ChainEqualsDirect, 11)});
  for (int m : {6, 11}) {
    const WindowParams p = window_params(m);
    RecurrenceSystem z = build_z(p, 0);
    for (int d = 0; d + 1 < p.rho; ++d) {
      z = chain_perturbation(z, perturbation_plan(p, d), perturbation_plan(p, d + 1));
      const RecurrenceSystem direct = build_z(p, d + 1);
      o.require(z.weights == direct.weights && z.threshold == direct.threshold, "chained " + z.label + " differs");
    }
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  constexpr std::uint64_t kSteps = 10'000;
  for (int m : {6, 11}) {
    const WindowParams p = window_params(m);
    std::vector<RecurrenceSystem> systems{build_y(p)};
    for (int d = 0; d < p.rho; ++d) systems.push_back(build_z(p, d));
    for (const auto& s : systems) {
      o.require(run(compile(s), s.init, kSteps) == dense_oracle_run(s, s.init, kSteps), s.label + " differs from oracle");
    }
  }
  return o;
}

Outcome criterion9() {
  std::vector<ClaimResult> results{check_basin(6, 0), check_basin(6, 1)};
  Outcome o = from_claims(results);
  o.require(results[0].evidence["variants"] == 4 && results[1].evidence["variants"] == 2, "variant counts");
  return o;
}

Outcome criterion10() {
  return from_claims({check_composition(Claim::Example1Period2), check_composition(Claim::Example1Period3),
                      check_composition(Claim::DivisorRule, 1)});
}

Outcome criterion11() {
  Outcome o;
  const WindowParams p = window_params(16);
  const RecurrenceSystem y = build_y(p);
  const Prediction predicted = predict_y(p);
  o.require(predicted.period == 4ull * 37 * 41 * 43 * 47, "predicted period");
  try {
    const CycleReport r = verify_predicted(compile(y), y.init, predicted.transient, predicted.period);
    o.require(r.certified && r.measured_period == 12'263'428, "not certified");
  } catch (const Error& e) {
    o.require(false, e.what());
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* summary;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "m=6 measured (T,P) for x, v, y, w, z", 1.0, criterion1},
      {2, "m=11 x periods, y cycle, z chain with L4 transients", 30.0, criterion2},
      {3, "period chain divisibility ending at the zero fixed point", 60.0, criterion3},
      {4, "phase windows with d+1 anomalies", 60.0, criterion4},
      {5, "Prop 1 and Prop 2 for m in {6, 11, 16}", 60.0, criterion5},
      {6, "B0 algebraic = definitional; Tot(0)=10 at m=6", 60.0, criterion6},
      {7, "chained perturbation = direct build", 60.0, criterion7},
      {8, "sparse engine = dense rational oracle over 10^4 steps", 60.0, criterion8},
      {9, "basin variants at m=6 share the attractor", 60.0, criterion9},
      {10, "composition periods 2, 3 and P | r", 60.0, criterion10},
      {11, "m=16 y cycle certified by verify_predicted", 300.0, criterion11},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.note = e.what();
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.passed && elapsed > c.limit_seconds) {
      o.passed = false;
      o.note = "over the " + std::to_string(c.limit_seconds) + " s runtime limit";
    }
    std::printf("%s criterion %2d: %s (%.3f s)%s%s\n", o.passed ? "PASS" : "FAIL", c.id, c.summary, elapsed,
                o.note.empty() ? "" : " -- ", o.note.c_str());
    if (!o.passed) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
