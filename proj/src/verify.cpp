#include "nre/verify.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <thread>

#include "nre/error.hpp"
#include "nre/numtheory.hpp"

namespace nre {

namespace {

constexpr std::array<ClaimInfo, 20> kInventory{{
    {Claim::WindowParamBounds, "window_param_bounds", ClaimKind::Static, false,
     "primes lie in (2m,3m) descending; rho <= ceil((m-1)/2); 2rho <= mu_i <= 3rho; k = p_i mu_i + beta_i"},
    {Claim::Prop1, "prop1", ClaimKind::Static, false,
     "card E(alpha_i, d) <= rho - 1 for every lane i and 1 <= d < p_i"},
    {Claim::Prop2, "prop2", ClaimKind::Static, false,
     "the single-unit weights on Pos(alpha_i) sum to 2 rho for every lane"},
    {Claim::PosDisjoint, "pos_disjoint", ClaimKind::Static, false,
     "Pos sets are pairwise disjoint, F is their union, weights vanish on G, Pos marks the ones of phi"},
    {Claim::XCycle, "x_cycle", ClaimKind::Dynamics, false,
     "x^{alpha_i} is purely periodic with period p_i, x(k) = 1 and x(k+t) = 0 for 1 <= t < p_i"},
    {Claim::VFixed, "v_fixed", ClaimKind::Dynamics, false,
     "v^{alpha_i} reaches the all-zero fixed point after k - p_i steps with activation <= theta - 2"},
    {Claim::SumBounds, "sum_bounds", ClaimKind::Dynamics, false,
     "window popcounts of x, y and w stay within their mu-based bounds"},
    {Claim::S1Range, "s1_range", ClaimKind::Dynamics, false,
     "single-unit activations lie in [-2(1+mu_i), theta-1] or equal theta, so lambda = -1 is admissible"},
    {Claim::YCycle, "y_cycle", ClaimKind::Dynamics, false, "y is purely periodic with period L2"},
    {Claim::YDeshuffle, "y_deshuffle", ClaimKind::Dynamics, false,
     "y(q rho + i) = x^{alpha_i}(1 + q) along the simulated trace"},
    {Claim::WCycle, "w_cycle", ClaimKind::Dynamics, true,
     "w(., d) has transient rho(k - p_d - 1) + d + 1 and period L0(d)"},
    {Claim::B0MethodsAgree, "b0_methods_agree", ClaimKind::Static, false,
     "the residue-class construction of B0(d) equals the scan of the y window"},
    {Claim::ChainEqualsDirect, "chain_equals_direct", ClaimKind::Static, false,
     "the four-case update of z(., d) reproduces z(., d+1) exactly"},
    {Claim::Phases, "phases", ClaimKind::Phases, true,
     "z(., d) follows y, drops d+1 ones, then tracks w(., d) shifted by L1(d)"},
    {Claim::ZSummary, "z_summary", ClaimKind::Dynamics, true,
     "z(., d) has transient L4(d) and period L0(d)"},
    {Claim::Chain, "chain", ClaimKind::Chain, false,
     "P(z(., d+1)) | P(z(., d)) | P(y) and z(., rho-1) ends in the all-zero fixed point"},
    {Claim::Basin, "basin", ClaimKind::Basin, true,
     "free prefixes of length beta_e - d do not change the attractor of z(., d)"},
    {Claim::Example1Period2, "example1_period2", ClaimKind::Composition, false,
     "shuffling six constant lanes 0,1,0,1,0,1 yields period 2"},
    {Claim::Example1Period3, "example1_period3", ClaimKind::Composition, false,
     "shuffling six constant lanes 0,0,1,0,0,1 yields period 3"},
    {Claim::DivisorRule, "divisor_rule", ClaimKind::Composition, false,
     "shuffling r fixed-point lanes yields a period dividing r"},
}};

std::string pair_text(std::uint64_t t, std::uint64_t p) {
  return "(" + std::to_string(t) + ", " + std::to_string(p) + ")";
}

/// Collects the outcome of a check; the first failure supplies the
/// counterexample, later ones are only counted.
class Recorder {
 public:
  Recorder(Claim claim, std::optional<int> m, std::optional<int> d = std::nullopt) {
    result_.claim = claim;
    result_.m = m;
    result_.d = d;
    result_.passed = true;
  }

  void fail(std::string where, std::int64_t index, std::string expected, std::string observed) {
    ++violations_;
    if (result_.passed) {
      result_.passed = false;
      result_.detail = where + " at " + std::to_string(index) + ": expected " + expected + ", observed " + observed;
      result_.counterexample = Counterexample{std::move(where), index, std::move(expected), std::move(observed)};
    }
  }

  void expect_bits(bool ok, const std::string& where, std::uint64_t t, int expected, int observed) {
    if (!ok) fail(where, static_cast<std::int64_t>(t), std::to_string(expected), std::to_string(observed));
  }

  void cycle(const std::string& where, const CycleReport& report) {
    if (!report.matches()) {
      fail(where, static_cast<std::int64_t>(report.measured_transient),
           pair_text(report.predicted_transient.value_or(0), report.predicted_period.value_or(0)),
           pair_text(report.measured_transient, report.measured_period));
    }
    result_.cycles.push_back(report);
  }

  nlohmann::json& evidence() { return result_.evidence; }

  ClaimResult finish() {
    result_.evidence["violations"] = violations_;
    if (result_.passed && result_.detail.empty()) result_.detail = "ok";
    return std::move(result_);
  }

 private:
  ClaimResult result_;
  std::uint64_t violations_ = 0;
};

CycleReport measure(const CompiledSystem& cs, const Bits& init, const Prediction& predicted,
                    const CheckOptions& options) {
  if (predicted.transient + predicted.period <= options.detect_limit) {
    return detect_cycle(cs, init, options.step_budget, predicted);
  }
  return verify_predicted(cs, init, predicted.transient, predicted.period);
}

std::uint64_t capped(std::uint64_t want, const CheckOptions& options) {
  return std::min(want, options.window_cap);
}

// Static claims --------------------------------------------------------------

ClaimResult window_param_bounds(int m) {
  Recorder rec(Claim::WindowParamBounds, m);
  const WindowParams p = window_params(m);
  int expected_count = 0;
  for (int c = 2 * m + 1; c < 3 * m; ++c) expected_count += is_prime(static_cast<std::uint64_t>(c)) ? 1 : 0;
  if (expected_count != p.rho) rec.fail("rho", m, std::to_string(expected_count), std::to_string(p.rho));
  if (p.rho > m / 2) rec.fail("rho bound", m, "<= " + std::to_string(m / 2), std::to_string(p.rho));
  if (p.k != (6 * m - 1) * p.rho) rec.fail("k", m, std::to_string((6 * m - 1) * p.rho), std::to_string(p.k));
  if (p.h != p.rho * p.k) rec.fail("h", m, std::to_string(p.rho * p.k), std::to_string(p.h));
  for (int i = 0; i < p.rho; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const int prime = p.prime(i);
    if (!is_prime(static_cast<std::uint64_t>(prime)) || prime <= 2 * m || prime >= 3 * m) {
      rec.fail("prime in (2m,3m)", i, "prime in window", std::to_string(prime));
    }
    if (i > 0 && prime >= p.prime(i - 1)) rec.fail("descending primes", i, "< " + std::to_string(p.prime(i - 1)), std::to_string(prime));
    if (p.alphas[idx] != 3 * m - prime) rec.fail("alpha", i, std::to_string(3 * m - prime), std::to_string(p.alphas[idx]));
    if (p.mu[idx] < 2 * p.rho || p.mu[idx] > 3 * p.rho) {
      rec.fail("mu bounds", i, "[" + std::to_string(2 * p.rho) + ", " + std::to_string(3 * p.rho) + "]", std::to_string(p.mu[idx]));
    }
    if (p.k != prime * p.mu[idx] + p.beta_m[idx]) rec.fail("k = p mu + beta", i, std::to_string(p.k), std::to_string(prime * p.mu[idx] + p.beta_m[idx]));
    if (p.beta_m[idx] < 0 || p.beta_m[idx] >= prime) rec.fail("beta range", i, "[0, p_i)", std::to_string(p.beta_m[idx]));
  }
  rec.evidence()["primes"] = p.primes;
  rec.evidence()["rho"] = p.rho;
  rec.evidence()["k"] = p.k;
  rec.evidence()["h"] = p.h;
  rec.evidence()["mu"] = p.mu;
  rec.evidence()["beta"] = p.beta_m;
  return rec.finish();
}

ClaimResult prop1(int m) {
  Recorder rec(Claim::Prop1, m);
  const WindowParams p = window_params(m);
  const IndexSets sets = index_sets(p);
  std::vector<int> max_card;
  std::uint64_t cases = 0;
  for (int i = 0; i < p.rho; ++i) {
    int worst = 0;
    for (int d = 1; d < p.prime(i); ++d) {
      const int card = static_cast<int>(e_set(p, sets, i, d).size());
      worst = std::max(worst, card);
      ++cases;
      if (card > p.rho - 1) {
        rec.fail("card E(i=" + std::to_string(i) + ", d)", d, "<= " + std::to_string(p.rho - 1), std::to_string(card));
      }
    }
    max_card.push_back(worst);
  }
  rec.evidence()["max_card_e"] = max_card;
  rec.evidence()["cases"] = cases;
  return rec.finish();
}

ClaimResult prop2(int m) {
  Recorder rec(Claim::Prop2, m);
  const WindowParams p = window_params(m);
  const auto a = single_weights(p);
  const IndexSets sets = index_sets(p);
  std::vector<int> sums;
  for (int i = 0; i < p.rho; ++i) {
    int sum = 0;
    for (int j : sets.pos[static_cast<std::size_t>(i)]) sum += a[static_cast<std::size_t>(j - 1)];
    sums.push_back(sum);
    if (sum != 2 * p.rho) rec.fail("sum over Pos(alpha_i)", i, std::to_string(2 * p.rho), std::to_string(sum));
  }
  rec.evidence()["sums"] = sums;
  rec.evidence()["parity"] = p.rho % 2 == 0 ? "even" : "odd";
  return rec.finish();
}

ClaimResult pos_disjoint(int m) {
  Recorder rec(Claim::PosDisjoint, m);
  const WindowParams p = window_params(m);
  const IndexSets sets = index_sets(p);
  const auto a = single_weights(p);
  std::map<int, int> owner;
  for (int i = 0; i < p.rho; ++i) {
    for (int j : sets.pos[static_cast<std::size_t>(i)]) {
      if (j < 1 || j > p.k) rec.fail("Pos within D", j, "[1, k]", std::to_string(j));
      auto [it, inserted] = owner.emplace(j, i);
      if (!inserted) rec.fail("Pos overlap", j, "lane " + std::to_string(it->second) + " only", "also lane " + std::to_string(i));
    }
  }
  if (sets.f.size() != owner.size()) rec.fail("card F", 0, std::to_string(owner.size()), std::to_string(sets.f.size()));
  if (sets.f.size() + sets.g.size() != static_cast<std::size_t>(p.k)) {
    rec.fail("F and G partition D", 0, std::to_string(p.k), std::to_string(sets.f.size() + sets.g.size()));
  }
  for (int j : sets.g) {
    if (a[static_cast<std::size_t>(j - 1)] != 0) rec.fail("weight on G", j, "0", std::to_string(a[static_cast<std::size_t>(j - 1)]));
  }
  for (int i = 0; i < p.rho; ++i) {
    const Bits phi = initial_config_x(p, i);
    const auto& pos = sets.pos[static_cast<std::size_t>(i)];
    // Pos picks out the ones of the window among its 2 rho most recent
    // multiples of p_i; older ones fall outside Pos.
    const int reach = 2 * p.rho * p.prime(i);
    for (int j = 1; j <= p.k; ++j) {
      const bool in_pos = std::binary_search(pos.begin(), pos.end(), j);
      const bool one = phi[static_cast<std::size_t>(p.k - j)] != 0;
      const bool expected = j <= reach ? one : false;
      if (in_pos != expected) {
        rec.fail("x^{alpha_" + std::to_string(i) + "}(k - j)", j, expected ? "in Pos" : "outside Pos",
                 in_pos ? "in Pos" : "outside Pos");
      }
    }
  }
  rec.evidence()["card_f"] = sets.f.size();
  rec.evidence()["card_g"] = sets.g.size();
  return rec.finish();
}

ClaimResult b0_methods_agree(int m) {
  Recorder rec(Claim::B0MethodsAgree, m);
  const WindowParams p = window_params(m);
  nlohmann::json per_d = nlohmann::json::array();
  for (int d = 0; d < p.rho; ++d) {
    const auto definitional = compute_B0(p, d, B0Method::Definitional);
    const auto readings = b0_algebraic_readings(p, d);
    const bool class_ok = readings.congruence_class == definitional;
    const bool literal_ok = readings.literal == definitional;
    if (!class_ok) {
      std::vector<int> diff;
      std::set_symmetric_difference(definitional.begin(), definitional.end(), readings.congruence_class.begin(),
                                    readings.congruence_class.end(), std::back_inserter(diff));
      rec.fail("B0(d=" + std::to_string(d) + ") algebraic vs definitional", diff.empty() ? 0 : diff.front(),
               std::to_string(definitional.size()) + " elements", std::to_string(readings.congruence_class.size()) + " elements");
    }
    if (!definitional.empty() && definitional.back() + d > p.h) {
      rec.fail("max B0(d) + d <= h", d, std::to_string(p.h), std::to_string(definitional.back() + d));
    }
    per_d.push_back({{"d", d},
                     {"tot", definitional.size()},
                     {"congruence_class_reading_matches", class_ok},
                     {"literal_reading_matches", literal_ok}});
  }
  rec.evidence()["per_d"] = per_d;
  return rec.finish();
}

ClaimResult chain_equals_direct(int m) {
  Recorder rec(Claim::ChainEqualsDirect, m);
  const WindowParams p = window_params(m);
  RecurrenceSystem z = build_z(p, 0);
  PerturbationPlan plan = perturbation_plan(p, 0);
  int chained = 0;
  for (int d = 0; d + 1 < p.rho; ++d) {
    const PerturbationPlan next_plan = perturbation_plan(p, d + 1);
    const RecurrenceSystem next = chain_perturbation(z, plan, next_plan);
    const RecurrenceSystem direct = build_z(p, d + 1);
    for (std::size_t f = 0; f < direct.memory(); ++f) {
      if (next.weights[f] != direct.weights[f]) {
        rec.fail("c(f, " + std::to_string(d + 1) + ")", static_cast<std::int64_t>(f + 1),
                 to_string(direct.weights[f]), to_string(next.weights[f]));
      }
    }
    if (next.threshold != direct.threshold) {
      rec.fail("theta2(" + std::to_string(d + 1) + ")", d + 1, to_string(direct.threshold), to_string(next.threshold));
    }
    if (next.threshold - z.threshold != next_plan.xi_d - plan.xi_d) {
      rec.fail("threshold telescoping", d, to_string(next_plan.xi_d - plan.xi_d), to_string(next.threshold - z.threshold));
    }
    if (next.init != direct.init) rec.fail("init kept", d + 1, "y init", "different window");
    z = next;
    plan = next_plan;
    ++chained;
  }
  rec.evidence()["chained_steps"] = chained;
  return rec.finish();
}

// Dynamics claims ------------------------------------------------------------

ClaimResult x_cycle(int m, const CheckOptions& options) {
  Recorder rec(Claim::XCycle, m);
  const WindowParams p = window_params(m);
  nlohmann::json periods = nlohmann::json::array();
  for (int i = 0; i < p.rho; ++i) {
    const RecurrenceSystem x = build_x(p, i);
    const CompiledSystem cs = compile(x);
    const CycleReport report = measure(cs, x.init, predict_x(p, i), options);
    rec.cycle(x.label, report);
    periods.push_back(report.measured_period);

    Stream stream(cs, x.init);
    const auto k = static_cast<std::uint64_t>(p.k);
    const auto prime = static_cast<std::uint64_t>(p.prime(i));
    for (std::uint64_t t = 0; t < k + 2 * prime; ++t) {
      const int bit = stream.next();
      const int closed = x_closed_form(p, i, t) ? 1 : 0;
      rec.expect_bits(bit == closed, x.label + " vs closed form", t, closed, bit);
      if (t == k) rec.expect_bits(bit == 1, x.label + "(k)", t, 1, bit);
      if (t > k && t < k + prime) rec.expect_bits(bit == 0, x.label + "(k+t)", t, 0, bit);
    }
  }
  rec.evidence()["periods"] = periods;
  return rec.finish();
}

ClaimResult v_fixed(int m, const CheckOptions& options) {
  Recorder rec(Claim::VFixed, m);
  const WindowParams p = window_params(m);
  nlohmann::json transients = nlohmann::json::array();
  for (int i = 0; i < p.rho; ++i) {
    const RecurrenceSystem v = build_v(p, i);
    const CompiledSystem cs = compile(v);
    const CycleReport report = measure(cs, v.init, predict_v(p, i), options);
    rec.cycle(v.label, report);
    if (!report.zero_fixed_point()) rec.fail(v.label + " attractor", 0, "all-zero fixed point", "other attractor");
    transients.push_back(report.measured_transient);

    if (v.init.back() != 0) rec.fail(v.label + " last init bit", p.k - 1, "0", "1");
    BitState state(v.init);
    const std::int64_t margin = -2 * cs.denominator;  // theta - 2 relative to theta
    for (int s = 0; s < 2 * p.k; ++s) {
      const std::int64_t act = activation(cs, state);
      if (act > margin) {
        rec.fail(v.label + " activation - theta", static_cast<std::int64_t>(state.time()), "<= -2", std::to_string(act));
      }
      const int bit = step(cs, state);
      rec.expect_bits(bit == 0, v.label, state.time() - 1, 0, bit);
    }
  }
  rec.evidence()["transients"] = transients;
  return rec.finish();
}

void window_popcounts(Recorder& rec, const RecurrenceSystem& system, std::uint64_t steps, std::size_t low,
                      std::size_t high) {
  const CompiledSystem cs = compile(system);
  BitState state(system.init);
  for (std::uint64_t s = 0; s <= steps; ++s) {
    if (s > 0) step(cs, state);
    const std::size_t ones = state.popcount();
    if (ones < low || ones > high) {
      rec.fail(system.label + " window sum", static_cast<std::int64_t>(state.time()),
               "[" + std::to_string(low) + ", " + std::to_string(high) + "]", std::to_string(ones));
    }
  }
}

ClaimResult sum_bounds(int m, const CheckOptions& options) {
  Recorder rec(Claim::SumBounds, m);
  const WindowParams p = window_params(m);
  const auto mu_total = static_cast<std::size_t>(std::accumulate(p.mu.begin(), p.mu.end(), 0));

  // x windows at t >= k (the init window itself is t = k).
  for (int i = 0; i < p.rho; ++i) {
    const RecurrenceSystem x = build_x(p, i);
    const auto mu = static_cast<std::size_t>(p.mu[static_cast<std::size_t>(i)]);
    const auto ones = static_cast<std::size_t>(std::count(x.init.begin(), x.init.end(), 1));
    if (ones < mu || ones > mu + 1) rec.fail(x.label + " window sum", p.k, "[mu, mu+1]", std::to_string(ones));
    window_popcounts(rec, x, static_cast<std::uint64_t>(p.k + 2 * p.prime(i)), mu, mu + 1);
  }

  const std::uint64_t l2 = to_u64(cycle_lengths(p, 0).l2);
  window_popcounts(rec, build_y(p), capped(l2 + 1, options), mu_total, static_cast<std::size_t>(p.rho) + mu_total);

  // y activations below threshold are at most lambda = -1.
  {
    const RecurrenceSystem y = build_y(p);
    const CompiledSystem cs = compile(y);
    BitState state(y.init);
    std::int64_t worst = std::numeric_limits<std::int64_t>::min();
    for (std::uint64_t s = 0; s < capped(l2, options); ++s) {
      const std::int64_t act = activation(cs, state);
      if (act < 0) worst = std::max(worst, act);
      step(cs, state);
    }
    rec.evidence()["y_max_subthreshold_margin"] = worst;
    if (worst > -1) rec.fail("y subthreshold margin", 0, "<= -1", std::to_string(worst));
  }

  nlohmann::json w_checked = nlohmann::json::array();
  for (int d = 0; d < p.rho; ++d) {
    std::size_t low = 0;
    for (int i = d + 1; i < p.rho; ++i) low += static_cast<std::size_t>(p.mu[static_cast<std::size_t>(i)]);
    const std::size_t high = static_cast<std::size_t>(p.rho - d - 1) + mu_total;
    const Prediction w = predict_w(p, d);
    window_popcounts(rec, build_w(p, d), capped(w.transient + w.period + static_cast<std::uint64_t>(p.h), options), low, high);
    w_checked.push_back(d);
  }
  rec.evidence()["w_checked_d"] = w_checked;
  return rec.finish();
}

ClaimResult s1_range(int m) {
  Recorder rec(Claim::S1Range, m);
  const WindowParams p = window_params(m);
  const int theta = single_threshold(p);
  int worst_margin = std::numeric_limits<int>::min();
  for (int i = 0; i < p.rho; ++i) {
    const RecurrenceSystem x = build_x(p, i);
    const CompiledSystem cs = compile(x);
    BitState state(x.init);
    const int low = -2 * (1 + p.mu[static_cast<std::size_t>(i)]);
    for (int s = 0; s < 2 * p.prime(i) + p.k; ++s) {
      const auto s1 = static_cast<int>(activation(cs, state) / cs.denominator) + theta;
      const bool ok = s1 == theta || (s1 >= low && s1 <= theta - 1);
      if (!ok) {
        rec.fail(x.label + " activation sum", static_cast<std::int64_t>(state.time()),
                 "[" + std::to_string(low) + ", " + std::to_string(theta - 1) + "] or " + std::to_string(theta),
                 std::to_string(s1));
      }
      if (s1 < theta) worst_margin = std::max(worst_margin, s1 - theta);
      step(cs, state);
    }
  }
  rec.evidence()["max_subthreshold_margin"] = worst_margin;
  rec.evidence()["lambda"] = -1;
  if (worst_margin > -1) rec.fail("lambda admissible", 0, "margin <= -1", std::to_string(worst_margin));
  return rec.finish();
}

ClaimResult y_cycle(int m, const CheckOptions& options) {
  Recorder rec(Claim::YCycle, m);
  const WindowParams p = window_params(m);
  const RecurrenceSystem y = build_y(p);
  const CycleReport report = measure(compile(y), y.init, predict_y(p), options);
  rec.cycle(y.label, report);
  rec.evidence()["transient"] = report.measured_transient;
  rec.evidence()["period"] = report.measured_period;
  rec.evidence()["method"] = report.steps_executed > report.measured_transient + report.measured_period ? "detect" : "verify_predicted";
  return rec.finish();
}

ClaimResult y_deshuffle(int m, const CheckOptions& options) {
  Recorder rec(Claim::YDeshuffle, m);
  const WindowParams p = window_params(m);
  const RecurrenceSystem y = build_y(p);
  const CompiledSystem cs = compile(y);
  Stream stream(cs, y.init);
  const std::uint64_t span = capped(to_u64(cycle_lengths(p, 0).l2) + static_cast<std::uint64_t>(p.h), options);
  const auto rho = static_cast<std::uint64_t>(p.rho);
  for (std::uint64_t t = 0; t < span; ++t) {
    const int bit = stream.next();
    const int expected = x_closed_form(p, static_cast<int>(t % rho), 1 + t / rho) ? 1 : 0;
    rec.expect_bits(bit == expected, "y(t) vs x^{alpha_{t mod rho}}(1 + t div rho)", t, expected, bit);
  }
  rec.evidence()["steps_compared"] = span;
  return rec.finish();
}

std::vector<int> d_range(const WindowParams& p, std::optional<int> d) {
  if (d) {
    if (*d < 0 || *d >= p.rho) throw Error(ErrorKind::IndexOutOfRange, "d=" + std::to_string(*d));
    return {*d};
  }
  std::vector<int> out(static_cast<std::size_t>(p.rho));
  std::iota(out.begin(), out.end(), 0);
  return out;
}

ClaimResult w_cycle(int m, std::optional<int> d, const CheckOptions& options) {
  Recorder rec(Claim::WCycle, m, d);
  const WindowParams p = window_params(m);
  nlohmann::json pairs = nlohmann::json::array();
  for (int dd : d_range(p, d)) {
    const RecurrenceSystem w = build_w(p, dd);
    const CycleReport report = measure(compile(w), w.init, predict_w(p, dd), options);
    rec.cycle(w.label, report);
    if (dd == p.rho - 1 && !report.zero_fixed_point()) rec.fail(w.label + " attractor", dd, "all-zero fixed point", "other");
    pairs.push_back({report.measured_transient, report.measured_period});
  }
  rec.evidence()["transient_period"] = pairs;
  return rec.finish();
}

ClaimResult z_summary(int m, std::optional<int> d, const CheckOptions& options) {
  Recorder rec(Claim::ZSummary, m, d);
  const WindowParams p = window_params(m);
  nlohmann::json pairs = nlohmann::json::array();
  for (int dd : d_range(p, d)) {
    const RecurrenceSystem z = build_z(p, dd);
    const CycleReport report = measure(compile(z), z.init, predict_z(p, dd), options);
    rec.cycle(z.label, report);
    if (dd == p.rho - 1 && !report.zero_fixed_point()) rec.fail(z.label + " attractor", dd, "all-zero fixed point", "other");
    pairs.push_back({report.measured_transient, report.measured_period});
  }
  rec.evidence()["transient_period"] = pairs;
  return rec.finish();
}

}  // namespace

// Public checkers --------------------------------------------------------------

std::span<const ClaimInfo> claim_inventory() { return kInventory; }

const ClaimInfo& claim_info(Claim claim) {
  for (const auto& info : kInventory) {
    if (info.claim == claim) return info;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown claim");
}

std::optional<Claim> parse_claim(std::string_view id) {
  for (const auto& info : kInventory) {
    if (info.id == id) return info.claim;
  }
  return std::nullopt;
}

ClaimResult check_static(Claim claim, int m) {
  switch (claim) {
    case Claim::WindowParamBounds: return window_param_bounds(m);
    case Claim::Prop1: return prop1(m);
    case Claim::Prop2: return prop2(m);
    case Claim::PosDisjoint: return pos_disjoint(m);
    case Claim::B0MethodsAgree: return b0_methods_agree(m);
    case Claim::ChainEqualsDirect: return chain_equals_direct(m);
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument, std::string(claim_info(claim).id) + " is not a static claim");
}

ClaimResult check_dynamics(Claim claim, int m, std::optional<int> d, const CheckOptions& options) {
  switch (claim) {
    case Claim::XCycle: return x_cycle(m, options);
    case Claim::VFixed: return v_fixed(m, options);
    case Claim::SumBounds: return sum_bounds(m, options);
    case Claim::S1Range: return s1_range(m);
    case Claim::YCycle: return y_cycle(m, options);
    case Claim::YDeshuffle: return y_deshuffle(m, options);
    case Claim::WCycle: return w_cycle(m, d, options);
    case Claim::ZSummary: return z_summary(m, d, options);
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument, std::string(claim_info(claim).id) + " is not a dynamics claim");
}

ClaimResult check_phases(int m, int d, const CheckOptions& options) {
  Recorder rec(Claim::Phases, m, d);
  const WindowParams p = window_params(m);
  const PerturbationPlan plan = perturbation_plan(p, d);
  const RecurrenceSystem z = build_z(p, d);
  const RecurrenceSystem y = build_y(p);
  const RecurrenceSystem w = build_w(p, d);
  const CompiledSystem cz = compile(z);
  const CompiledSystem cy = compile(y);
  const CompiledSystem cw = compile(w);

  const std::uint64_t l1 = to_u64(cycle_lengths(p, d).l1);
  const std::uint64_t l0 = to_u64(cycle_lengths(p, d).l0);
  const auto h = static_cast<std::uint64_t>(p.h);
  const auto rho = static_cast<std::uint64_t>(p.rho);
  const auto dd = static_cast<std::uint64_t>(d);
  const std::uint64_t phase2_begin = l1 + h - rho;
  const std::uint64_t phase2_end = phase2_begin + dd;        // inclusive
  const std::uint64_t phase3_end = l1 + h - 1;               // inclusive, may precede phase3 begin
  const std::uint64_t phase4_end = l3(p, d);                 // inclusive
  const std::uint64_t cyclic_begin = l4(p, d);
  const std::uint64_t stop = std::max(phase4_end + 1, cyclic_begin + capped(h + 2 * l0, options));

  // Sums over A(d) of the lagged outputs of z.
  std::vector<std::uint32_t> a_offsets(plan.a.begin(), plan.a.end());
  std::map<std::size_t, std::uint64_t> a_sum_histogram;
  std::vector<std::uint64_t> tot_hits;

  Stream zs(cz, z.init);
  Stream ys(cy, y.init);
  Stream ws(cw, w.init);
  std::uint64_t anomalies = 0;
  std::uint64_t phase3_steps = 0;
  for (std::uint64_t t = 0; t < stop; ++t) {
    if (t >= h) {
      std::size_t a_sum = 0;
      for (std::uint32_t f : a_offsets) a_sum += zs.state().back(f);
      ++a_sum_histogram[a_sum];
      if (a_sum == static_cast<std::size_t>(plan.tot)) tot_hits.push_back(t);
    }
    const int zb = zs.next();
    if (t < l1 + h) {
      const int yb = ys.next();
      if (t < phase2_begin) {
        rec.expect_bits(zb == yb, "phase 1: z vs y", t, yb, zb);
      } else if (t <= phase2_end) {
        if (zb == 0 && yb == 1) ++anomalies;
        rec.expect_bits(yb == 1, "phase 2: y", t, 1, yb);
        rec.expect_bits(zb == 0, "phase 2: z", t, 0, zb);
      } else {
        ++phase3_steps;
        rec.expect_bits(zb == yb, "phase 3: z vs y", t, yb, zb);
      }
    }
    if (t >= l1) {
      // z(l1 + s) = w(s): the handoff window, phase 4 and the cyclic phase.
      const int wb = ws.next();
      const char* where = t < l1 + h ? "handoff: z(L1+s) vs w(s)"
                          : t <= phase4_end ? "phase 4: z(L1+h+s) vs w(h+s)"
                                            : "phase 5: z(s+L4) vs w(s+L4-L1)";
      rec.expect_bits(zb == wb, where, t, wb, zb);
    }
  }
  (void)phase3_end;

  if (anomalies != dd + 1) rec.fail("phase 2 anomaly count", static_cast<std::int64_t>(phase2_begin), std::to_string(d + 1), std::to_string(anomalies));
  if (d == p.rho - 1 && phase3_steps != 0) rec.fail("phase 3 empty when d = rho-1", d, "0", std::to_string(phase3_steps));

  // The sum over A(d) reaches Tot(d) exactly at the phase-2 times.
  std::vector<std::uint64_t> expected_hits;
  for (std::uint64_t t = phase2_begin; t <= phase2_end; ++t) expected_hits.push_back(t);
  if (tot_hits != expected_hits) {
    rec.fail("times with sum over A(d) = Tot(d)", tot_hits.empty() ? 0 : static_cast<std::int64_t>(tot_hits.front()),
             std::to_string(expected_hits.size()) + " phase-2 times", std::to_string(tot_hits.size()) + " times");
  }
  // Bounds on the perturbation term for every observed sum.
  for (const auto& [a_sum, count] : a_sum_histogram) {
    const Rational term = plan.beta_d * static_cast<long long>(a_sum) - plan.xi_d;
    const auto s = static_cast<int>(a_sum);
    if (s == plan.tot && term != plan.beta_d / 8) {
      rec.fail("perturbation term at full sum", s, to_string(plan.beta_d / 8), to_string(term));
    } else if (s < plan.tot && (term < -7 * plan.beta_d / 8 || term > -plan.xi_d)) {
      rec.fail("perturbation term range", s, "[" + to_string(-7 * plan.beta_d / 8) + ", " + to_string(-plan.xi_d) + "]", to_string(term));
    } else if (s > plan.tot) {
      rec.fail("sum over A(d) <= Tot(d)", s, std::to_string(plan.tot), std::to_string(s));
    }
  }

  rec.evidence()["l1"] = l1;
  rec.evidence()["phase2"] = {phase2_begin, phase2_end};
  rec.evidence()["phase3_steps"] = phase3_steps;
  rec.evidence()["phase4_end"] = phase4_end;
  rec.evidence()["cyclic_begin"] = cyclic_begin;
  rec.evidence()["anomalies"] = anomalies;
  rec.evidence()["steps_compared"] = stop;
  rec.evidence()["tot"] = plan.tot;
  return rec.finish();
}

ClaimResult check_chain(int m, const CheckOptions& options) {
  Recorder rec(Claim::Chain, m);
  const WindowParams p = window_params(m);
  const RecurrenceSystem y = build_y(p);
  const CycleReport y_report = measure(compile(y), y.init, predict_y(p), options);
  rec.cycle(y.label, y_report);

  std::vector<std::uint64_t> periods{y_report.measured_period};
  std::vector<std::uint64_t> transients{y_report.measured_transient};
  std::vector<bool> divides;

  RecurrenceSystem z = build_z(p, 0);
  PerturbationPlan plan = perturbation_plan(p, 0);
  CycleReport last;
  for (int d = 0; d < p.rho; ++d) {
    if (d > 0) {
      PerturbationPlan next_plan = perturbation_plan(p, d);
      z = chain_perturbation(z, plan, next_plan);
      plan = std::move(next_plan);
    }
    last = measure(compile(z), z.init, predict_z(p, d), options);
    rec.cycle(z.label, last);
    const std::uint64_t prev = periods.back();
    const bool ok = last.measured_period != 0 && prev % last.measured_period == 0;
    divides.push_back(ok);
    if (!ok) rec.fail("period divisibility", d, "divisor of " + std::to_string(prev), std::to_string(last.measured_period));
    periods.push_back(last.measured_period);
    transients.push_back(last.measured_transient);
  }
  if (!last.zero_fixed_point()) rec.fail("final attractor", p.rho - 1, "all-zero fixed point", "period " + std::to_string(last.measured_period));
  rec.evidence()["periods"] = periods;
  rec.evidence()["transients"] = transients;
  rec.evidence()["divides"] = divides;
  return rec.finish();
}

ClaimResult check_basin(int m, int d, const BasinSelector& selector, const CheckOptions& options) {
  const WindowParams p = window_params(m);
  const auto min_it = std::min_element(p.beta_m.begin(), p.beta_m.end());
  const int e = static_cast<int>(min_it - p.beta_m.begin());
  const int beta_e = *min_it;
  if (d >= beta_e) {
    throw Error(ErrorKind::HypothesisUnmet,
                "basin needs d < beta(m, alpha_e) = " + std::to_string(beta_e) + ", got d=" + std::to_string(d));
  }
  if (d < 0 || d >= p.rho) throw Error(ErrorKind::IndexOutOfRange, "d=" + std::to_string(d));

  Recorder rec(Claim::Basin, m, d);
  const int width = beta_e - d;
  const RecurrenceSystem z = build_z(p, d);
  const CompiledSystem cs = compile(z);

  // Nonzero weights that read the free prefix directly.
  nlohmann::json tail = nlohmann::json::array();
  for (int f = p.h - beta_e + d + 1; f <= p.h; ++f) {
    const Rational& c = z.weights[static_cast<std::size_t>(f - 1)];
    if (c != 0) tail.push_back({f, to_string(c)});
  }

  const Prediction predicted = predict_z(p, d);
  const std::uint64_t budget = std::min(options.step_budget, 8 * (predicted.transient + predicted.period) + 1024);
  const CycleReport reference = detect_cycle(cs, z.init, budget, predicted);
  rec.cycle(z.label, reference);
  const BitState anchor(reference.attractor_entry);

  std::vector<std::uint64_t> masks;
  if (selector.enumerate && width < 24) {
    masks.resize(std::size_t{1} << width);
    std::iota(masks.begin(), masks.end(), 0);
  } else {
    std::mt19937_64 rng(selector.seed);
    for (std::size_t s = 0; s < std::max<std::size_t>(selector.samples, 1); ++s) {
      masks.push_back(width >= 64 ? rng() : rng() & ((std::uint64_t{1} << width) - 1));
    }
  }

  BitState merged_reference(z.init);
  advance(cs, merged_reference, z.memory());

  std::uint64_t same = 0;
  std::uint64_t merged = 0;
  for (std::uint64_t mask : masks) {
    Bits init = z.init;
    for (int b = 0; b < width; ++b) init[static_cast<std::size_t>(b)] = (mask >> b) & 1u;
    BitState probe(init);
    advance(cs, probe, z.memory());
    if (probe == merged_reference) ++merged;
    const CycleReport variant = detect_cycle(cs, init, budget);
    bool found = false;
    if (variant.measured_period == reference.measured_period) {
      BitState walker(variant.attractor_entry);
      for (std::uint64_t s = 0; s < variant.measured_period && !found; ++s) {
        found = walker == anchor;
        step(cs, walker);
      }
    }
    if (found) {
      ++same;
    } else {
      rec.fail("attractor of prefix variant", static_cast<std::int64_t>(mask),
               "cycle of period " + std::to_string(reference.measured_period) + " through the reference entry",
               "period " + std::to_string(variant.measured_period));
    }
  }
  rec.evidence()["e"] = e;
  rec.evidence()["beta_e"] = beta_e;
  rec.evidence()["prefix_width"] = width;
  rec.evidence()["variants"] = masks.size();
  rec.evidence()["same_attractor"] = same;
  rec.evidence()["merged_after_memory_steps"] = merged;
  rec.evidence()["tail_weights_vanish"] = tail.empty();
  rec.evidence()["tail_nonzero_weights"] = tail;
  rec.evidence()["attractor_period"] = reference.measured_period;
  return rec.finish();
}

namespace {

CycleReport composed_cycle(const std::vector<int>& pattern) {
  std::vector<RecurrenceSystem> lanes;
  for (int v : pattern) lanes.push_back(constant_system(v != 0));
  const RecurrenceSystem composed = shuffle_compose(lanes);
  return detect_cycle(compile(composed), composed.init, 1024 + 16 * pattern.size());
}

}  // namespace

ClaimResult check_composition(Claim claim, std::uint64_t seed) {
  Recorder rec(claim, std::nullopt);
  if (claim == Claim::Example1Period2 || claim == Claim::Example1Period3) {
    const bool two = claim == Claim::Example1Period2;
    const std::vector<int> pattern = two ? std::vector<int>{0, 1, 0, 1, 0, 1} : std::vector<int>{0, 0, 1, 0, 0, 1};
    const CycleReport report = composed_cycle(pattern);
    rec.cycle("shuffle of constant lanes", report);
    const std::uint64_t want = two ? 2 : 3;
    if (report.measured_period != want || report.measured_transient != 0) {
      rec.fail("composed period", 0, pair_text(0, want), pair_text(report.measured_transient, report.measured_period));
    }
    rec.evidence()["period"] = report.measured_period;
    rec.evidence()["lane_count"] = pattern.size();
    return rec.finish();
  }
  if (claim != Claim::DivisorRule) {
    throw Error(ErrorKind::InvalidArgument, std::string(claim_info(claim).id) + " is not a composition claim");
  }
  std::map<std::uint64_t, std::uint64_t> period_histogram;
  constexpr int kSeeds = 100;
  for (int s = 0; s < kSeeds; ++s) {
    std::mt19937_64 rng(seed * 1000003u + static_cast<std::uint64_t>(s));
    const int r = std::uniform_int_distribution<int>(2, 8)(rng);
    std::vector<int> pattern;
    for (int i = 0; i < r; ++i) pattern.push_back(static_cast<int>(rng() & 1u));
    const CycleReport report = composed_cycle(pattern);
    ++period_histogram[report.measured_period];
    if (static_cast<std::uint64_t>(r) % report.measured_period != 0) {
      std::string text;
      for (int v : pattern) text += static_cast<char>('0' + v);
      rec.fail("period divides r for pattern " + text, s, "divisor of " + std::to_string(r), std::to_string(report.measured_period));
    }
  }
  nlohmann::json histogram = nlohmann::json::object();
  for (const auto& [period, count] : period_histogram) histogram[std::to_string(period)] = count;
  rec.evidence()["seeds"] = kSeeds;
  rec.evidence()["period_histogram"] = histogram;
  return rec.finish();
}

// Registry -------------------------------------------------------------------

std::vector<WorkItem> claim_grid(bool long_tier, std::span<const Claim> filter) {
  auto wanted = [&](Claim c) {
    return filter.empty() || std::find(filter.begin(), filter.end(), c) != filter.end();
  };
  std::vector<WorkItem> items;
  auto add = [&](Claim c, std::optional<int> m, std::optional<int> d = std::nullopt) {
    if (wanted(c)) items.push_back({c, m, d});
  };

  std::vector<int> scales{6, 11};
  if (long_tier) {
    scales.push_back(16);
    scales.push_back(21);
  }
  for (int m : scales) {
    const WindowParams p = window_params(m);
    // m = 21 has L2 near 2e9; its full-period and last-step claims stay out.
    const bool huge = m >= 21;
    for (const auto& info : kInventory) {
      switch (info.kind) {
        case ClaimKind::Static:
          add(info.claim, m);
          break;
        case ClaimKind::Dynamics:
          if (info.claim == Claim::YCycle && huge) break;
          if (info.d_indexed) {
            for (int d = 0; d < p.rho; ++d) {
              if (huge && info.claim == Claim::ZSummary && d == p.rho - 1) continue;
              add(info.claim, m, d);
            }
          } else {
            add(info.claim, m);
          }
          break;
        case ClaimKind::Phases:
          for (int d = 0; d < p.rho; ++d) {
            if (huge && d == p.rho - 1) continue;
            add(info.claim, m, d);
          }
          break;
        case ClaimKind::Chain:
          if (!huge) add(info.claim, m);
          break;
        case ClaimKind::Basin: {
          if (huge) break;
          const int beta_e = *std::min_element(p.beta_m.begin(), p.beta_m.end());
          const int last = std::min(beta_e, p.rho) - 1;
          for (int d = 0; d <= last; ++d) add(info.claim, m, d);
          break;
        }
        case ClaimKind::Composition:
          break;
      }
    }
  }
  for (const auto& info : kInventory) {
    if (info.kind == ClaimKind::Composition) add(info.claim, std::nullopt);
  }
  return items;
}

ClaimResult run_item(const WorkItem& item, const RunOptions& options) {
  try {
    const ClaimInfo& info = claim_info(item.claim);
    const int m = item.m.value_or(0);
    switch (info.kind) {
      case ClaimKind::Static: return check_static(item.claim, m);
      case ClaimKind::Dynamics: return check_dynamics(item.claim, m, item.d, options.check);
      case ClaimKind::Phases: return check_phases(m, item.d.value_or(0), options.check);
      case ClaimKind::Chain: return check_chain(m, options.check);
      case ClaimKind::Basin: return check_basin(m, item.d.value_or(0), options.basin, options.check);
      case ClaimKind::Composition: return check_composition(item.claim, options.seed);
    }
    throw Error(ErrorKind::InvalidArgument, "unhandled claim kind");
  } catch (const Error& e) {
    ClaimResult failed;
    failed.claim = item.claim;
    failed.m = item.m;
    failed.d = item.d;
    failed.passed = false;
    failed.detail = e.what();
    failed.counterexample = Counterexample{std::string(error_kind_name(e.kind())), 0, "completion", e.what()};
    return failed;
  }
}

std::vector<ClaimResult> run_items(std::span<const WorkItem> items, const RunOptions& options) {
  std::vector<ClaimResult> results(items.size());
  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(items.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < items.size(); idx = next++) {
      results[idx] = run_item(items[idx], options);
    }
  };
  if (threads <= 1) {
    worker();
    return results;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return results;
}

}  // namespace nre
