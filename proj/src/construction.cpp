#include "nre/construction.hpp"

#include <algorithm>
#include <string>

#include "nre/error.hpp"

namespace nre {

namespace {

void require_lane(const WindowParams& params, int i) {
  if (i < 0 || i >= params.rho) {
    throw Error(ErrorKind::IndexOutOfRange,
                "lane " + std::to_string(i) + " outside [0, " + std::to_string(params.rho - 1) + "]");
  }
}

void require_step(const WindowParams& params, int d) {
  if (d < 0 || d >= params.rho) {
    throw Error(ErrorKind::IndexOutOfRange,
                "d=" + std::to_string(d) + " outside [0, " + std::to_string(params.rho - 1) + "]");
  }
}

std::string tag(const char* family, const WindowParams& params, const char* index_name, int index) {
  std::string out = std::string(family) + "(m=" + std::to_string(params.m);
  if (index_name != nullptr) out += std::string(",") + index_name + "=" + std::to_string(index);
  return out + ")";
}

std::vector<Rational> to_rationals(const std::vector<int>& values) {
  return {values.begin(), values.end()};
}

void sort_unique(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

IndexSets index_sets(const WindowParams& params) {
  IndexSets sets;
  std::vector<bool> in_f(static_cast<std::size_t>(params.k) + 1, false);
  for (int i = 0; i < params.rho; ++i) {
    std::vector<int> pos;
    for (int j = 1; j <= 2 * params.rho; ++j) {
      pos.push_back(j * params.prime(i));
      in_f[static_cast<std::size_t>(j * params.prime(i))] = true;
    }
    sets.pos.push_back(std::move(pos));
  }
  for (int j = 1; j <= params.k; ++j) {
    (in_f[static_cast<std::size_t>(j)] ? sets.f : sets.g).push_back(j);
  }
  return sets;
}

std::vector<int> q_set(const WindowParams& params, int i, int d) {
  require_lane(params, i);
  const int p = params.prime(i);
  if (d <= 0 || d >= p) {
    throw Error(ErrorKind::IndexOutOfRange, "Q needs 0 < d < p_i");
  }
  const std::size_t idx = static_cast<std::size_t>(i);
  const int last = d <= params.beta_m[idx] ? params.mu[idx] : params.mu[idx] - 1;
  std::vector<int> out;
  for (int j = 0; j <= last; ++j) out.push_back(d + j * p);
  return out;
}

std::vector<int> e_set(const WindowParams& params, const IndexSets& sets, int i, int d) {
  std::vector<int> out;
  for (int q : q_set(params, i, d)) {
    if (std::binary_search(sets.f.begin(), sets.f.end(), q)) out.push_back(q);
  }
  return out;
}

std::vector<int> single_weights(const WindowParams& params) {
  const int rho = params.rho;
  std::vector<int> a(static_cast<std::size_t>(params.k), 0);
  for (int i = 0; i < rho; ++i) {
    const int p = params.prime(i);
    for (int l = 1; l <= 2 * rho; ++l) {
      const int j = l * p;
      int value = 0;
      if (rho % 2 == 0) {
        value = 2 * j <= 3 * rho * p ? 2 : -2;
      } else if (2 * l <= 3 * rho - 1) {
        value = 2;
      } else if (l >= 2 * rho - 1) {
        value = -1;
      } else {
        value = -2;  // (3 rho + 1)/2 <= l <= 2 rho - 2
      }
      a[static_cast<std::size_t>(j - 1)] = value;
    }
  }
  return a;
}

int single_threshold(const WindowParams& params) { return 2 * params.rho; }

bool x_closed_form(const WindowParams& params, int i, std::uint64_t t) {
  require_lane(params, i);
  const auto p = static_cast<std::uint64_t>(params.prime(i));
  return t % p == static_cast<std::uint64_t>(params.beta_m[static_cast<std::size_t>(i)]);
}

bool y_closed_form(const WindowParams& params, std::uint64_t t) {
  const auto rho = static_cast<std::uint64_t>(params.rho);
  return x_closed_form(params, static_cast<int>(t % rho), 1 + t / rho);
}

Bits initial_config_x(const WindowParams& params, int i) {
  require_lane(params, i);
  const auto idx = static_cast<std::size_t>(i);
  Bits bits(static_cast<std::size_t>(params.k), 0);
  for (int l = 0; l < params.mu[idx]; ++l) {
    bits[static_cast<std::size_t>(params.beta_m[idx] + l * params.prime(i))] = 1;
  }
  return bits;
}

Bits initial_config_v(const WindowParams& params, int i) {
  require_lane(params, i);
  const auto k = static_cast<std::uint64_t>(params.k);
  Bits bits(k, 0);
  for (std::uint64_t t = 0; t + 1 < k; ++t) bits[t] = x_closed_form(params, i, t + 1) ? 1 : 0;
  bits[k - 1] = x_closed_form(params, i, k) ? 0 : 1;
  return bits;
}

RecurrenceSystem build_x(const WindowParams& params, int i) {
  return {to_rationals(single_weights(params)), Rational(single_threshold(params)),
          initial_config_x(params, i), tag("x", params, "i", i)};
}

RecurrenceSystem build_v(const WindowParams& params, int i) {
  return {to_rationals(single_weights(params)), Rational(single_threshold(params)),
          initial_config_v(params, i), tag("v", params, "i", i)};
}

namespace {

std::vector<Rational> shuffled_weights(const WindowParams& params) {
  const auto a = single_weights(params);
  std::vector<Rational> b(static_cast<std::size_t>(params.h), Rational(0));
  for (int j = 1; j <= params.k; ++j) {
    b[static_cast<std::size_t>(params.rho * j - 1)] = a[static_cast<std::size_t>(j - 1)];
  }
  return b;
}

Bits y_init(const WindowParams& params) {
  Bits init(static_cast<std::size_t>(params.h), 0);
  for (int j = 0; j < params.k; ++j) {
    for (int i = 0; i < params.rho; ++i) {
      init[static_cast<std::size_t>(params.rho * j + i)] =
          x_closed_form(params, i, static_cast<std::uint64_t>(1 + j)) ? 1 : 0;
    }
  }
  return init;
}

}  // namespace

RecurrenceSystem build_y(const WindowParams& params) {
  return {shuffled_weights(params), Rational(single_threshold(params)), y_init(params),
          tag("y", params, nullptr, 0)};
}

std::uint64_t gamma(const WindowParams& params, int d, int i) {
  require_step(params, d);
  if (i <= d || i >= params.rho) {
    throw Error(ErrorKind::IndexOutOfRange, "gamma needs d < i < rho");
  }
  const BigInt quotient = cycle_lengths(params, d).l1 / params.rho;
  return to_u64(quotient % params.prime(i));
}

RecurrenceSystem build_w(const WindowParams& params, int d) {
  require_step(params, d);
  Bits init(static_cast<std::size_t>(params.h), 0);
  for (int i = 0; i < params.rho; ++i) {
    if (i <= d) {
      const Bits v = initial_config_v(params, i);
      for (int j = 0; j < params.k; ++j) {
        init[static_cast<std::size_t>(params.rho * j + i)] = v[static_cast<std::size_t>(j)];
      }
    } else {
      const std::uint64_t offset = gamma(params, d, i);
      for (int j = 0; j < params.k; ++j) {
        init[static_cast<std::size_t>(params.rho * j + i)] =
            x_closed_form(params, i, 1 + static_cast<std::uint64_t>(j) + offset) ? 1 : 0;
      }
    }
  }
  return {shuffled_weights(params), Rational(single_threshold(params)), std::move(init),
          tag("w", params, "d", d)};
}

B0Readings b0_algebraic_readings(const WindowParams& params, int d) {
  require_step(params, d);
  const BigInt l1 = cycle_lengths(params, d).l1;
  B0Readings out;
  for (int i = 0; i < params.rho; ++i) {
    const int modulus = params.rho * params.prime(i);
    // Lane residue: the residue of -i + rho + L1(d) - rho modulo rho * p_i.
    BigInt r = (l1 - i) % modulus;
    if (r < 0) r += modulus;
    const int residue = r.convert_to<int>();
    for (int l = residue == 0 ? modulus : residue; l <= params.h; l += modulus) {
      out.congruence_class.push_back(l);
    }
    if (residue >= 1 && residue <= params.h) out.literal.push_back(residue);
  }
  sort_unique(out.congruence_class);
  sort_unique(out.literal);
  return out;
}

std::vector<int> compute_B0(const WindowParams& params, int d, B0Method method) {
  require_step(params, d);
  if (method == B0Method::Algebraic) {
    return b0_algebraic_readings(params, d).congruence_class;
  }
  const std::uint64_t l1 = to_u64(cycle_lengths(params, d).l1);
  const auto base = static_cast<std::uint64_t>(params.h) + l1 - static_cast<std::uint64_t>(params.rho);
  std::vector<int> out;
  for (int f = 1; f <= params.h - d; ++f) {
    if (y_closed_form(params, base - static_cast<std::uint64_t>(f))) out.push_back(f);
  }
  return out;
}

PerturbationPlan perturbation_plan(const WindowParams& params, int d) {
  require_step(params, d);
  PerturbationPlan plan;
  plan.d = d;
  plan.rho = params.rho;
  plan.h = params.h;
  plan.b0 = compute_B0(params, d, B0Method::Definitional);
  if (plan.b0.empty()) {
    throw Error(ErrorKind::InvalidArgument, "B0(" + std::to_string(d) + ") is empty");
  }
  if (plan.b0.back() + d > params.h) {
    throw Error(ErrorKind::IndexOutOfRange, "max B0(d) + d exceeds h for d=" + std::to_string(d));
  }
  for (int shift = 0; shift <= d; ++shift) {
    for (int f : plan.b0) plan.a.push_back(f + shift);
  }
  sort_unique(plan.a);
  plan.tot = static_cast<int>(plan.b0.size());
  plan.lambda = Rational(-1);
  plan.beta_d = plan.lambda / plan.tot;
  plan.xi_d = plan.lambda - plan.beta_d / 8;
  plan.theta2 = Rational(single_threshold(params)) + plan.xi_d;
  return plan;
}

RecurrenceSystem build_z(const WindowParams& params, int d) {
  const PerturbationPlan plan = perturbation_plan(params, d);
  RecurrenceSystem z = build_y(params);
  for (int f : plan.a) z.weights[static_cast<std::size_t>(f - 1)] += plan.beta_d;
  z.threshold = plan.theta2;
  z.label = tag("z", params, "d", d);
  return z;
}

RecurrenceSystem chain_perturbation(const RecurrenceSystem& z_d, const PerturbationPlan& from,
                                    const PerturbationPlan& to) {
  if (from.d < 0 || from.d > from.rho - 2 || to.d != from.d + 1 || to.rho != from.rho) {
    throw Error(ErrorKind::IndexOutOfRange, "chain_perturbation needs plans for d and d+1 with d <= rho-2");
  }
  if (z_d.memory() != static_cast<std::size_t>(from.h)) {
    throw Error(ErrorKind::ShapeMismatch, "system memory does not match the plan's h");
  }
  std::vector<bool> in_from(z_d.memory() + 1, false);
  std::vector<bool> in_to(z_d.memory() + 1, false);
  for (int f : from.a) in_from[static_cast<std::size_t>(f)] = true;
  for (int f : to.a) in_to[static_cast<std::size_t>(f)] = true;

  RecurrenceSystem out = z_d;
  for (std::size_t f = 1; f <= z_d.memory(); ++f) {
    Rational& c = out.weights[f - 1];
    if (in_from[f] && in_to[f]) {
      c = c - from.beta_d + to.beta_d;
    } else if (in_from[f]) {
      c = c - from.beta_d;
    } else if (in_to[f]) {
      c = c + to.beta_d;
    }
  }
  out.threshold = z_d.threshold - from.xi_d + to.xi_d;
  const auto paren = out.label.rfind(",d=");
  if (paren != std::string::npos) {
    out.label = out.label.substr(0, paren) + ",d=" + std::to_string(to.d) + ")";
  }
  return out;
}

RecurrenceSystem shuffle_compose(std::span<const RecurrenceSystem> lanes) {
  if (lanes.empty()) {
    throw Error(ErrorKind::InvalidArgument, "shuffle_compose needs at least one lane");
  }
  const RecurrenceSystem& first = lanes.front();
  for (const auto& lane : lanes) {
    if (lane.memory() != first.memory() || lane.threshold != first.threshold ||
        lane.weights != first.weights || lane.init.size() != lane.memory()) {
      throw Error(ErrorKind::MixedShapes, "lanes differ in memory, weights or threshold");
    }
  }
  const std::size_t r = lanes.size();
  const std::size_t mem = first.memory();
  RecurrenceSystem out;
  out.weights.assign(mem * r, Rational(0));
  for (std::size_t j = 1; j <= mem; ++j) out.weights[r * j - 1] = first.weights[j - 1];
  out.threshold = first.threshold;
  out.init.assign(mem * r, 0);
  for (std::size_t j = 0; j < mem; ++j) {
    for (std::size_t i = 0; i < r; ++i) out.init[r * j + i] = lanes[i].init[j];
  }
  out.label = "shuffle(r=" + std::to_string(r) + ")";
  return out;
}

RecurrenceSystem constant_system(bool value) {
  return {{Rational(1)}, Rational(1), Bits{static_cast<std::uint8_t>(value ? 1 : 0)},
          value ? "const(1)" : "const(0)"};
}

Prediction predict_x(const WindowParams& params, int i) {
  require_lane(params, i);
  return {0, static_cast<std::uint64_t>(params.prime(i))};
}

Prediction predict_v(const WindowParams& params, int i) {
  require_lane(params, i);
  return {static_cast<std::uint64_t>(params.k - params.prime(i)), 1};
}

Prediction predict_y(const WindowParams& params) {
  return {0, to_u64(cycle_lengths(params, 0).l2)};
}

Prediction predict_w(const WindowParams& params, int d) {
  require_step(params, d);
  const auto transient = params.rho * (params.k - params.prime(d) - 1) + d + 1;
  return {static_cast<std::uint64_t>(transient), to_u64(cycle_lengths(params, d).l0)};
}

Prediction predict_z(const WindowParams& params, int d) {
  return {l4(params, d), to_u64(cycle_lengths(params, d).l0)};
}

std::uint64_t l3(const WindowParams& params, int d) {
  require_step(params, d);
  const std::uint64_t l1 = to_u64(cycle_lengths(params, d).l1);
  const auto h = static_cast<std::uint64_t>(params.h);
  const auto drop = static_cast<std::uint64_t>(params.rho) * (1 + static_cast<std::uint64_t>(params.prime(d)));
  return l1 + 2 * h + static_cast<std::uint64_t>(d) - drop;
}

std::uint64_t l4(const WindowParams& params, int d) {
  return l3(params, d) - static_cast<std::uint64_t>(params.h) + 1;
}

}  // namespace nre
