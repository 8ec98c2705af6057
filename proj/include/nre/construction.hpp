#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nre/numeric.hpp"
#include "nre/numtheory.hpp"

namespace nre {

/// A single threshold unit with memory:
///   x(n) = 1[ sum_{j=1..memory} weights[j-1] * x(n-j) - threshold ],
/// started from x(0..memory-1) = init.
struct RecurrenceSystem {
  std::vector<Rational> weights;  // weights[j-1] multiplies x(n-j)
  Rational threshold;
  Bits init;
  std::string label;

  std::size_t memory() const { return weights.size(); }
  bool operator==(const RecurrenceSystem&) const = default;
};

/// Index sets over D = {1..k}. pos[i] = {j * p_i : j = 1..2 rho}.
struct IndexSets {
  std::vector<std::vector<int>> pos;
  std::vector<int> f;  // union of all pos[i], ascending
  std::vector<int> g;  // D \ F, ascending
};

IndexSets index_sets(const WindowParams& params);

/// Q(alpha_i, d) for 0 < d < p_i.
std::vector<int> q_set(const WindowParams& params, int i, int d);
/// E(alpha_i, d) = Q(alpha_i, d) intersected with F.
std::vector<int> e_set(const WindowParams& params, const IndexSets& sets, int i, int d);

// Single-unit system -------------------------------------------------------

/// Integer weights a_1..a_k stored at [j-1]; zero outside F.
std::vector<int> single_weights(const WindowParams& params);
int single_threshold(const WindowParams& params);  // 2 rho

Bits initial_config_x(const WindowParams& params, int i);
Bits initial_config_v(const WindowParams& params, int i);

/// x^{alpha_i}(t) is 1 exactly when t = beta_i (mod p_i).
bool x_closed_form(const WindowParams& params, int i, std::uint64_t t);
/// y(q rho + i) = x^{alpha_i}(1 + q).
bool y_closed_form(const WindowParams& params, std::uint64_t t);

RecurrenceSystem build_x(const WindowParams& params, int i);
RecurrenceSystem build_v(const WindowParams& params, int i);

// Shuffled systems ---------------------------------------------------------

/// b_f = a_j when f = rho j, else 0; threshold theta_1 = 2 rho.
RecurrenceSystem build_y(const WindowParams& params);

/// Least non-negative residue of L1(d)/rho modulo p_i, for d < i < rho.
std::uint64_t gamma(const WindowParams& params, int d, int i);

RecurrenceSystem build_w(const WindowParams& params, int d);

enum class B0Method { Algebraic, Definitional };

/// Sorted set B0(d).
std::vector<int> compute_B0(const WindowParams& params, int d, B0Method method);

/// The two readings of the residue-class construction. `congruence_class`
/// takes every l in [1, h] congruent to the lane residue; `literal` keeps only
/// the residue itself.
struct B0Readings {
  std::vector<int> congruence_class;
  std::vector<int> literal;
};

B0Readings b0_algebraic_readings(const WindowParams& params, int d);

struct PerturbationPlan {
  int d = 0;
  int rho = 0;
  int h = 0;
  std::vector<int> b0;  // B0(d), ascending
  std::vector<int> a;   // A(d) = union of B0(d) + l, l = 0..d, ascending
  int tot = 0;          // card B0(d)
  Rational lambda;      // fixed to -1
  Rational beta_d;      // lambda / tot
  Rational xi_d;        // lambda - beta_d / 8
  Rational theta2;      // theta_1 + xi_d
};

PerturbationPlan perturbation_plan(const WindowParams& params, int d);

/// Weights b_f + beta(d) on A(d), threshold theta_2(d), init equal to y.
RecurrenceSystem build_z(const WindowParams& params, int d);

/// Turns z(., d) into z(., d+1) by the four-case coefficient update and the
/// telescoping threshold update. The initial window is kept.
RecurrenceSystem chain_perturbation(const RecurrenceSystem& z_d, const PerturbationPlan& from,
                                    const PerturbationPlan& to);

// Composition --------------------------------------------------------------

/// Interleaves r systems sharing one weight vector and threshold into a
/// system of memory r * memory. Throws MixedShapes otherwise.
RecurrenceSystem shuffle_compose(std::span<const RecurrenceSystem> lanes);

/// Memory-1 unit x(n) = x(n-1) started at `value`; a period-1 sequence.
RecurrenceSystem constant_system(bool value);

// Predicted dynamics -------------------------------------------------------

struct Prediction {
  std::uint64_t transient = 0;
  std::uint64_t period = 0;
};

Prediction predict_x(const WindowParams& params, int i);
Prediction predict_v(const WindowParams& params, int i);
Prediction predict_y(const WindowParams& params);
Prediction predict_w(const WindowParams& params, int d);
Prediction predict_z(const WindowParams& params, int d);

/// End of the fourth phase of z(., d): L1 + 2h + d - rho (1 + p_d).
std::uint64_t l3(const WindowParams& params, int d);
/// Start of the cyclic phase of z(., d): L3 - h + 1.
std::uint64_t l4(const WindowParams& params, int d);

}  // namespace nre
