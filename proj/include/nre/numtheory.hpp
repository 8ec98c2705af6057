#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nre/numeric.hpp"

namespace nre {

/// Everything the construction derives from the scale parameter m.
///
/// `primes` holds the primes strictly between 2m and 3m in descending
/// order, so index 0 is the largest. All per-index vectors share that
/// indexing.
struct WindowParams {
  int m = 0;
  std::vector<int> primes;
  int rho = 0;
  std::vector<int> alphas;  // 3m - p_i
  int k = 0;                // (6m - 1) * rho
  int h = 0;                // rho * k
  std::vector<int> mu;      // floor(k / p_i)
  std::vector<int> beta_m;  // k - p_i * mu_i

  int prime(int i) const { return primes.at(static_cast<std::size_t>(i)); }
};

bool is_prime(std::uint64_t n);

/// Throws RhoTooSmall when fewer than two primes lie in (2m, 3m), and
/// InvalidArgument for m < 2.
WindowParams window_params(int m);

/// Exact lcm; the empty list gives 1.
BigInt lcm_list(std::span<const std::int64_t> values);

struct CycleLengths {
  BigInt l0;  // rho * lcm(p_{d+1}..p_{rho-1}), or 1 when d = rho - 1
  BigInt l1;  // rho * lcm(p_0..p_d)
  BigInt l2;  // rho * lcm(all primes)
};

CycleLengths cycle_lengths(const WindowParams& params, int d);

/// Distinct prime divisors in ascending order; empty for n <= 1.
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

}  // namespace nre
