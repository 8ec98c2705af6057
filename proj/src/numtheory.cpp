#include "nre/numtheory.hpp"

#include <algorithm>
#include <string>


#include "nre/error.hpp"

namespace nre {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t q = 3; q * q <= n; q += 2) {
    if (n % q == 0) return false;
  }
  return true;
}

WindowParams window_params(int m) {
  if (m < 2) {
    throw Error(ErrorKind::InvalidArgument, "m must be at least 2, got " + std::to_string(m));
  }
  WindowParams p;
  p.m = m;
  for (int candidate = 3 * m - 1; candidate > 2 * m; --candidate) {
    if (is_prime(static_cast<std::uint64_t>(candidate))) p.primes.push_back(candidate);
  }
  p.rho = static_cast<int>(p.primes.size());
  if (p.rho < 2) {
    throw Error(ErrorKind::RhoTooSmall, "m=" + std::to_string(m) + " has rho=" +
                                            std::to_string(p.rho) + " primes in (2m, 3m)");
  }
  p.k = (6 * m - 1) * p.rho;
  p.h = p.rho * p.k;
  for (int prime : p.primes) {
    p.alphas.push_back(3 * m - prime);
    const int mu = p.k / prime;
    p.mu.push_back(mu);
    p.beta_m.push_back(p.k - prime * mu);
  }
  return p;
}

BigInt lcm_list(std::span<const std::int64_t> values) {
  BigInt acc = 1;
  for (std::int64_t v : values) {
    if (v < 1) {
      throw Error(ErrorKind::InvalidArgument, "lcm_list entries must be positive");
    }
    BigInt bv = v;
    acc = acc / boost::multiprecision::gcd(acc, bv) * bv;
  }
  return acc;
}

namespace {

BigInt rho_lcm(const WindowParams& params, int first, int last_exclusive) {
  std::vector<std::int64_t> slice(params.primes.begin() + first, params.primes.begin() + last_exclusive);
  return BigInt(params.rho) * lcm_list(slice);
}

}  // namespace

CycleLengths cycle_lengths(const WindowParams& params, int d) {
  if (d < 0 || d >= params.rho) {
    throw Error(ErrorKind::IndexOutOfRange,
                "d=" + std::to_string(d) + " outside [0, " + std::to_string(params.rho - 1) + "]");
  }
  CycleLengths out;
  out.l1 = rho_lcm(params, 0, d + 1);
  out.l0 = d == params.rho - 1 ? BigInt(1) : rho_lcm(params, d + 1, params.rho);
  out.l2 = rho_lcm(params, 0, params.rho);
  return out;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 2; q * q <= n; q += (q == 2 ? 1 : 2)) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace nre
