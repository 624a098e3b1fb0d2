#pragma once

#include <optional>
#include <vector>

#include "dqshor/bigint.hpp"
#include "dqshor/bitstring.hpp"
#include "dqshor/plan.hpp"

namespace dqshor {

/// a^e mod N for e >= 0, N >= 1. Square-and-multiply on exact integers.
BigInt modpow(BigInt a, BigInt e, const BigInt& N);

/// Non-negative gcd.
BigInt gcd(const BigInt& a, const BigInt& b);

/// Multiplicative order of a mod N by direct iteration; requires
/// gcd(a, N) == 1. Returns nullopt if the order exceeds `cap` steps
/// (default 2^24). Test oracle and analytic-backend ground truth.
std::optional<BigInt> order_bruteforce(const BigInt& N, const BigInt& a,
                                       const BigInt& cap = BigInt(1) << 24);

/// Convergents p_i/q_i of the continued fraction of num/den (0 <= num/den).
struct Convergent {
  BigInt p, q;
};
std::vector<Convergent> convergents(const BigInt& num, const BigInt& den);

struct OrderResult {
  BigInt r;
  unsigned candidates_tested = 0;
  enum class Source { convergent, lambda_search } source = Source::convergent;
};

/// Recover the order from a stitched phase estimate m of width 2L + 1 + p.
///
/// Scans continued-fraction convergents of m / 2^(2L+1+p) with denominator
/// below N; each denominator q is tried with multipliers lambda = 1..
/// lambda_max and candidates verified by a^cand mod N == 1. Every verified
/// candidate is a multiple of the true order, so the smallest one found is
/// exact whenever the reduced denominator appears (multiplier gcd(s, r)).
/// Zero-numerator convergents carry no information and are skipped; m = 0
/// therefore yields nullopt unless a == 1 (order 1, returned directly).
std::optional<OrderResult> recover_order(const BitString& m, const NodePlan& plan,
                                         const BigInt& N, const BigInt& a,
                                         unsigned lambda_max = 64);

/// Deterministic Miller-Rabin for the sizes this project factors
/// (fixed base set, exact below 3.3e24; probabilistic beyond).
bool is_probable_prime(const BigInt& n);

/// If n == q^e for some base q >= 2 and exponent e >= 2, returns the
/// smallest such q (prime when n is a prime power).
std::optional<BigInt> perfect_power_base(const BigInt& n);

}  // namespace dqshor
