#include <doctest.h>

#include <cstdint>
#include <optional>
#include <vector>

#include "dqshor/bitstring.hpp"
#include "dqshor/fraction.hpp"
#include "dqshor/numtheory.hpp"
#include "dqshor/plan.hpp"

using namespace dqshor;

TEST_CASE("modpow matches repeated multiplication") {
  CHECK(modpow(2, 10, 1000) == 24);
  CHECK(modpow(7, 0, 15) == 1);
  CHECK(modpow(0, 5, 9) == 0);
  CHECK(modpow(-3, 3, 7) == 1);  // base normalized into [0, N)
  CHECK(modpow(5, 3, 1) == 0);

  for (int a = 2; a <= 9; ++a) {
    BigInt cur = 1;
    for (int e = 0; e <= 40; ++e) {
      CHECK(modpow(a, e, 1000003) == cur);
      cur = cur * a % 1000003;
    }
  }
}

TEST_CASE("gcd is non-negative and symmetric") {
  CHECK(gcd(12, 18) == 6);
  CHECK(gcd(18, 12) == 6);
  CHECK(gcd(0, 5) == 5);
  CHECK(gcd(5, 0) == 5);
  CHECK(gcd(0, 0) == 0);
  CHECK(gcd(-4, 6) == 2);
  CHECK(gcd(17, 13) == 1);
}

TEST_CASE("order_bruteforce finds the least exponent reaching one") {
  for (int N = 2; N <= 50; ++N) {
    for (int a = 1; a < N; ++a) {
      if (gcd(a, N) != 1) continue;
      const auto r = order_bruteforce(N, a);
      REQUIRE(r.has_value());
      CHECK(modpow(a, *r, N) == 1);
      for (BigInt d = 1; d < *r; ++d) {
        CHECK(modpow(a, d, N) != 1);
      }
    }
  }
}

TEST_CASE("order_bruteforce reports nullopt past its cap") {
  const auto full = order_bruteforce(1009, 2);
  REQUIRE(full.has_value());
  CHECK(*full > 2);
  CHECK(order_bruteforce(1009, 2, *full - 1) == std::nullopt);
  CHECK(order_bruteforce(1009, 2, *full) == full);
}

TEST_CASE("convergents walk the continued fraction") {
  const auto cs = convergents(649, 200);
  REQUIRE(cs.size() == 4);
  CHECK(cs[0].p == 3);
  CHECK(cs[0].q == 1);
  CHECK(cs[1].p == 13);
  CHECK(cs[1].q == 4);
  CHECK(cs[2].p == 159);
  CHECK(cs[2].q == 49);
  CHECK(cs[3].p == 649);
  CHECK(cs[3].q == 200);

  const auto zero = convergents(0, 7);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].p == 0);
  CHECK(zero[0].q == 1);

  const auto pi_ish = convergents(355, 113);
  REQUIRE(pi_ish.size() == 3);
  CHECK(pi_ish[1].p == 22);
  CHECK(pi_ish[1].q == 7);

  // Reduced terms, increasing denominators, exact final value.
  const auto big = convergents(10000, 7919);
  for (std::size_t i = 0; i < big.size(); ++i) {
    CHECK(gcd(big[i].p, big[i].q) == 1);
    if (i > 0) CHECK(big[i].q > big[i - 1].q);
  }
  CHECK(big.back().p * 7919 == big.back().q * 10000);
}

namespace {

// Smallest modulus carrying an element of the requested order, with one such
// element; the scan cap keeps order_bruteforce cheap when probing.
std::pair<BigInt, BigInt> element_of_order(const BigInt& r) {
  for (int N = 3; N <= 1000; ++N) {
    for (int a = 2; a < N; ++a) {
      if (gcd(a, N) != 1) continue;
      if (order_bruteforce(N, a, r) == r) return {N, a};
    }
  }
  FAIL("no element of the requested order below N = 1000");
  return {0, 0};
}

}  // namespace

TEST_CASE("recover_order rebuilds every order up to 64 from exact phases") {
  for (int r = 2; r <= 64; ++r) {
    const auto [N, a] = element_of_order(r);
    const NodePlan plan = make_plan(N, a, 1, 0.25);
    for (BigInt s = 0; s < r; ++s) {
      const BitString m = frac_bits(PhaseFraction(s, r), 1, plan.output_width());
      const auto rec = recover_order(m, plan, N, a);
      if (s == 0) {
        CHECK_FALSE(rec.has_value());  // m = 0 carries no information
        continue;
      }
      REQUIRE(rec.has_value());
      CHECK(rec->r == r);
      CHECK(rec->candidates_tested >= 1);
      if (gcd(s, BigInt(r)) > 1) {
        // The reduced denominator is r / gcd, so only a multiplier > 1
        // can reach the order.
        CHECK(rec->source == OrderResult::Source::lambda_search);
      }
    }
  }
}

TEST_CASE("recover_order distinguishes the convergent and multiplier paths") {
  // 4 has order 7 mod 43; the phase 3/7 lists denominator 7 as a convergent,
  // so the minimal candidate lands with multiplier 1.
  const NodePlan plan = make_plan(43, 4, 1, 0.25);
  const BitString m = frac_bits(PhaseFraction(3, 7), 1, plan.output_width());
  const auto rec = recover_order(m, plan, 43, 4);
  REQUIRE(rec.has_value());
  CHECK(rec->r == 7);
  CHECK(rec->source == OrderResult::Source::convergent);

  // 2 has order 6 mod 9; the phase 2/6 reduces to 1/3, so the recovery must
  // come from the multiplier search, and disabling multipliers loses it.
  const NodePlan plan9 = make_plan(9, 2, 1, 0.25);
  const BitString m9 = frac_bits(PhaseFraction(2, 6), 1, plan9.output_width());
  const auto rec9 = recover_order(m9, plan9, 9, 2);
  REQUIRE(rec9.has_value());
  CHECK(rec9->r == 6);
  CHECK(rec9->source == OrderResult::Source::lambda_search);
  CHECK(recover_order(m9, plan9, 9, 2, 1) == std::nullopt);
}

TEST_CASE("recover_order handles the trivial base directly") {
  const NodePlan plan = make_plan(15, 7, 1, 0.25);
  const BitString zero(plan.output_width(), 0);
  const auto rec = recover_order(zero, plan, 15, 1);
  REQUIRE(rec.has_value());
  CHECK(rec->r == 1);
}

TEST_CASE("is_probable_prime agrees with a sieve and rejects Carmichael numbers") {
  std::vector<bool> sieve(2001, true);
  sieve[0] = sieve[1] = false;
  for (int i = 2; i * i <= 2000; ++i) {
    if (sieve[i]) {
      for (int j = i * i; j <= 2000; j += i) sieve[j] = false;
    }
  }
  for (int n = 0; n <= 2000; ++n) {
    CHECK(is_probable_prime(n) == sieve[n]);
  }
  for (int carmichael : {561, 1105, 1729, 2465, 29341}) {
    CHECK_FALSE(is_probable_prime(carmichael));
  }
  CHECK(is_probable_prime(BigInt("2305843009213693951")));  // 2^61 - 1
  CHECK_FALSE(is_probable_prime((BigInt(1) << 61) + 1));
}

TEST_CASE("perfect_power_base finds the smallest root") {
  CHECK(perfect_power_base(8) == BigInt(2));
  CHECK(perfect_power_base(81) == BigInt(3));
  CHECK(perfect_power_base(1024) == BigInt(2));
  CHECK(perfect_power_base(36) == BigInt(6));
  CHECK(perfect_power_base(49) == BigInt(7));
  CHECK(perfect_power_base(60466176) == BigInt(6));  // 6^10
  CHECK(perfect_power_base(BigInt(1) << 61) == BigInt(2));
  CHECK(perfect_power_base(15) == std::nullopt);
  CHECK(perfect_power_base(97) == std::nullopt);
  CHECK(perfect_power_base(2) == std::nullopt);
}
