#include "dqshor/numtheory.hpp"

#include <array>
#include <stdexcept>

#include <boost/multiprecision/integer.hpp>

namespace dqshor {

namespace {

// Deterministic Miller-Rabin witness set, exact for n < 3.3e24.
constexpr std::array<unsigned, 12> kWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

BigInt modpow(BigInt a, BigInt e, const BigInt& N) {
  if (N < 1) throw std::invalid_argument("modpow: modulus must be >= 1");
  if (e < 0) throw std::invalid_argument("modpow: exponent must be >= 0");
  if (N == 1) return 0;
  a %= N;
  if (a < 0) a += N;
  return boost::multiprecision::powm(a, e, N);
}

BigInt gcd(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(abs(a), abs(b));
}

std::optional<BigInt> order_bruteforce(const BigInt& N, const BigInt& a, const BigInt& cap) {
  if (N < 2) throw std::invalid_argument("order_bruteforce: modulus must be >= 2");
  BigInt base = a % N;
  if (base < 0) base += N;
  if (gcd(base, N) != 1)
    throw std::invalid_argument("order_bruteforce: a and N must be coprime");
  BigInt cur = base;
  for (BigInt r = 1; r <= cap; ++r) {
    if (cur == 1) return r;
    cur = cur * base % N;
  }
  return std::nullopt;
}

std::vector<Convergent> convergents(const BigInt& num, const BigInt& den) {
  if (den < 1) throw std::invalid_argument("convergents: denominator must be >= 1");
  if (num < 0) throw std::invalid_argument("convergents: numerator must be >= 0");
  std::vector<Convergent> out;
  BigInt a = num, b = den;
  BigInt p1 = 1, p2 = 0;  // p_{-1}, p_{-2}
  BigInt q1 = 0, q2 = 1;  // q_{-1}, q_{-2}
  while (b != 0) {
    const BigInt ai = a / b;
    const BigInt rem = a % b;
    BigInt p = ai * p1 + p2;
    BigInt q = ai * q1 + q2;
    out.push_back({p, q});
    p2 = p1;
    p1 = std::move(p);
    q2 = q1;
    q1 = std::move(q);
    a = b;
    b = rem;
  }
  return out;
}

std::optional<OrderResult> recover_order(const BitString& m, const NodePlan& plan,
                                         const BigInt& N, const BigInt& a,
                                         unsigned lambda_max) {
  if (m.width() != plan.output_width())
    throw std::invalid_argument("recover_order: estimate width does not match the plan");
  if (N < 2 || a < 1 || a >= N)
    throw std::invalid_argument("recover_order: need N >= 2 and 1 <= a < N");
  if (gcd(a, N) != 1) throw std::invalid_argument("recover_order: a and N must be coprime");
  if (lambda_max < 1) throw std::invalid_argument("recover_order: lambda_max must be >= 1");
  if (a == 1) return OrderResult{1, 0, OrderResult::Source::convergent};
  if (m.value().is_zero()) return std::nullopt;

  BigInt best = 0;
  auto best_source = OrderResult::Source::convergent;
  unsigned tested = 0;
  for (const Convergent& c : convergents(m.value(), pow2(plan.output_width()))) {
    if (c.p.is_zero()) continue;  // 0/1 carries no denominator information
    if (c.q >= N) break;          // the order is below N; denominators only grow
    const BigInt aq = modpow(a, c.q, N);
    BigInt cur = aq;
    for (unsigned lambda = 1; lambda <= lambda_max; ++lambda) {
      ++tested;
      if (cur == 1) {
        BigInt cand = c.q * lambda;
        if (best.is_zero() || cand < best) {
          best = std::move(cand);
          best_source =
              lambda == 1 ? OrderResult::Source::convergent : OrderResult::Source::lambda_search;
        }
        break;  // larger lambda on the same q only gives larger multiples
      }
      cur = cur * aq % N;
    }
  }
  if (best.is_zero()) return std::nullopt;
  return OrderResult{std::move(best), tested, best_source};
}

bool is_probable_prime(const BigInt& n) {
  if (n < 2) return false;
  for (unsigned w : kWitnesses) {
    if (n == w) return true;
    if (n % w == 0) return false;
  }
  BigInt d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (unsigned w : kWitnesses) {
    BigInt x = modpow(w, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness_found = true;
    for (unsigned i = 1; i < s; ++i) {
      x = x * x % n;
      if (x == n - 1) {
        witness_found = false;
        break;
      }
    }
    if (witness_found) return false;
  }
  return true;
}

std::optional<BigInt> perfect_power_base(const BigInt& n) {
  if (n < 4) return std::nullopt;
  const std::size_t bits = bit_length(n);
  // Largest exponent first so the returned base is minimal.
  for (std::size_t e = bits - 1; e >= 2; --e) {
    BigInt lo = 1;
    BigInt hi = pow2(bits / e + 1);
    while (lo < hi) {
      const BigInt mid = (lo + hi + 1) >> 1;
      if (boost::multiprecision::pow(mid, static_cast<unsigned>(e)) <= n)
        lo = mid;
      else
        hi = mid - 1;
    }
    if (lo >= 2 && boost::multiprecision::pow(lo, static_cast<unsigned>(e)) == n) return lo;
  }
  return std::nullopt;
}

}  // namespace dqshor
