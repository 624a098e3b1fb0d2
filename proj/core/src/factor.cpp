#include "dqshor/factor.hpp"

#include <algorithm>
#include <initializer_list>

#include "dqshor/errors.hpp"

namespace dqshor {

namespace {

std::pair<BigInt, BigInt> ordered_pair(const BigInt& f, const BigInt& N) {
  BigInt g = N / f;
  if (f <= g) return {f, g};
  return {g, f};
}

}  // namespace

FactorReport shor_factor(const BigInt& N, unsigned k, double epsilon, const RunOptions& options,
                         Rng& rng, unsigned max_attempts, unsigned lambda_max) {
  if (N < 2) throw plan_error("factoring needs N >= 2");
  if (is_probable_prime(N)) throw plan_error("N is prime; nothing to factor");

  FactorReport report;
  report.N = N;
  if ((N & 1) == 0) {
    report.factors = ordered_pair(2, N);
    report.classical_shortcut = true;
    return report;
  }
  if (const std::optional<BigInt> q = perfect_power_base(N)) {
    report.factors = ordered_pair(*q, N);
    report.classical_shortcut = true;
    return report;
  }
  // Surface plan configuration errors before consuming any randomness.
  make_plan_for_bits(static_cast<unsigned>(bit_length(N)), k, epsilon);

  for (unsigned attempt = 1; attempt <= max_attempts; ++attempt) {
    report.attempts_used = attempt;
    AttemptRecord rec;
    rec.a = rng.uniform_bigint(N - 2) + 2;  // uniform over [2, N-1]

    const BigInt g = gcd(rec.a, N);
    if (g != 1) {
      rec.lucky_gcd = true;
      report.factors = ordered_pair(g, N);
      report.attempts.push_back(std::move(rec));
      return report;
    }

    const NodePlan plan = make_plan(N, rec.a, k, epsilon);
    rec.run = run_distributed(plan, options, rng);
    if (rec.run.combined) {
      if (const std::optional<OrderResult> rec_order =
              recover_order(*rec.run.combined, plan, N, rec.a, lambda_max)) {
        rec.recovered_order = rec_order->r;
        const BigInt& r = rec_order->r;
        if ((r & 1) == 0) {
          const BigInt h = modpow(rec.a, r >> 1, N);
          if (h != N - 1) {
            const BigInt split[2] = {gcd(BigInt(h + 1), N), gcd(BigInt(h - 1), N)};
            for (const BigInt& f : split) {
              if (f > 1 && f < N) {
                report.factors = ordered_pair(f, N);
                break;
              }
            }
          }
        }
      }
    }
    report.attempts.push_back(std::move(rec));
    if (report.factors) return report;
  }
  return report;  // attempts exhausted, factors left empty
}

}  // namespace dqshor
