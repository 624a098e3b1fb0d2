#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dqshor/distsim.hpp"
#include "dqshor/numtheory.hpp"
#include "dqshor/rng.hpp"

namespace dqshor {

struct AttemptRecord {
  BigInt a;
  std::optional<BigInt> recovered_order;
  RunOutcome run;
  bool lucky_gcd = false;  // gcd(a, N) > 1 short-circuit, no quantum step
};

/// Result of a factoring session. factors is empty when max_attempts ran
/// out (the AttemptsExhausted condition; CLI maps it to exit code 2).
struct FactorReport {
  BigInt N;
  std::optional<std::pair<BigInt, BigInt>> factors;  // f * g == N, 1 < f <= g < N
  unsigned attempts_used = 0;
  std::vector<AttemptRecord> attempts;
  bool classical_shortcut = false;  // even / perfect power, no quantum step
};

/// Factor N through distributed order finding.
///
/// Classical pre-checks first: even N and perfect powers are answered
/// directly; primes are rejected with plan_error (nothing to factor).
/// Each attempt draws a uniform base a in [2, N-1], short-circuits on a
/// lucky gcd, otherwise runs the pipeline, recovers the order and applies
/// the even-order reduction gcd(a^(r/2) +- 1, N). Mismatched or unlucky
/// attempts are consumed, never retried in place.
FactorReport shor_factor(const BigInt& N, unsigned k, double epsilon, const RunOptions& options,
                         Rng& rng, unsigned max_attempts = 25,
                         unsigned lambda_max = 64);

}  // namespace dqshor
