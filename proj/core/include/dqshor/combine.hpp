#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dqshor/bitstring.hpp"
#include "dqshor/plan.hpp"

namespace dqshor {

/// Correction in {-1, 0, +1} aligning two overlap bit-pairs: the unique b
/// with (last_two + b) mod 4 == first_two. A gap of 2 mod 4 has no such b;
/// that is the recoverable mismatch case (nullopt).
std::optional<int> correction_bit(const BitString& last_two, const BitString& first_two);

struct CombineResult {
  BitString m;                      // stitched estimate, width 2L + 1 + p
  std::vector<int> correction_bits; // cb_1..cb_{k-1}
};

/// Stitch per-node outcomes into one phase estimate (right to left).
///
/// Adjacent windows overlap by two bits: node u's last two bits re-measure
/// the first two of the already-stitched suffix, and the unique correction
/// in {-1,0,+1} (carried through (m_u + cb) mod 2^w) repairs truncation
/// slips before the overlap is dropped. Outcome widths must match the plan
/// (w_j for j < k, t_k for the last). Throws correction_mismatch with the
/// failing node index when the overlap gap is 2 mod 4; k = 1 passes m_1
/// through untouched.
CombineResult combine_results(const NodePlan& plan, std::span<const BitString> outcomes);

/// Does an outcome tuple satisfy the success hypothesis for source phase
/// s0/r? Last node: |m_k - window(s0/r)| < 2^p with matching leading two
/// bits; earlier nodes: circular distance at most 1 from their windows.
bool hypothesis_check(const NodePlan& plan, const BigInt& r, const BigInt& s0,
                      std::span<const BitString> outcomes);

/// Exhaustive guarantee check: for every s0 < r and every outcome tuple
/// passing hypothesis_check, combine_results must succeed and its output m
/// must satisfy |m / 2^(2L+1+p) - s0/r| <= 2^-(2L+1) (verified in exact
/// integer arithmetic). Cost grows with r and 2^p only.
bool theorem_oracle(const NodePlan& plan, const BigInt& r);

}  // namespace dqshor
