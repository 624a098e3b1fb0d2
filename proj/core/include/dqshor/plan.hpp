#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dqshor/bigint.hpp"

namespace dqshor {

/// Static layout of a k-node order-finding run over a modulus of bit length
/// L: exponent boundaries l_1 = 1 < ... < l_{k+1} = 2L, per-node control
/// widths t_j, measured widths w_j, and the stitched output width 2L + 1 + p.
///
/// Every width is derived once here; downstream code treats the plan as
/// immutable.
struct NodePlan {
  BigInt modulus;  // N; 0 when planned from a bit length only
  BigInt base;     // a; 0 when not applicable
  unsigned L = 0;
  unsigned k = 1;
  double epsilon = 0.5;
  double epsilon_node = 0.5;  // epsilon / k
  unsigned p = 0;             // tail padding: smallest p with 2^p >= 2 + 1/(2*epsilon_node)
  bool custom_boundaries = false;
  std::vector<unsigned> boundaries;  // l_1..l_{k+1}, size k+1

  unsigned l(unsigned j) const { return boundaries.at(j - 1); }  // 1-based
  unsigned t(unsigned j) const { return widths.at(j - 1); }
  unsigned measured_width(unsigned j) const { return measured.at(j - 1); }

  /// Width of the stitched estimate: 2L + 1 + p.
  unsigned output_width() const { return 2 * L + 1 + p; }

  std::vector<unsigned> widths;    // t_j = l_{j+1} + 2 - l_j + p
  std::vector<unsigned> measured;  // w_j = l_{j+1} + 2 - l_j for j < k, w_k = t_k
};

/// Plan for factoring context: N >= 2, 1 < a < N, k >= 1, epsilon in (0, 1).
/// Default boundaries need k | L; custom boundaries must run 1 = l_1 < ... <
/// l_{k+1} = 2L. Throws plan_error on violations.
NodePlan make_plan(const BigInt& N, const BigInt& a, unsigned k, double epsilon,
                   const std::optional<std::vector<unsigned>>& boundaries = std::nullopt);

/// Resource-analysis plan from a bit length alone (no modulus attached).
NodePlan make_plan_for_bits(unsigned L, unsigned k, double epsilon,
                            const std::optional<std::vector<unsigned>>& boundaries = std::nullopt);

}  // namespace dqshor
