#include "dqshor/plan.hpp"

#include <cmath>

#include "dqshor/errors.hpp"

namespace dqshor {

namespace {

// Smallest p >= 1 with 2^p >= 2 + 1/(2*eps_node), written multiplicatively
// to dodge log2 rounding at exact powers of two.
unsigned padding_bits(double eps_node) {
  unsigned p = 1;
  while ((std::ldexp(1.0, static_cast<int>(p)) - 2.0) * 2.0 * eps_node < 1.0) {
    ++p;
    if (p > 64) throw plan_error("epsilon too small: padding would exceed 64 bits");
  }
  return p;
}

NodePlan build(BigInt N, BigInt a, unsigned L, unsigned k, double epsilon,
               const std::optional<std::vector<unsigned>>& boundaries) {
  if (k < 1) throw plan_error("node count k must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw plan_error("epsilon must lie in (0, 1)");
  if (L < 2) throw plan_error("modulus bit length must be >= 2");

  NodePlan plan;
  plan.modulus = std::move(N);
  plan.base = std::move(a);
  plan.L = L;
  plan.k = k;
  plan.epsilon = epsilon;
  plan.epsilon_node = epsilon / k;
  plan.p = padding_bits(plan.epsilon_node);

  if (boundaries) {
    const auto& l = *boundaries;
    if (l.size() != k + 1) throw plan_error("need k+1 boundaries l_1..l_{k+1}");
    if (l.front() != 1) throw plan_error("boundaries must start at l_1 = 1");
    if (l.back() != 2 * L) throw plan_error("boundaries must end at l_{k+1} = 2L");
    for (unsigned j = 0; j + 1 < l.size(); ++j)
      if (l[j] >= l[j + 1]) throw plan_error("boundaries must increase strictly");
    plan.boundaries = l;
    plan.custom_boundaries = true;
  } else {
    if (L % k != 0)
      throw plan_error("k must divide the modulus bit length (or pass custom boundaries)");
    plan.boundaries.resize(k + 1);
    for (unsigned j = 1; j <= k; ++j) plan.boundaries[j - 1] = (j - 1) * (L / k) + 1;
    plan.boundaries[k] = 2 * L;
  }

  plan.widths.resize(k);
  plan.measured.resize(k);
  for (unsigned j = 1; j <= k; ++j) {
    unsigned span = plan.boundaries[j] + 2 - plan.boundaries[j - 1];
    plan.widths[j - 1] = span + plan.p;
    plan.measured[j - 1] = (j < k) ? span : plan.widths[j - 1];
  }
  return plan;
}

}  // namespace

NodePlan make_plan(const BigInt& N, const BigInt& a, unsigned k, double epsilon,
                   const std::optional<std::vector<unsigned>>& boundaries) {
  if (N < 2) throw plan_error("modulus must be >= 2");
  if (a <= 1 || a >= N) throw plan_error("base a must satisfy 1 < a < N");
  return build(N, a, static_cast<unsigned>(bit_length(N)), k, epsilon, boundaries);
}

NodePlan make_plan_for_bits(unsigned L, unsigned k, double epsilon,
                            const std::optional<std::vector<unsigned>>& boundaries) {
  return build(0, 0, L, k, epsilon, boundaries);
}

}  // namespace dqshor
