#include "dqshor/combine.hpp"

#include <stdexcept>
#include <string>

#include "dqshor/errors.hpp"
#include "dqshor/fraction.hpp"

namespace dqshor {

namespace {

void check_outcome_shape(const NodePlan& plan, std::span<const BitString> outcomes) {
  if (outcomes.size() != plan.k)
    throw std::invalid_argument("expected one outcome per node, got " +
                                std::to_string(outcomes.size()));
  for (unsigned j = 1; j <= plan.k; ++j) {
    if (outcomes[j - 1].width() != plan.measured_width(j))
      throw std::invalid_argument("outcome " + std::to_string(j) + " has width " +
                                  std::to_string(outcomes[j - 1].width()) + ", plan wants " +
                                  std::to_string(plan.measured_width(j)));
  }
}

}  // namespace

std::optional<int> correction_bit(const BitString& last_two, const BitString& first_two) {
  if (last_two.width() != 2 || first_two.width() != 2)
    throw std::invalid_argument("correction_bit: both arguments must be two bits wide");
  const BigInt d = (first_two.value() - last_two.value() + 4) % 4;
  if (d == 0) return 0;
  if (d == 1) return 1;
  if (d == 3) return -1;
  return std::nullopt;
}

CombineResult combine_results(const NodePlan& plan, std::span<const BitString> outcomes) {
  check_outcome_shape(plan, outcomes);
  BitString current = outcomes[plan.k - 1];
  std::vector<int> correction_bits(plan.k - 1, 0);
  for (unsigned u = plan.k - 1; u >= 1; --u) {
    const BitString& mu = outcomes[u - 1];
    const BitString last_two = mu.slice(mu.width() - 1, mu.width());
    const BitString first_two = current.slice(1, 2);
    const std::optional<int> cb = correction_bit(last_two, first_two);
    if (!cb) throw correction_mismatch(u);
    correction_bits[u - 1] = *cb;
    // Corrected window replaces its two overlap bits at the suffix head.
    current = mu.add_mod(*cb).concat(current.slice(3, current.width()));
  }
  return {current, std::move(correction_bits)};
}

bool hypothesis_check(const NodePlan& plan, const BigInt& r, const BigInt& s0,
                      std::span<const BitString> outcomes) {
  check_outcome_shape(plan, outcomes);
  if (r < 1) throw std::invalid_argument("hypothesis_check: r must be >= 1");
  if (s0 < 0 || s0 >= r) throw std::invalid_argument("hypothesis_check: need 0 <= s0 < r");
  const PhaseFraction phi(s0, r);
  const unsigned k = plan.k;
  const unsigned W = plan.output_width();

  const BitString ideal_last = frac_bits(phi, plan.l(k), W);
  const BitString& mk = outcomes[k - 1];
  if (abs(mk.value() - ideal_last.value()) >= pow2(plan.p)) return false;
  if (mk.slice(1, 2) != frac_bits(phi, plan.l(k), plan.l(k) + 1)) return false;

  for (unsigned u = 1; u < k; ++u) {
    const BitString ideal = frac_bits(phi, plan.l(u), plan.l(u + 1) + 1);
    if (dt_distance(outcomes[u - 1], ideal) > 1) return false;
  }
  return true;
}

bool theorem_oracle(const NodePlan& plan, const BigInt& r) {
  if (r < 1) throw std::invalid_argument("theorem_oracle: r must be >= 1");
  const unsigned k = plan.k;
  const unsigned W = plan.output_width();
  const BigInt two_w = pow2(W);
  const BigInt rhs = r * two_w;
  const BigInt scale = pow2(2 * plan.L + 1);
  const BigInt pad = pow2(plan.p);

  for (BigInt s0 = 0; s0 < r; ++s0) {
    const PhaseFraction phi(s0, r);
    std::vector<std::vector<BitString>> cands;
    for (unsigned u = 1; u < k; ++u) {
      const BitString ideal = frac_bits(phi, plan.l(u), plan.l(u + 1) + 1);
      cands.push_back({ideal.add_mod(-1), ideal, ideal.add_mod(1)});
    }
    const BitString ideal_last = frac_bits(phi, plan.l(k), W);
    const BitString lead_two = frac_bits(phi, plan.l(k), plan.l(k) + 1);
    const unsigned tk = plan.t(k);
    std::vector<BitString> last_cands;
    for (BigInt d = 1 - pad; d < pad; ++d) {
      const BigInt v = ideal_last.value() + d;
      if (v < 0 || v >= pow2(tk)) continue;
      BitString cand(tk, v);
      if (cand.slice(1, 2) != lead_two) continue;
      last_cands.push_back(std::move(cand));
    }
    cands.push_back(std::move(last_cands));

    std::size_t total = 1;
    for (const auto& c : cands) total *= c.size();
    for (std::size_t it = 0; it < total; ++it) {
      std::vector<BitString> ms;
      ms.reserve(k);
      std::size_t rem = it;
      for (std::size_t i = cands.size(); i-- > 0;) {
        ms.insert(ms.begin(), cands[i][rem % cands[i].size()]);
        rem /= cands[i].size();
      }
      if (!hypothesis_check(plan, r, s0, ms)) return false;
      try {
        const CombineResult res = combine_results(plan, ms);
        if (abs(res.m.value() * r - s0 * two_w) * scale > rhs) return false;
      } catch (const correction_mismatch&) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace dqshor
