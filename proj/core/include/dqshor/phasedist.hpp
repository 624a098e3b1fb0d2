#pragma once

#include <span>

#include "dqshor/bitstring.hpp"
#include "dqshor/fraction.hpp"
#include "dqshor/plan.hpp"
#include "dqshor/rng.hpp"

namespace dqshor {

/// Probability that t-qubit phase estimation of eigenphase omega yields the
/// t-bit outcome m.
///
/// The defining sum |2^-t * sum_j exp(2*pi*i*j*(omega - m/2^t))|^2 collapses
/// to 1 when delta = omega - m/2^t is an integer (point mass) and otherwise
/// to sin^2(pi*2^t*delta) / (2^2t * sin^2(pi*delta)). delta is reduced mod 1
/// as an exact rational before any trigonometric call, so denominators of
/// any size stay bit-exact.
double pe_prob(unsigned t, const PhaseFraction& omega, const BitString& m);

/// Probability that the first w bits of the t-bit outcome equal `prefix`
/// (w <= t). A prefix is a contiguous interval of outcome values, so this is
/// an interval sum of pe_prob; small intervals are summed directly, large
/// ones through an exact lattice decomposition (see interval_prob).
double pe_marginal_prob(unsigned t, const PhaseFraction& omega, unsigned w,
                        const BitString& prefix);

/// Draw a w-bit prefix with probability pe_marginal_prob(t, omega, w, .).
/// Exact inverse-CDF in outcome order; consumes exactly one uniform variate,
/// so a fixed seed fixes the draw.
BitString pe_sample(unsigned t, const PhaseFraction& omega, unsigned w, Rng& rng);

/// Eigenphase seen by the node whose exponent window starts at bit l_j:
/// ((2^(l_j - 1) * s) mod r) / r.
PhaseFraction node_phase(const BigInt& s, const BigInt& r, unsigned l_j);

/// Joint probability of one outcome per node under the exact run
/// distribution: the uniform eigenvalue mixture (1/r) * sum_s of the product
/// over nodes of pe_marginal_prob at that node's phase. `outcomes[j]` must
/// have the plan's measured width w_{j+1}.
double joint_outcome_prob(const NodePlan& plan, const BigInt& r,
                          std::span<const BitString> outcomes);

namespace detail {

/// Sum of pe_prob(t, omega, m) over lo <= m < hi by direct evaluation.
/// Cost O(hi - lo); intended for intervals up to ~2^18 values.
double interval_prob_direct(unsigned t, const PhaseFraction& omega, const BigInt& lo,
                            const BigInt& hi);

/// Same sum through the lattice identity pi^2/sin^2(pi*y) = sum_n 1/(y-n)^2:
/// central bands exactly via trigamma differences, far bands collapsed with
/// digamma/trigamma/polygamma tails. Accurate to well under 1e-9 for t >= 8;
/// cost independent of interval length. Requires t <= 900.
double interval_prob_lattice(unsigned t, const PhaseFraction& omega, const BigInt& lo,
                             const BigInt& hi);

/// Dispatch: direct for small intervals or small t, lattice otherwise.
double interval_prob(unsigned t, const PhaseFraction& omega, const BigInt& lo,
                     const BigInt& hi);

}  // namespace detail

}  // namespace dqshor
