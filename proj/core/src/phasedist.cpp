#include "dqshor/phasedist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <boost/multiprecision/integer.hpp>

#include "dqshor/errors.hpp"

namespace dqshor {

namespace {

constexpr double kPi = std::numbers::pi;

// Direct-summation limits: full outcome space at or below 2^14, arbitrary
// intervals up to 2^18 terms. The lattice path needs 2^t inside double
// exponent range with headroom.
constexpr unsigned kDirectFullT = 14;
constexpr std::size_t kDirectIntervalBits = 18;
constexpr unsigned kLatticeMaxT = 900;

// x = 2^t * omega split into integer part and exact fractional remainder.
// Everything downstream keys off this: the outcome distribution is a point
// mass at xfloor iff the remainder vanishes, and otherwise
//   pe_prob(m) = sin^2(pi*fx) / (2^2t * sin^2(pi*((x - m)/2^t mod 1))),
// since sin^2(pi*(x - m)) is independent of the integer m.
struct PhaseSplit {
  BigInt xfloor;
  BigInt fnum, fden;  // remainder fx = fnum/fden in [0,1), reduced
  bool point_mass;
  double fx, cfx;     // fx and 1-fx, each converted from the exact rational
  double sin_fx;      // sin(pi*fx) evaluated at the symmetrized argument
};

PhaseSplit split_phase(unsigned t, const PhaseFraction& omega) {
  PhaseSplit s;
  BigInt scaled = omega.numerator() << t;
  s.xfloor = scaled / omega.denominator();
  s.fnum = scaled % omega.denominator();
  s.fden = omega.denominator();
  BigInt g = boost::multiprecision::gcd(s.fnum, s.fden);
  if (g > 1) {
    s.fnum /= g;
    s.fden /= g;
  }
  s.point_mass = s.fnum.is_zero();
  if (!s.point_mass) {
    s.fx = ratio_as_double(s.fnum, s.fden);
    s.cfx = ratio_as_double(s.fden - s.fnum, s.fden);
    s.sin_fx = std::sin(kPi * std::min(s.fx, s.cfx));
  } else {
    s.fx = 0.0;
    s.cfx = 1.0;
    s.sin_fx = 0.0;
  }
  return s;
}

double sq(double v) { return v * v; }

// sin(pi * (dnum/dden)) with the argument folded to [0, 1/2] exactly first,
// so values near 0 and near 1 keep full relative precision.
double sin_pi_exact(const BigInt& dnum, const BigInt& dden) {
  BigInt sym = dnum * 2 > dden ? dden - dnum : dnum;
  return std::sin(kPi * ratio_as_double(sym, dden));
}

struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double v) {
    double y = v - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

void check_interval(unsigned t, const BigInt& lo, const BigInt& hi) {
  if (lo < 0 || lo > hi || bit_length(hi) > t + 1 || hi > pow2(t))
    throw std::invalid_argument("interval_prob: need 0 <= lo <= hi <= 2^t");
}

}  // namespace

double pe_prob(unsigned t, const PhaseFraction& omega, const BitString& m) {
  if (t < 1) throw std::invalid_argument("pe_prob: t must be >= 1");
  if (m.width() != t) throw std::invalid_argument("pe_prob: outcome width must equal t");
  PhaseSplit ps = split_phase(t, omega);
  if (ps.point_mass) return m.value() == ps.xfloor ? 1.0 : 0.0;
  // delta = omega - m/2^t reduced mod 1; never an integer off the point mass.
  BigInt dden = omega.denominator() << t;
  BigInt dnum = ((omega.numerator() << t) - m.value() * omega.denominator()) % dden;
  if (dnum < 0) dnum += dden;
  double ratio = ps.sin_fx / sin_pi_exact(dnum, dden);
  return sq(std::ldexp(ratio, -static_cast<int>(t)));
}

namespace detail {

double interval_prob_direct(unsigned t, const PhaseFraction& omega, const BigInt& lo,
                            const BigInt& hi) {
  check_interval(t, lo, hi);
  PhaseSplit ps = split_phase(t, omega);
  if (ps.point_mass) return (lo <= ps.xfloor && ps.xfloor < hi) ? 1.0 : 0.0;
  if (bit_length(hi - lo) > kDirectIntervalBits + 1)
    throw std::invalid_argument("interval_prob_direct: interval too long");
  const BigInt dden = omega.denominator() << t;
  const BigInt step = omega.denominator();
  // delta numerator at m = lo, then decremented by den per outcome.
  BigInt dnum = ((omega.numerator() << t) - lo * step) % dden;
  if (dnum < 0) dnum += dden;
  KahanSum acc;
  const int shift = -static_cast<int>(t);
  for (BigInt m = lo; m < hi; ++m) {
    acc.add(sq(std::ldexp(ps.sin_fx / sin_pi_exact(dnum, dden), shift)));
    dnum -= step;
    if (dnum < 0) dnum += dden;
  }
  return acc.s;
}

double interval_prob_lattice(unsigned t, const PhaseFraction& omega, const BigInt& lo,
                             const BigInt& hi) {
  check_interval(t, lo, hi);
  if (t > kLatticeMaxT)
    throw std::domain_error("interval_prob_lattice: t exceeds double exponent headroom");
  PhaseSplit ps = split_phase(t, omega);
  if (ps.point_mass) return (lo <= ps.xfloor && ps.xfloor < hi) ? 1.0 : 0.0;
  if (lo == hi) return 0.0;

  using boost::math::digamma;
  using boost::math::polygamma;
  using boost::math::trigamma;
  const double fx = ps.fx, cfx = ps.cfx;
  const BigInt T = pow2(t);
  auto dbl = [](const BigInt& v) { return v.convert_to<double>(); };

  // One lattice band: sum over m in [lo, hi) of 1/(z - m)^2 at z = zi + fx.
  // Arguments that would be "integer - fx" are rewritten through cfx so
  // near-cancellation can't wash out the fractional part.
  auto band = [&](const BigInt& zi) {
    if (zi >= hi) return trigamma(dbl(zi - hi + 1) + fx) - trigamma(dbl(zi - lo + 1) + fx);
    if (zi < lo) return trigamma(dbl(lo - zi - 1) + cfx) - trigamma(dbl(hi - zi - 1) + cfx);
    return (trigamma(fx) - trigamma(dbl(zi - lo + 1) + fx)) +
           (trigamma(cfx) - trigamma(dbl(hi - zi - 1) + cfx));
  };

  double G = 0.0;
  for (int n = -3; n <= 3; ++n) G += band(ps.xfloor - n * T);

  // Bands |n| >= 4 collapse through the asymptotic
  // trigamma(y) ~ 1/y + 1/(2y^2) + 1/(6y^3): each order telescopes across n
  // into one digamma / trigamma / polygamma(2) pair. Remainder is O(T^-5).
  const double Td = std::ldexp(1.0, static_cast<int>(t));
  const double n0 = 4.0;
  auto tail = [&](double a, double b) {
    return (digamma(b / Td + n0) - digamma(a / Td + n0)) / Td +
           (trigamma(a / Td + n0) - trigamma(b / Td + n0)) / (2.0 * Td * Td) +
           (polygamma(2, b / Td + n0) - polygamma(2, a / Td + n0)) / (12.0 * Td * Td * Td);
  };
  G += tail(dbl(lo - ps.xfloor) - fx, dbl(hi - ps.xfloor) - fx);
  G += tail(dbl(ps.xfloor - hi + 1) + fx, dbl(ps.xfloor - lo + 1) + fx);

  return std::clamp(sq(ps.sin_fx) * G / (kPi * kPi), 0.0, 1.0);
}

double interval_prob(unsigned t, const PhaseFraction& omega, const BigInt& lo, const BigInt& hi) {
  check_interval(t, lo, hi);
  if (t <= kDirectFullT || bit_length(hi - lo) <= kDirectIntervalBits)
    return interval_prob_direct(t, omega, lo, hi);
  return interval_prob_lattice(t, omega, lo, hi);
}

}  // namespace detail

double pe_marginal_prob(unsigned t, const PhaseFraction& omega, unsigned w,
                        const BitString& prefix) {
  if (w < 1 || w > t) throw std::invalid_argument("pe_marginal_prob: need 1 <= w <= t");
  if (prefix.width() != w) throw std::invalid_argument("pe_marginal_prob: prefix width mismatch");
  BigInt lo = prefix.value() << (t - w);
  return detail::interval_prob(t, omega, lo, lo + pow2(t - w));
}

BitString pe_sample(unsigned t, const PhaseFraction& omega, unsigned w, Rng& rng) {
  if (w < 1 || w > t) throw std::invalid_argument("pe_sample: need 1 <= w <= t");
  // Every call consumes exactly one variate, point mass included, so draw
  // traces are shape-stable across phases.
  const double u = rng.canonical();
  PhaseSplit ps = split_phase(t, omega);
  BigInt outcome;
  if (ps.point_mass) {
    outcome = ps.xfloor;
  } else if (t <= kDirectFullT) {
    // Running inverse-CDF in outcome order.
    const BigInt dden = omega.denominator() << t;
    const BigInt step = omega.denominator();
    BigInt dnum = (omega.numerator() << t) % dden;
    KahanSum acc;
    const int shift = -static_cast<int>(t);
    const BigInt T = pow2(t);
    outcome = T - 1;
    for (BigInt m = 0; m < T; ++m) {
      acc.add(sq(std::ldexp(ps.sin_fx / sin_pi_exact(dnum, dden), shift)));
      if (acc.s > u) {
        outcome = m;
        break;
      }
      dnum -= step;
      if (dnum < 0) dnum += dden;
    }
  } else {
    // Bisect the exact CDF: smallest m with P(outcome <= m) > u.
    BigInt lo = 0, hi = pow2(t) - 1;
    while (lo < hi) {
      BigInt mid = (lo + hi) >> 1;
      if (detail::interval_prob(t, omega, 0, mid + 1) > u)
        hi = mid;
      else
        lo = mid + 1;
    }
    outcome = lo;
  }
  return BitString(t, outcome).slice(1, w);
}

PhaseFraction node_phase(const BigInt& s, const BigInt& r, unsigned l_j) {
  if (r < 1) throw std::invalid_argument("node_phase: r must be >= 1");
  if (s < 0 || s >= r) throw std::invalid_argument("node_phase: need 0 <= s < r");
  if (l_j < 1) throw std::invalid_argument("node_phase: l_j must be >= 1");
  if (r == 1) return PhaseFraction::zero();
  BigInt shifted = boost::multiprecision::powm(BigInt(2), BigInt(l_j - 1), r);
  return PhaseFraction(shifted * s % r, r);
}

double joint_outcome_prob(const NodePlan& plan, const BigInt& r,
                          std::span<const BitString> outcomes) {
  if (r < 1) throw std::invalid_argument("joint_outcome_prob: r must be >= 1");
  if (outcomes.size() != plan.k)
    throw std::invalid_argument("joint_outcome_prob: need one outcome per node");
  for (unsigned j = 1; j <= plan.k; ++j)
    if (outcomes[j - 1].width() != plan.measured_width(j))
      throw std::invalid_argument("joint_outcome_prob: outcome width mismatch at node " +
                                  std::to_string(j));
  double total = 0.0;
  for (BigInt s = 0; s < r; ++s) {
    double prod = 1.0;
    for (unsigned j = 1; j <= plan.k && prod > 0.0; ++j)
      prod *= pe_marginal_prob(plan.t(j), node_phase(s, r, plan.l(j)), plan.measured_width(j),
                               outcomes[j - 1]);
    total += prod;
  }
  return total / ratio_as_double(r, 1);
}

}  // namespace dqshor
