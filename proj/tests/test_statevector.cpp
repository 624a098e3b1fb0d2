#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "dqshor/errors.hpp"
#include "dqshor/phasedist.hpp"
#include "dqshor/rng.hpp"
#include "dqshor/statevector.hpp"

using namespace dqshor;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::vector<StateVector::Amp> random_state(std::size_t n, Rng& rng) {
  std::vector<StateVector::Amp> amps(n);
  double norm2 = 0.0;
  for (auto& a : amps) {
    a = {rng.canonical() - 0.5, rng.canonical() - 0.5};
    norm2 += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& a : amps) a *= inv;
  return amps;
}

double max_amp_diff(const std::vector<StateVector::Amp>& a,
                    const std::vector<StateVector::Amp>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("hadamards spread a basis state uniformly") {
  auto sv = StateVector::init_state({{"x", 3}}, {BigInt(0)});
  sv.apply_hadamards("x");
  const double expect = 1.0 / std::sqrt(8.0);
  for (const auto& a : sv.amplitudes()) {
    CHECK(std::abs(a.real() - expect) < 1e-12);
    CHECK(std::abs(a.imag()) < 1e-14);
  }
  CHECK(sv.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("qft then inverse qft is the identity") {
  Rng rng(31);
  auto amps = random_state(32, rng);
  auto sv = StateVector::from_amplitudes({{"x", 5}}, amps);
  sv.apply_qft("x");
  sv.apply_inverse_qft("x");
  CHECK(max_amp_diff(sv.amplitudes(), amps) < 1e-12);
  CHECK(sv.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inverse qft matches the dense conjugate transform") {
  Rng rng(32);
  const std::size_t n = 16;
  auto amps = random_state(n, rng);

  std::vector<StateVector::Amp> expect(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = -2.0 * kPi * static_cast<double>(j * k) / static_cast<double>(n);
      expect[k] += amps[j] * std::polar(1.0, ang);
    }
    expect[k] /= std::sqrt(static_cast<double>(n));
  }

  auto sv = StateVector::from_amplitudes({{"x", 4}}, amps);
  sv.apply_inverse_qft("x");
  CHECK(max_amp_diff(sv.amplitudes(), expect) < 1e-12);
}

TEST_CASE("inverse qft acts on one register of a product state") {
  // Embed a 3-qubit register between two spectator registers and check the
  // transform touches only the middle block.
  Rng rng(33);
  auto mid = random_state(8, rng);
  std::vector<StateVector::Amp> full(2 * 8 * 2, 0.0);
  //  layout: hi (1 qubit, value 1) | mid (3 qubits) | lo (1 qubit, value 0)
  for (std::size_t j = 0; j < 8; ++j) full[(1u << 4) | (j << 1) | 0u] = mid[j];

  auto sv = StateVector::from_amplitudes({{"hi", 1}, {"mid", 3}, {"lo", 1}}, full);
  sv.apply_inverse_qft("mid");

  std::vector<StateVector::Amp> expect_mid(8, 0.0);
  for (std::size_t k = 0; k < 8; ++k) {
    for (std::size_t j = 0; j < 8; ++j) {
      expect_mid[k] += mid[j] * std::polar(1.0, -2.0 * kPi * static_cast<double>(j * k) / 8.0);
    }
    expect_mid[k] /= std::sqrt(8.0);
  }
  for (std::size_t idx = 0; idx < sv.amplitudes().size(); ++idx) {
    const bool populated = ((idx >> 4) == 1) && ((idx & 1) == 0);
    if (populated) {
      CHECK(std::abs(sv.amplitudes()[idx] - expect_mid[(idx >> 1) & 7]) < 1e-12);
    } else {
      CHECK(std::abs(sv.amplitudes()[idx]) == 0.0);
    }
  }
}

TEST_CASE("phase kick plus inverse qft recovers a dyadic phase exactly") {
  auto sv = StateVector::init_state({{"c", 4}}, {BigInt(0)});
  sv.apply_hadamards("c");
  sv.apply_phase_kick("c", PhaseFraction(5, 16));
  sv.apply_inverse_qft("c");
  const auto dist = sv.prefix_distribution("c", 4);
  for (std::size_t m = 0; m < 16; ++m) {
    CHECK(dist[m] == doctest::Approx(m == 5 ? 1.0 : 0.0).epsilon(1e-12));
  }
}

TEST_CASE("diagonal phase estimation reproduces the outcome distribution") {
  const PhaseFraction third(1, 3);
  auto sv = StateVector::init_state({{"c", 4}}, {BigInt(0)});
  sv.apply_hadamards("c");
  sv.apply_phase_kick("c", third);
  sv.apply_inverse_qft("c");

  const auto dist = sv.prefix_distribution("c", 4);
  for (std::uint64_t m = 0; m < 16; ++m) {
    CHECK(std::abs(dist[m] - pe_prob(4, third, BitString(4, m))) < 1e-12);
  }
  const auto dist2 = sv.prefix_distribution("c", 2);
  for (std::uint64_t p = 0; p < 4; ++p) {
    CHECK(std::abs(dist2[p] - pe_marginal_prob(4, third, 2, BitString(2, p))) < 1e-12);
  }
}

TEST_CASE("controlled modular multiplication permutes work basis states") {
  for (unsigned e : {0u, 1u}) {
    // multiplier is 7^(2^e) mod 15: 7 for e=0, 4 for e=1
    const std::uint64_t mul = (e == 0) ? 7 : 4;
    for (std::uint64_t j = 0; j < 4; ++j) {
      for (std::uint64_t x = 0; x < 16; ++x) {
        auto sv = StateVector::init_state({{"c", 2}, {"w", 4}}, {BigInt(j), BigInt(x)});
        sv.apply_controlled_modmul("c", "w", ModMulSpec{7, 15, e});
        std::uint64_t want = x;
        if (x < 15) {
          for (std::uint64_t rep = 0; rep < j; ++rep) want = want * mul % 15;
        }
        const auto wdist = sv.prefix_distribution("w", 4);
        const auto cdist = sv.prefix_distribution("c", 2);
        CHECK(wdist[want] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(cdist[j] == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }

  auto sv = StateVector::init_state({{"w", 4}}, {BigInt(13)});
  sv.apply_modmul("w", ModMulSpec{7, 15, 0});
  CHECK(sv.prefix_distribution("w", 4)[13 * 7 % 15] == doctest::Approx(1.0).epsilon(1e-12));

  auto bad = StateVector::init_state({{"c", 2}, {"w", 4}}, {BigInt(0), BigInt(1)});
  CHECK_THROWS_AS(bad.apply_controlled_modmul("c", "w", ModMulSpec{5, 15, 0}),
                  std::invalid_argument);  // gcd(5, 15) != 1
  CHECK_THROWS_AS(bad.apply_controlled_modmul("c", "c", ModMulSpec{7, 15, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(bad.apply_controlled_modmul("c", "w", ModMulSpec{7, 99, 0}),
                  std::invalid_argument);  // work register narrower than modulus
}

TEST_CASE("order finding over the work register mixes eigenphase point masses") {
  // 7 mod 15 has order 4, so with t = 4 the eigenphases s/4 are dyadic and the
  // control distribution is exactly 1/4 on m in {0, 4, 8, 12}.
  auto sv = StateVector::init_state({{"c", 4}, {"w", 4}}, {BigInt(0), BigInt(1)});
  sv.apply_hadamards("c");
  sv.apply_controlled_modmul("c", "w", ModMulSpec{7, 15, 0});
  sv.apply_inverse_qft("c");
  const auto dist = sv.prefix_distribution("c", 4);
  for (std::uint64_t m = 0; m < 16; ++m) {
    CHECK(dist[m] == doctest::Approx(m % 4 == 0 ? 0.25 : 0.0).epsilon(1e-12));
  }
}

TEST_CASE("order finding matches the analytic eigenphase mixture") {
  // 3 mod 7 has order 6; compare the full control marginal against the
  // uniform mixture of pe_prob over eigenphases s/6.
  auto sv = StateVector::init_state({{"c", 4}, {"w", 3}}, {BigInt(0), BigInt(1)});
  sv.apply_hadamards("c");
  sv.apply_controlled_modmul("c", "w", ModMulSpec{3, 7, 0});
  sv.apply_inverse_qft("c");
  const auto dist = sv.prefix_distribution("c", 4);
  for (std::uint64_t m = 0; m < 16; ++m) {
    double expect = 0.0;
    for (int s = 0; s < 6; ++s) expect += pe_prob(4, PhaseFraction(s, 6), BitString(4, m)) / 6.0;
    CHECK(std::abs(dist[m] - expect) < 1e-12);
  }
}

TEST_CASE("measurement collapses, renormalizes, and stays consistent") {
  Rng rng(71);
  auto base = StateVector::init_state({{"x", 3}}, {BigInt(0)});
  base.apply_hadamards("x");
  base.apply_phase_kick("x", PhaseFraction(1, 3));
  base.apply_inverse_qft("x");

  auto sv = base;
  const BitString first = sv.measure_prefix("x", 1, rng);
  CHECK(first.width() == 1);
  CHECK(sv.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sv.prefix_distribution("x", 1)[static_cast<std::size_t>(first.value())] ==
        doctest::Approx(1.0).epsilon(1e-12));

  // A full measurement after the prefix collapse must agree on the first bit,
  // and an immediate repeat must reproduce it outright.
  const BitString full = sv.measure_prefix("x", 3, rng);
  CHECK(full.slice(1, 1) == first);
  CHECK(sv.measure_prefix("x", 3, rng) == full);
}

TEST_CASE("measurement consumes exactly one uniform variate") {
  auto base = StateVector::init_state({{"x", 2}}, {BigInt(0)});
  base.apply_hadamards("x");
  Rng used(909), shadow(909);
  for (int i = 0; i < 4; ++i) {
    auto sv = base;
    (void)shadow.canonical();
    (void)sv.measure_prefix("x", 2, used);
    CHECK(used.canonical() == shadow.canonical());
  }
}

TEST_CASE("measurement frequencies follow the Born rule") {
  const double p1 = 0.8;
  auto base = StateVector::from_amplitudes(
      {{"q", 1}}, {StateVector::Amp(std::sqrt(1.0 - p1), 0.0), StateVector::Amp(std::sqrt(p1), 0.0)});
  Rng rng(515);
  int ones = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    auto sv = base;
    if (sv.measure_prefix("q", 1, rng).value() == 1) ++ones;
  }
  CHECK(std::abs(static_cast<double>(ones) / draws - p1) < 0.02);
}

TEST_CASE("project_register keeps only the chosen basis value") {
  auto sv = StateVector::init_state({{"c", 2}, {"w", 2}}, {BigInt(0), BigInt(3)});
  sv.apply_hadamards("c");
  sv.project_register("c", 2);
  CHECK(sv.prefix_distribution("c", 2)[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sv.norm() == doctest::Approx(1.0).epsilon(1e-12));
  sv.drop_register("c");
  CHECK(sv.total_qubits() == 2);
  CHECK(sv.prefix_distribution("w", 2)[3] == doctest::Approx(1.0).epsilon(1e-12));

  auto definite = StateVector::init_state({{"w", 2}}, {BigInt(1)});
  CHECK_THROWS_AS(definite.project_register("w", 2), std::invalid_argument);  // zero mass
  CHECK_THROWS_AS(definite.project_register("w", 9), std::invalid_argument);
}

TEST_CASE("prepend and drop round-trip a definite register") {
  auto sv = StateVector::init_state({{"w", 2}}, {BigInt(1)});
  sv.prepend_register("c", 2, BigInt(3));
  CHECK(sv.total_qubits() == 4);
  CHECK(std::abs(sv.amplitudes()[(3u << 2) | 1u] - StateVector::Amp(1.0, 0.0)) < 1e-15);

  sv.apply_hadamards("c");
  CHECK_THROWS_AS(sv.drop_register("c"), std::logic_error);

  sv.project_register("c", 0);
  sv.drop_register("c");
  CHECK(sv.total_qubits() == 2);
  CHECK(sv.prefix_distribution("w", 2)[1] == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(sv.drop_register("c"), std::invalid_argument);  // already gone
}

TEST_CASE("qubit caps are enforced with context") {
  try {
    (void)StateVector::init_state({{"big", 30}}, {BigInt(0)});
    FAIL("expected qubit_cap_error");
  } catch (const qubit_cap_error& e) {
    CHECK(e.requested == 30);
    CHECK(e.cap == kDefaultQubitCap);
  }

  auto sv = StateVector::init_state({{"w", 20}}, {BigInt(0)}, 24);
  CHECK_THROWS_AS(sv.prepend_register("c", 5, BigInt(0)), qubit_cap_error);
  sv.prepend_register("c", 4, BigInt(0));
  CHECK(sv.total_qubits() == 24);
}

TEST_CASE("joint prefix distribution flattens first register most significant") {
  std::vector<StateVector::Amp> amps(16, 0.0);
  const double inv = 1.0 / std::sqrt(2.0);
  amps[(1u << 2) | 0u] = inv;  // a=1, b=0
  amps[(1u << 2) | 3u] = inv;  // a=1, b=3
  auto sv = StateVector::from_amplitudes({{"a", 2}, {"b", 2}}, amps);

  const auto joint = sv.joint_prefix_distribution({{"a", 2}, {"b", 1}});
  REQUIRE(joint.size() == 8);
  for (std::size_t idx = 0; idx < joint.size(); ++idx) {
    const double expect = (idx == ((1u << 1) | 0u) || idx == ((1u << 1) | 1u)) ? 0.5 : 0.0;
    CHECK(joint[idx] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("phase estimation helpers sample from the right distributions") {
  Rng rng(99);
  for (int i = 0; i < 8; ++i) {
    CHECK(run_phase_estimation(4, PhaseFraction(5, 16), rng) == BitString(4, 5));
  }
  // Order-4 modmul PE with dyadic eigenphases: outcome is always s * 2^(t-2).
  for (int i = 0; i < 8; ++i) {
    const BitString m = run_phase_estimation(6, ModMulSpec{7, 15, 0}, BigInt(1), rng);
    CHECK(m.value() % 16 == 0);
  }
}

TEST_CASE("monolithic order finding uses the planned register width") {
  Rng rng(7);
  const auto [m, t] = run_order_finding_monolithic(15, 7, 0.25, rng);
  CHECK(t == 11);  // 2L + 1 + p with L = 4, p = 2
  CHECK(m.width() == 11);
  CHECK(m.value() % (1u << 9) == 0);  // eigenphases s/4 are dyadic at t = 11
  CHECK_THROWS_AS(run_order_finding_monolithic(BigInt(1) << 30, 7, 0.25, rng), qubit_cap_error);
}
