#include <benchmark/benchmark.h>

#include "dqshor/combine.hpp"
#include "dqshor/distsim.hpp"
#include "dqshor/fraction.hpp"
#include "dqshor/numtheory.hpp"
#include "dqshor/phasedist.hpp"
#include "dqshor/plan.hpp"
#include "dqshor/rng.hpp"

using namespace dqshor;

namespace {

void BM_pe_prob_closed_form(benchmark::State& state) {
  const PhaseFraction omega(123, 457);
  const BitString m(12, 1234);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pe_prob(12, omega, m));
  }
}
BENCHMARK(BM_pe_prob_closed_form);

void BM_pe_marginal_direct_band(benchmark::State& state) {
  // w = 4 at t = 14 sums a 2^10-point interval directly.
  const PhaseFraction omega(123, 457);
  const BitString prefix(4, 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pe_marginal_prob(14, omega, 4, prefix));
  }
}
BENCHMARK(BM_pe_marginal_direct_band);

void BM_pe_marginal_lattice(benchmark::State& state) {
  // w = 10 at t = 60: length-independent lattice path.
  const PhaseFraction omega(123, 457);
  const BitString prefix(10, 341);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pe_marginal_prob(60, omega, 10, prefix));
  }
}
BENCHMARK(BM_pe_marginal_lattice);

void BM_pe_sample_scan(benchmark::State& state) {
  const PhaseFraction omega(5, 11);
  Rng rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pe_sample(12, omega, 6, rng));
  }
}
BENCHMARK(BM_pe_sample_scan);

void BM_pe_sample_bisection(benchmark::State& state) {
  const PhaseFraction omega(5, 11);
  Rng rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pe_sample(60, omega, 12, rng));
  }
}
BENCHMARK(BM_pe_sample_bisection);

void BM_statevector_joint_19_qubits(benchmark::State& state) {
  const NodePlan plan = make_plan(15, 7, 2, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(statevector_joint_distribution(plan, SvMode::strict));
  }
}
BENCHMARK(BM_statevector_joint_19_qubits)->Unit(benchmark::kMillisecond);

void BM_run_distributed_analytic(benchmark::State& state) {
  const NodePlan plan = make_plan(15, 7, 2, 0.5);
  const RunOptions opts{Backend::analytic, SvMode::retire, 26};
  Rng rng(13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_distributed(plan, opts, rng));
  }
}
BENCHMARK(BM_run_distributed_analytic);

void BM_run_distributed_statevector(benchmark::State& state) {
  const NodePlan plan = make_plan(15, 7, 2, 0.5);
  const RunOptions opts{Backend::statevector, SvMode::retire, 26};
  Rng rng(13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_distributed(plan, opts, rng));
  }
}
BENCHMARK(BM_run_distributed_statevector)->Unit(benchmark::kMillisecond);

void BM_combine_results(benchmark::State& state) {
  const NodePlan plan = make_plan_for_bits(4, 2, 0.5);
  const PhaseFraction phi(3, 7);
  const std::vector<BitString> outs = {
      frac_bits(phi, plan.l(1), plan.l(2) + 1),
      frac_bits(phi, plan.l(2), plan.l(2) + plan.t(2) - 1),
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(combine_results(plan, outs));
  }
}
BENCHMARK(BM_combine_results);

void BM_recover_order(benchmark::State& state) {
  const NodePlan plan = make_plan(43, 4, 1, 0.25);
  const BitString m = frac_bits(PhaseFraction(3, 7), 1, plan.output_width());
  for (auto _ : state) {
    benchmark::DoNotOptimize(recover_order(m, plan, 43, 4));
  }
}
BENCHMARK(BM_recover_order);

void BM_theorem_oracle(benchmark::State& state) {
  const NodePlan plan = make_plan_for_bits(4, 2, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(theorem_oracle(plan, 7));
  }
}
BENCHMARK(BM_theorem_oracle)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
