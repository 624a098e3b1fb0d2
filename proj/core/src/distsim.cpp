#include "dqshor/distsim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dqshor/combine.hpp"
#include "dqshor/errors.hpp"
#include "dqshor/numtheory.hpp"
#include "dqshor/phasedist.hpp"
#include "dqshor/statevector.hpp"

namespace dqshor {

namespace {

std::string node_name(unsigned j) { return "node" + std::to_string(j); }

std::vector<BitString> run_nodes_analytic(const NodePlan& plan, Rng& rng, BigInt& r_out,
                                          BigInt& s_out) {
  const std::optional<BigInt> r = order_bruteforce(plan.modulus, plan.base);
  if (!r)
    throw std::runtime_error("analytic backend: order of base exceeds the brute-force cap");
  r_out = *r;
  s_out = rng.uniform_bigint(*r);
  std::vector<BitString> outcomes;
  outcomes.reserve(plan.k);
  for (unsigned j = 1; j <= plan.k; ++j) {
    const PhaseFraction omega = node_phase(s_out, *r, plan.l(j));
    outcomes.push_back(pe_sample(plan.t(j), omega, plan.measured_width(j), rng));
  }
  return outcomes;
}

std::vector<BitString> run_nodes_statevector(const NodePlan& plan, SvMode mode,
                                             std::size_t qubit_cap, Rng& rng) {
  std::vector<BitString> outcomes;
  outcomes.reserve(plan.k);
  if (mode == SvMode::retire) {
    StateVector sv = StateVector::init_state({{"work", plan.L}}, {1}, qubit_cap);
    for (unsigned j = 1; j <= plan.k; ++j) {
      const std::string reg = node_name(j);
      sv.prepend_register(reg, plan.t(j), 0);
      sv.apply_hadamards(reg);
      sv.apply_controlled_modmul(reg, "work", {plan.base, plan.modulus, plan.l(j) - 1});
      sv.apply_inverse_qft(reg);
      const BitString full = sv.measure_prefix(reg, plan.t(j), rng);
      outcomes.push_back(full.slice(1, plan.measured_width(j)));
      sv.drop_register(reg);
    }
    return outcomes;
  }
  std::vector<std::pair<std::string, unsigned>> regs;
  std::vector<BigInt> init;
  for (unsigned j = 1; j <= plan.k; ++j) {
    regs.emplace_back(node_name(j), plan.t(j));
    init.emplace_back(0);
  }
  regs.emplace_back("work", plan.L);
  init.emplace_back(1);
  StateVector sv = StateVector::init_state(regs, init, qubit_cap);
  for (unsigned j = 1; j <= plan.k; ++j) {
    const std::string reg = node_name(j);
    sv.apply_hadamards(reg);
    sv.apply_controlled_modmul(reg, "work", {plan.base, plan.modulus, plan.l(j) - 1});
    sv.apply_inverse_qft(reg);
  }
  for (unsigned j = 1; j <= plan.k; ++j) {
    const BitString full = sv.measure_prefix(node_name(j), plan.t(j), rng);
    outcomes.push_back(full.slice(1, plan.measured_width(j)));
  }
  return outcomes;
}

}  // namespace

RunOutcome run_distributed(const NodePlan& plan, const RunOptions& options, Rng& rng) {
  RunOutcome out;
  if (options.backend == Backend::analytic) {
    BigInt r, s;
    out.node_outcomes = run_nodes_analytic(plan, rng, r, s);
    out.truth_order = std::move(r);
    out.truth_s = std::move(s);
  } else {
    out.node_outcomes = run_nodes_statevector(plan, options.mode, options.qubit_cap, rng);
  }
  out.ledger = comm_cost(plan);
  try {
    CombineResult res = combine_results(plan, out.node_outcomes);
    out.combined = std::move(res.m);
    out.correction_bits = std::move(res.correction_bits);
  } catch (const correction_mismatch& e) {
    out.mismatch_node = e.node;
  }
  return out;
}

std::vector<double> statevector_joint_distribution(const NodePlan& plan, SvMode mode,
                                                   std::size_t qubit_cap) {
  std::size_t outdim = 1;
  for (unsigned j = 1; j <= plan.k; ++j) outdim <<= plan.measured_width(j);

  if (mode == SvMode::strict) {
    std::vector<std::pair<std::string, unsigned>> regs;
    std::vector<BigInt> init;
    for (unsigned j = 1; j <= plan.k; ++j) {
      regs.emplace_back(node_name(j), plan.t(j));
      init.emplace_back(0);
    }
    regs.emplace_back("work", plan.L);
    init.emplace_back(1);
    StateVector sv = StateVector::init_state(regs, init, qubit_cap);
    for (unsigned j = 1; j <= plan.k; ++j) {
      const std::string reg = node_name(j);
      sv.apply_hadamards(reg);
      sv.apply_controlled_modmul(reg, "work", {plan.base, plan.modulus, plan.l(j) - 1});
      sv.apply_inverse_qft(reg);
    }
    std::vector<std::pair<std::string, unsigned>> prefixes;
    for (unsigned j = 1; j <= plan.k; ++j)
      prefixes.emplace_back(node_name(j), plan.measured_width(j));
    return sv.joint_prefix_distribution(prefixes);
  }

  // Retire mode: enumerate every intermediate full-register collapse and
  // accumulate path weights per measured-prefix tuple.
  std::vector<double> probs(outdim, 0.0);
  struct Walker {
    const NodePlan& plan;
    std::size_t cap;
    std::vector<double>& probs;

    void step(const StateVector& work_state, unsigned j, double weight, std::size_t key) {
      if (j > plan.k) {
        probs[key] += weight;
        return;
      }
      StateVector sv = work_state;
      const std::string reg = node_name(j);
      sv.prepend_register(reg, plan.t(j), 0);
      sv.apply_hadamards(reg);
      sv.apply_controlled_modmul(reg, "work", {plan.base, plan.modulus, plan.l(j) - 1});
      sv.apply_inverse_qft(reg);
      const std::vector<double> dist = sv.prefix_distribution(reg, plan.t(j));
      const unsigned w = plan.measured_width(j);
      for (std::size_t v = 0; v < dist.size(); ++v) {
        if (dist[v] <= 0.0) continue;
        StateVector branch = sv;
        branch.project_register(reg, v);
        branch.drop_register(reg);
        step(branch, j + 1, weight * dist[v], (key << w) | (v >> (plan.t(j) - w)));
      }
    }
  };
  StateVector work = StateVector::init_state({{"work", plan.L}}, {1}, qubit_cap);
  Walker{plan, qubit_cap, probs}.step(work, 1, 1.0, 0);
  return probs;
}

CommLedger comm_cost(const NodePlan& plan) {
  const std::uint64_t hops = plan.k - 1;
  const std::uint64_t L = plan.L;
  return {hops * L, 2 * hops * L, hops};
}

QubitBudget qubit_budget(const NodePlan& plan, unsigned b) {
  QubitBudget budget;
  const unsigned pad =
      static_cast<unsigned>(std::ceil(std::log2(2.0 + 1.0 / (2.0 * plan.epsilon))));
  budget.baseline = 3 * plan.L + 1 + pad + b;
  for (unsigned j = 1; j <= plan.k; ++j) {
    budget.node_total.push_back(plan.t(j) + plan.L + b);
    budget.node_saving.push_back(static_cast<int>(budget.baseline) -
                                 static_cast<int>(budget.node_total.back()));
  }
  budget.headline_saving = (1.0 - 1.0 / plan.k) * plan.L - std::log2(double(plan.k));
  return budget;
}

}  // namespace dqshor
