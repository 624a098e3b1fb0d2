#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dqshor/bitstring.hpp"
#include "dqshor/plan.hpp"
#include "dqshor/rng.hpp"

namespace dqshor {

enum class Backend { analytic, statevector };

/// Statevector scheduling of node registers.
///  - retire: allocate one node register at a time, measure it in full
///    right after its transform, drop it, hand the work register on. Peak
///    live width max_j(t_j) + L. Deferred-measurement equivalence keeps the
///    outcome distribution identical to strict.
///  - strict: all registers live until one measurement pass at the end;
///    width t_1 + ... + t_k + L.
enum class SvMode { retire, strict };

/// Teleportation bookkeeping for the serial node-to-node handoff. The
/// simulation moves the L-qubit work register k-1 times; each hop charges L
/// EPR pairs and 2L classical bits.
struct CommLedger {
  std::uint64_t epr_pairs = 0;
  std::uint64_t classical_bits = 0;
  std::uint64_t teleport_events = 0;

  friend bool operator==(const CommLedger&, const CommLedger&) = default;
};

/// One distributed order-finding run.
struct RunOutcome {
  std::vector<BitString> node_outcomes;   // m_1..m_k at measured widths
  std::optional<BitString> combined;      // stitched m; empty on mismatch
  std::vector<int> correction_bits;       // filled when combined
  std::optional<unsigned> mismatch_node;  // set when stitching failed
  CommLedger ledger;
  // Ground truth used by the analytic backend; diagnostics only, never
  // consumed by recovery code.
  std::optional<BigInt> truth_order;
  std::optional<BigInt> truth_s;
};

struct RunOptions {
  Backend backend = Backend::analytic;
  SvMode mode = SvMode::retire;
  std::size_t qubit_cap = 26;
};

/// Execute the serial k-node pipeline once and stitch the outcome.
///
/// analytic backend: draws the eigenvalue index s uniformly (weight exactly
/// 1/r, r from the brute-force order oracle) and samples each node's
/// marginal exactly; equals the statevector distribution by construction.
/// statevector backend: runs the circuit per RunOptions::mode.
/// A correction mismatch is recorded in the outcome, not thrown.
RunOutcome run_distributed(const NodePlan& plan, const RunOptions& options, Rng& rng);

/// Exact joint outcome distribution of the statevector pipeline, flattened
/// over measured prefixes (first node most significant). Both modes must
/// agree; `retire` enumerates intermediate collapses, so keep it to small
/// plans.
std::vector<double> statevector_joint_distribution(const NodePlan& plan, SvMode mode,
                                                   std::size_t qubit_cap = 26);

/// Communication bill implied by the plan: (k-1)*L EPR pairs, 2*(k-1)*L
/// classical bits, k-1 teleport events. A run's ledger must equal this.
CommLedger comm_cost(const NodePlan& plan);

/// Per-node and baseline qubit counts with b work ancillas per node.
struct QubitBudget {
  std::vector<unsigned> node_total;  // t_j + L + b
  unsigned baseline;                 // monolithic: 3L + 1 + ceil(log2(2 + 1/(2 eps))) + b
  std::vector<int> node_saving;      // baseline - node_total[j]
  double headline_saving;            // (1 - 1/k) * L - log2(k)
};
QubitBudget qubit_budget(const NodePlan& plan, unsigned b = 0);

}  // namespace dqshor
