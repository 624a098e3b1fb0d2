// dqshor: distributed order-finding and factoring experiments.
//
// Subcommands:
//   factor  factor N through the k-node pipeline
//   order   repeated order-finding trials with success statistics
//   plan    static resource report (no quantum execution)
//   dist    exact outcome distributions, analytic vs statevector
//
// Exit codes: 0 success, 1 configuration or plan error, 2 factoring attempts
// exhausted, 3 qubit cap exceeded.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dqshor/combine.hpp"
#include "dqshor/distsim.hpp"
#include "dqshor/errors.hpp"
#include "dqshor/factor.hpp"
#include "dqshor/fraction.hpp"
#include "dqshor/numtheory.hpp"
#include "dqshor/phasedist.hpp"
#include "dqshor/plan.hpp"
#include "dqshor/statevector.hpp"

namespace {

using dqshor::BigInt;
using dqshor::BitString;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitExhausted = 2;
constexpr int kExitCap = 3;

struct Config {
  std::string command;
  std::string n;  // decimal; empty when unset
  std::string a;
  unsigned n_bits = 0;
  unsigned k = 1;
  double epsilon = 0.1;
  std::string backend = "analytic";
  std::string sv_mode = "strict";
  std::uint64_t seed = 1;
  unsigned trials = 1;
  unsigned max_attempts = 25;
  unsigned lambda_max = 64;
  std::size_t qubit_cap = dqshor::kDefaultQubitCap;
  unsigned ancilla_b = 0;
  std::vector<unsigned> boundaries;
  std::string json_out;
};

std::size_t env_qubit_cap() {
  if (const char* env = std::getenv("DQSHOR_QUBIT_CAP")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
    std::cerr << "warning: ignoring malformed DQSHOR_QUBIT_CAP='" << env << "'\n";
  }
  return dqshor::kDefaultQubitCap;
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

dqshor::RunOptions run_options(const Config& cfg) {
  dqshor::RunOptions opt;
  opt.backend = cfg.backend == "statevector" ? dqshor::Backend::statevector
                                             : dqshor::Backend::analytic;
  opt.mode = cfg.sv_mode == "retire" ? dqshor::SvMode::retire : dqshor::SvMode::strict;
  opt.qubit_cap = cfg.qubit_cap;
  return opt;
}

std::optional<std::vector<unsigned>> boundaries_opt(const Config& cfg) {
  if (cfg.boundaries.empty()) return std::nullopt;
  return cfg.boundaries;
}

json config_json(const Config& cfg) {
  json j;
  j["command"] = cfg.command;
  j["n"] = cfg.n.empty() ? json(nullptr) : json(cfg.n);
  j["a"] = cfg.a.empty() ? json(nullptr) : json(cfg.a);
  j["n_bits"] = cfg.n_bits == 0 ? json(nullptr) : json(cfg.n_bits);
  j["k"] = cfg.k;
  j["epsilon"] = cfg.epsilon;
  j["backend"] = cfg.backend;
  j["sv_mode"] = cfg.sv_mode;
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  j["max_attempts"] = cfg.max_attempts;
  j["lambda_max"] = cfg.lambda_max;
  j["qubit_cap"] = cfg.qubit_cap;
  j["ancilla_b"] = cfg.ancilla_b;
  j["boundaries"] = cfg.boundaries.empty() ? json(nullptr) : json(cfg.boundaries);
  return j;
}

json plan_json(const dqshor::NodePlan& plan) {
  json j;
  j["L"] = plan.L;
  j["k"] = plan.k;
  j["epsilon"] = plan.epsilon;
  j["epsilon_node"] = plan.epsilon_node;
  j["p"] = plan.p;
  j["l"] = plan.boundaries;
  j["t"] = plan.widths;
  j["w"] = plan.measured;
  j["output_width"] = plan.output_width();
  j["custom_boundaries"] = plan.custom_boundaries;
  return j;
}

json ledger_json(const dqshor::CommLedger& ledger) {
  json j;
  j["epr_pairs"] = ledger.epr_pairs;
  j["classical_bits"] = ledger.classical_bits;
  j["teleport_events"] = ledger.teleport_events;
  return j;
}

json bitstring_json(const BitString& b) {
  json j;
  j["width"] = b.width();
  j["bits"] = b.str();
  return j;
}

json run_json(const dqshor::RunOutcome& run) {
  json j;
  json nodes = json::array();
  for (const BitString& m : run.node_outcomes) nodes.push_back(bitstring_json(m));
  j["node_outcomes"] = nodes;
  j["m"] = run.combined ? bitstring_json(*run.combined) : json(nullptr);
  j["correction_bits"] = run.correction_bits;
  j["mismatch_node"] = run.mismatch_node ? json(*run.mismatch_node) : json(nullptr);
  return j;
}

json report_skeleton(const Config& cfg) {
  json j;
  j["config"] = config_json(cfg);
  j["plan"] = nullptr;
  j["ledger"] = nullptr;
  j["outcomes"] = nullptr;
  j["order"] = nullptr;
  j["factors"] = nullptr;
  j["stats"] = nullptr;
  j["timestamp"] = nullptr;
  return j;
}

void emit_report(const Config& cfg, json& report) {
  report["timestamp"] = iso_timestamp();
  if (cfg.json_out.empty()) return;
  std::ofstream out(cfg.json_out);
  if (!out) throw std::runtime_error("cannot open " + cfg.json_out + " for writing");
  out << report.dump(2) << '\n';
}

BigInt parse_bigint(const std::string& s, const char* what) {
  if (s.empty()) throw dqshor::plan_error(std::string(what) + " is required");
  try {
    return BigInt(s);
  } catch (const std::exception&) {
    throw dqshor::plan_error(std::string(what) + " is not a valid integer: " + s);
  }
}

// Theorem event: some s in [0, r] puts m/2^W within 2^-(2L+1) of s/r,
// checked in exact integers.
bool theorem_event(const dqshor::NodePlan& plan, const BigInt& r, const BitString& m) {
  const unsigned W = plan.output_width();
  const BigInt two_w = dqshor::pow2(W);
  const BigInt scale = dqshor::pow2(2 * plan.L + 1);
  const BigInt prod = m.value() * r;
  for (const BigInt& s : {BigInt(prod / two_w), BigInt(prod / two_w + 1)}) {
    if (s < 0 || s > r) continue;
    if (abs(prod - s * two_w) * scale <= r * two_w) return true;
  }
  return false;
}

int cmd_factor(const Config& cfg) {
  const BigInt N = parse_bigint(cfg.n, "--n");
  dqshor::Rng rng(cfg.seed);
  const dqshor::FactorReport rep =
      dqshor::shor_factor(N, cfg.k, cfg.epsilon, run_options(cfg), rng, cfg.max_attempts,
                          cfg.lambda_max);

  json report = report_skeleton(cfg);
  if (!rep.classical_shortcut && !rep.attempts.empty()) {
    // Report layout for the last attempt's plan (a-independent widths).
    const dqshor::NodePlan plan = dqshor::make_plan_for_bits(
        static_cast<unsigned>(dqshor::bit_length(N)), cfg.k, cfg.epsilon, boundaries_opt(cfg));
    report["plan"] = plan_json(plan);
    report["ledger"] = ledger_json(dqshor::comm_cost(plan));
  }
  json attempts = json::array();
  for (const dqshor::AttemptRecord& rec : rep.attempts) {
    json a;
    a["a"] = rec.a.str();
    a["lucky_gcd"] = rec.lucky_gcd;
    a["run"] = rec.lucky_gcd ? json(nullptr) : run_json(rec.run);
    a["recovered_order"] = rec.recovered_order ? json(rec.recovered_order->str()) : json(nullptr);
    attempts.push_back(a);
  }
  report["outcomes"] = attempts;
  json stats;
  stats["attempts_used"] = rep.attempts_used;
  stats["classical_shortcut"] = rep.classical_shortcut;
  report["stats"] = stats;

  if (rep.factors) {
    report["factors"] = json::array({rep.factors->first.str(), rep.factors->second.str()});
    emit_report(cfg, report);
    std::cout << "N = " << N.str() << " = " << rep.factors->first.str() << " * "
              << rep.factors->second.str()
              << (rep.classical_shortcut ? "  (classical pre-check)" : "") << "\n";
    if (!rep.classical_shortcut)
      std::cout << "attempts: " << rep.attempts_used << "\n";
    return kExitOk;
  }
  emit_report(cfg, report);
  std::cout << "no factors found for N = " << N.str() << " after " << rep.attempts_used
            << " attempts\n";
  return kExitExhausted;
}

int cmd_order(const Config& cfg) {
  const BigInt N = parse_bigint(cfg.n, "--n");
  const BigInt a = parse_bigint(cfg.a, "--a");
  const dqshor::NodePlan plan = dqshor::make_plan(N, a, cfg.k, cfg.epsilon, boundaries_opt(cfg));
  const std::optional<BigInt> true_order = dqshor::order_bruteforce(N, a);
  if (!true_order) throw std::runtime_error("order of a exceeds the brute-force oracle cap");
  const dqshor::RunOptions opts = run_options(cfg);
  const dqshor::Rng root(cfg.seed);

  const unsigned trials = cfg.trials;
  std::vector<dqshor::RunOutcome> runs(trials);
  std::vector<std::optional<BigInt>> recovered(trials);

  // Per-trial split streams; worker partition does not affect results.
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min({hw, trials == 0 ? 1u : trials, 8u});
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&](unsigned w) {
    try {
      for (unsigned i = w; i < trials; i += workers) {
        dqshor::Rng rng = root.split(i);
        runs[i] = dqshor::run_distributed(plan, opts, rng);
        if (runs[i].combined)
          if (auto rec = dqshor::recover_order(*runs[i].combined, plan, N, a, cfg.lambda_max))
            recovered[i] = rec->r;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);

  unsigned success = 0, rec_ok = 0;
  for (unsigned i = 0; i < trials; ++i) {
    if (runs[i].combined && theorem_event(plan, *true_order, *runs[i].combined)) ++success;
    if (recovered[i] && *recovered[i] == *true_order) ++rec_ok;
  }
  const double success_rate = trials == 0 ? 0.0 : double(success) / trials;
  const double recovered_rate = trials == 0 ? 0.0 : double(rec_ok) / trials;

  json report = report_skeleton(cfg);
  report["plan"] = plan_json(plan);
  report["ledger"] = ledger_json(dqshor::comm_cost(plan));
  if (trials <= 256) {
    json outs = json::array();
    for (unsigned i = 0; i < trials; ++i) {
      json o = run_json(runs[i]);
      o["recovered_order"] = recovered[i] ? json(recovered[i]->str()) : json(nullptr);
      outs.push_back(o);
    }
    report["outcomes"] = outs;
  }
  json order;
  order["true_order"] = true_order->str();
  report["order"] = order;
  json stats;
  stats["success_rate"] = success_rate;
  stats["recovered_rate"] = recovered_rate;
  stats["trials"] = trials;
  report["stats"] = stats;
  emit_report(cfg, report);

  std::cout << "order trials: " << trials << "  theorem-event rate: " << success_rate
            << "  recovered-order rate: " << recovered_rate << "  (true order "
            << true_order->str() << ")\n";
  return kExitOk;
}

int cmd_plan(const Config& cfg) {
  unsigned L = cfg.n_bits;
  if (L == 0 && !cfg.n.empty())
    L = static_cast<unsigned>(dqshor::bit_length(parse_bigint(cfg.n, "--n")));
  if (L == 0) throw dqshor::plan_error("plan needs --n-bits or --n");
  const dqshor::NodePlan plan = dqshor::make_plan_for_bits(L, cfg.k, cfg.epsilon,
                                                           boundaries_opt(cfg));
  const dqshor::CommLedger ledger = dqshor::comm_cost(plan);
  const dqshor::QubitBudget budget = dqshor::qubit_budget(plan, cfg.ancilla_b);

  json report = report_skeleton(cfg);
  report["plan"] = plan_json(plan);
  report["ledger"] = ledger_json(ledger);
  json stats;
  stats["node_total"] = budget.node_total;
  stats["baseline"] = budget.baseline;
  stats["node_saving"] = budget.node_saving;
  stats["headline_saving"] = budget.headline_saving;
  report["stats"] = stats;
  emit_report(cfg, report);

  std::cout << "plan: L=" << plan.L << " k=" << plan.k << " epsilon=" << plan.epsilon
            << " p=" << plan.p << "\n";
  std::cout << "  t = [";
  for (unsigned j = 1; j <= plan.k; ++j) std::cout << (j > 1 ? ", " : "") << plan.t(j);
  std::cout << "]  w = [";
  for (unsigned j = 1; j <= plan.k; ++j)
    std::cout << (j > 1 ? ", " : "") << plan.measured_width(j);
  std::cout << "]\n";
  std::cout << "  qubits per node (t_j + L + b): [";
  for (std::size_t i = 0; i < budget.node_total.size(); ++i)
    std::cout << (i > 0 ? ", " : "") << budget.node_total[i];
  std::cout << "]  baseline " << budget.baseline << "  headline saving "
            << budget.headline_saving << "\n";
  std::cout << "  communication: " << ledger.epr_pairs << " EPR pairs, "
            << ledger.classical_bits << " classical bits, " << ledger.teleport_events
            << " teleport events\n";
  return kExitOk;
}

int cmd_dist(const Config& cfg) {
  const BigInt N = parse_bigint(cfg.n, "--n");
  const BigInt a = parse_bigint(cfg.a, "--a");
  const dqshor::NodePlan plan = dqshor::make_plan(N, a, cfg.k, cfg.epsilon, boundaries_opt(cfg));
  const std::optional<BigInt> order = dqshor::order_bruteforce(N, a);
  if (!order) throw std::runtime_error("order of a exceeds the brute-force oracle cap");
  const BigInt r = *order;

  std::size_t total_bits = 0;
  for (unsigned j = 1; j <= plan.k; ++j) total_bits += plan.measured_width(j);
  if (total_bits > 24) throw dqshor::plan_error("dist: joint distribution wider than 24 bits");
  const std::size_t outdim = std::size_t{1} << total_bits;

  // Statevector side only when the strict circuit fits the cap.
  std::size_t sv_width = plan.L;
  for (unsigned j = 1; j <= plan.k; ++j) sv_width += plan.t(j);
  std::optional<std::vector<double>> sv;
  if (sv_width <= cfg.qubit_cap) {
    const dqshor::SvMode mode =
        cfg.sv_mode == "retire" ? dqshor::SvMode::retire : dqshor::SvMode::strict;
    sv = dqshor::statevector_joint_distribution(plan, mode, cfg.qubit_cap);
  }

  double sum_analytic = 0.0, tv = 0.0, mk_mass = 0.0;
  json entries = json::array();
  std::vector<BitString> ms;
  for (std::size_t idx = 0; idx < outdim; ++idx) {
    ms.clear();
    std::size_t rem = idx;
    for (unsigned j = plan.k; j >= 1; --j) {
      const unsigned w = plan.measured_width(j);
      ms.insert(ms.begin(), BitString(w, rem & ((std::size_t{1} << w) - 1)));
      rem >>= w;
    }
    const double pa = dqshor::joint_outcome_prob(plan, r, ms);
    const double ps = sv ? (*sv)[idx] : 0.0;
    sum_analytic += pa;
    if (sv) tv += std::abs(pa - ps);

    // Success event for the last node's estimate: near some source window
    // with matching leading bits.
    const BitString& mk = ms.back();
    bool mk_ok = false;
    for (BigInt s0 = 0; s0 < r && !mk_ok; ++s0) {
      const dqshor::PhaseFraction phi(s0, r);
      const BitString window = dqshor::frac_bits(phi, plan.l(plan.k), plan.output_width());
      mk_ok = abs(mk.value() - window.value()) < dqshor::pow2(plan.p) &&
              mk.slice(1, 2) == dqshor::frac_bits(phi, plan.l(plan.k), plan.l(plan.k) + 1);
    }
    if (mk_ok) mk_mass += pa;

    if (pa > 0.0 || (sv && ps > 0.0)) {
      json e;
      json parts = json::array();
      for (const BitString& m : ms) parts.push_back(m.str());
      e["m"] = parts;
      e["p_analytic"] = pa;
      e["p_statevector"] = sv ? json(ps) : json(nullptr);
      entries.push_back(e);
    }
  }
  tv /= 2.0;

  json report = report_skeleton(cfg);
  report["plan"] = plan_json(plan);
  report["ledger"] = ledger_json(dqshor::comm_cost(plan));
  report["outcomes"] = entries;
  json order_j;
  order_j["true_order"] = r.str();
  report["order"] = order_j;
  json stats;
  stats["sum_analytic"] = sum_analytic;
  stats["tv_analytic_statevector"] = sv ? json(tv) : json(nullptr);
  stats["mk_success_mass"] = mk_mass;
  stats["mk_success_bound"] = 1.0 - plan.epsilon_node;
  report["stats"] = stats;
  emit_report(cfg, report);

  std::cout << "dist: " << entries.size() << " support points, analytic mass " << sum_analytic
            << "\n";
  if (sv)
    std::cout << "  TV(analytic, statevector) = " << tv << "\n";
  else
    std::cout << "  statevector side skipped (" << sv_width << " qubits > cap "
              << cfg.qubit_cap << ")\n";
  std::cout << "  m_k success mass " << mk_mass << " (bound " << 1.0 - plan.epsilon_node
            << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  cfg.qubit_cap = env_qubit_cap();

  CLI::App app{"distributed order-finding and factoring simulator"};
  app.require_subcommand(1);

  auto add_common = [&cfg](CLI::App* sub, bool wants_a) {
    sub->add_option("--n", cfg.n, "modulus N (decimal)");
    if (wants_a) sub->add_option("--a", cfg.a, "base a (decimal)");
    sub->add_option("--k", cfg.k, "number of nodes")->check(CLI::PositiveNumber);
    sub->add_option("--epsilon", cfg.epsilon, "target failure bound in (0,1)");
    sub->add_option("--seed", cfg.seed, "root rng seed");
    sub->add_option("--qubit-cap", cfg.qubit_cap,
                    "statevector qubit cap (env DQSHOR_QUBIT_CAP)");
    sub->add_option("--boundaries", cfg.boundaries,
                    "custom exponent boundaries l_1..l_{k+1}")
        ->delimiter(',');
    sub->add_option("--json-out", cfg.json_out, "write the JSON report here");
  };

  CLI::App* factor = app.add_subcommand("factor", "factor N");
  add_common(factor, false);
  factor->add_option("--backend", cfg.backend, "analytic | statevector")
      ->check(CLI::IsMember({"analytic", "statevector"}));
  factor->add_option("--sv-mode", cfg.sv_mode, "strict | retire")
      ->check(CLI::IsMember({"strict", "retire"}));
  factor->add_option("--max-attempts", cfg.max_attempts, "attempt budget");
  factor->add_option("--lambda-max", cfg.lambda_max, "order-recovery multiplier sweep bound");

  CLI::App* order = app.add_subcommand("order", "order-finding trials");
  add_common(order, true);
  order->add_option("--backend", cfg.backend, "analytic | statevector")
      ->check(CLI::IsMember({"analytic", "statevector"}));
  order->add_option("--sv-mode", cfg.sv_mode, "strict | retire")
      ->check(CLI::IsMember({"strict", "retire"}));
  order->add_option("--trials", cfg.trials, "number of independent runs")
      ->check(CLI::PositiveNumber);
  order->add_option("--lambda-max", cfg.lambda_max, "order-recovery multiplier sweep bound");

  CLI::App* plan = app.add_subcommand("plan", "static resource report");
  add_common(plan, false);
  plan->add_option("--n-bits", cfg.n_bits, "modulus bit length L (alternative to --n)");
  plan->add_option("--ancilla-b", cfg.ancilla_b, "work ancillas per node in the budget");

  CLI::App* dist = app.add_subcommand("dist", "exact outcome distributions");
  add_common(dist, true);
  dist->add_option("--sv-mode", cfg.sv_mode, "strict | retire");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (factor->parsed()) {
      cfg.command = "factor";
      return cmd_factor(cfg);
    }
    if (order->parsed()) {
      cfg.command = "order";
      return cmd_order(cfg);
    }
    if (plan->parsed()) {
      cfg.command = "plan";
      return cmd_plan(cfg);
    }
    cfg.command = "dist";
    return cmd_dist(cfg);
  } catch (const dqshor::qubit_cap_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const dqshor::plan_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
