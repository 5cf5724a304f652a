#include "mevc/analysis.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "mevc/oracle.hpp"
#include "mevc/sampler.hpp"
#include "mevc/specs.hpp"
#include "mevc/verify.hpp"

namespace mevc {

namespace {

using nlohmann::ordered_json;

constexpr const char* kToolName = "mevc";
constexpr const char* kToolVersion = "0.1.0";
constexpr int kTelescopingTraces = 64;

GridSpec effective_grid(const Scenario& sc, const CmdOptions& opts) {
  GridSpec g = sc.oracle;
  if (opts.grid_step) g.amount_step = *opts.grid_step;
  if (opts.grid_max) g.amount_max = *opts.grid_max;
  if (opts.depth) g.max_depth = *opts.depth;
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(std::string("options: ") + e.what());
  }
  return g;
}

std::uint64_t effective_budget(const CmdOptions& opts) {
  if (opts.node_budget) return *opts.node_budget;
  if (const char* env = std::getenv("MEVC_BUDGET")) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*env == '\0' || *end != '\0' || errno == ERANGE || v == 0)
      throw ScenarioError("MEVC_BUDGET must be a positive integer");
    return v;
  }
  return OracleConfig{}.node_budget;
}

ordered_json grid_json(const GridSpec& g) {
  ordered_json j;
  j["grid_step"] = format_amount(g.amount_step);
  j["grid_max"] = format_amount(g.amount_max);
  j["max_depth"] = g.max_depth;
  return j;
}

ordered_json report_header(const char* command, const Scenario& sc) {
  ordered_json j;
  ordered_json tool;
  tool["name"] = kToolName;
  tool["version"] = kToolVersion;
  j["tool"] = std::move(tool);
  j["command"] = command;
  j["scenario"] = sc.echo();
  return j;
}

ordered_json counterexamples_json(const std::vector<Counterexample>& ces) {
  ordered_json arr = ordered_json::array();
  for (const Counterexample& c : ces) {
    ordered_json e;
    e["violation"] = c.violation;
    e["detail"] = c.detail;
    arr.push_back(std::move(e));
  }
  return arr;
}

template <class Sys>
ordered_json trace_json(const Sys&, const TraceOf<Sys>& tr) {
  ordered_json arr = ordered_json::array();
  for (const MoveOf<Sys>& m : tr) arr.push_back(describe_move(m));
  return arr;
}

// ---- analyze ----

template <class Sys>
CmdResult analyze_impl(const Scenario& sc, const CmdOptions& opts, const Sys& sys,
                       const SysStateOf<Sys>& st, GuessSpec<Sys> spec, const char* guess_label) {
  const GridSpec grid = effective_grid(sc, opts);
  const std::uint64_t samples = opts.samples.value_or(sc.samples);
  const std::uint64_t seed = opts.seed.value_or(sc.seed);

  ordered_json doc = report_header("analyze", sc);
  doc["seed"] = seed;
  doc["grid"] = grid_json(grid);

  if (opts.inject_guess_offset != 0.0)
    spec = with_guess_offset<Sys>(
        spec, [](const SysStateOf<Sys>& s) { return s.s.mempool.empty(); },
        opts.inject_guess_offset);

  double claimed = 0.0;
  TraceOf<Sys> witness;
  try {
    claimed = spec.guess(st);
    witness = spec.witness_trace(st);
  } catch (const Error& e) {
    doc["error"] = e.what();
    return {std::move(doc), kExitUsage};
  }

  ordered_json claim;
  claim["kind"] = "mev";
  claim["value"] = claimed;
  claim["guess"] = guess_label;
  doc["claim"] = std::move(claim);

  ordered_json wit;
  ordered_json rows = ordered_json::array();
  SysStateOf<Sys> cur = st;
  double total = 0.0;
  for (const MoveOf<Sys>& m : witness) {
    ordered_json row;
    row["move"] = describe_move(m);
    auto next = sys.semantics(cur, m);
    row["ok"] = bool(next);
    double step = 0.0;
    if (next) {
      step = gain_state(sys, cur, *next);
      cur = *next;
    }
    total += step;
    row["gain"] = step;
    rows.push_back(std::move(row));
  }
  wit["moves"] = std::move(rows);
  wit["total_gain"] = total;
  doc["witness"] = std::move(wit);

  SamplerConfig scfg;
  scfg.amount_lo = grid.amount_step;
  auto sampler = make_move_sampler(sys, scfg);

  VerificationReport rep;
  rep.coherence = check_coherence(sys, spec, st);
  Rng rng_inv{seed};
  rep.invariant_soundness =
      check_invariant_soundness(sys, spec, st, sampler, samples, rng_inv, scfg);
  Rng rng_guess{seed + 1};
  rep.guess_soundness = check_guess_soundness(sys, spec, st, sampler, samples, rng_guess, scfg);
  Rng rng_tel{seed + 2};
  std::vector<TraceOf<Sys>> traces;
  for (int i = 0; i < kTelescopingTraces; ++i)
    traces.push_back(sample_trace(sys, st, sampler, rng_tel, scfg.max_walk_len));
  rep.telescoping = replay_telescoping(sys, spec, st, traces);

  auto oracle = brute_force_mev(sys, st, grid, OracleConfig{effective_budget(opts), true});
  OracleCrosscheck cc;
  cc.oracle_value = oracle.value;
  cc.gap = oracle.value - claimed;
  cc.nodes_expanded = oracle.nodes_expanded;
  cc.exhausted = oracle.exhausted;
  cc.pass = oracle.exhausted && std::abs(cc.gap) <= kEpsValue;
  rep.oracle_crosscheck = cc;

  ordered_json ver;
  {
    ordered_json c;
    c["claimed"] = rep.coherence.claimed;
    c["witness_gain"] = rep.coherence.witness_gain;
    c["pass"] = rep.coherence.pass;
    ver["coherence"] = std::move(c);
  }
  {
    ordered_json c;
    c["samples"] = rep.invariant_soundness.samples;
    c["counterexamples"] = counterexamples_json(rep.invariant_soundness.counterexamples);
    c["pass"] = rep.invariant_soundness.pass;
    ver["invariant_soundness"] = std::move(c);
  }
  {
    ordered_json c;
    c["samples"] = rep.guess_soundness.samples;
    c["max_violation"] = rep.guess_soundness.max_violation;
    c["noise_warnings"] = rep.guess_soundness.noise_warnings;
    c["counterexamples"] = counterexamples_json(rep.guess_soundness.counterexamples);
    c["pass"] = rep.guess_soundness.pass;
    ver["guess_soundness"] = std::move(c);
  }
  {
    ordered_json c;
    c["traces"] = rep.telescoping.traces;
    c["counterexamples"] = counterexamples_json(rep.telescoping.counterexamples);
    c["pass"] = rep.telescoping.all_bounded;
    ver["telescoping"] = std::move(c);
  }
  {
    ordered_json c;
    c["value"] = cc.oracle_value;
    c["gap"] = cc.gap;
    c["nodes_expanded"] = cc.nodes_expanded;
    c["exhausted"] = cc.exhausted;
    c["trace"] = trace_json(sys, oracle.trace);
    c["pass"] = cc.pass;
    ver["oracle_crosscheck"] = std::move(c);
  }
  doc["verification"] = std::move(ver);

  const bool pass = rep.pass();
  doc["status"] = pass ? "pass" : "fail";
  return {std::move(doc), pass ? kExitOk : kExitChecksFailed};
}

// ---- oracle ----

template <class Sys>
CmdResult oracle_impl(const Scenario& sc, const CmdOptions& opts, const Sys& sys,
                      const SysStateOf<Sys>& st) {
  const GridSpec grid = effective_grid(sc, opts);
  const std::uint64_t budget = effective_budget(opts);

  ordered_json doc = report_header("oracle", sc);
  doc["grid"] = grid_json(grid);
  doc["node_budget"] = budget;

  auto r = brute_force_mev(sys, st, grid, OracleConfig{budget, true});
  ordered_json o;
  o["value"] = r.value;
  o["trace"] = trace_json(sys, r.trace);
  o["nodes_expanded"] = r.nodes_expanded;
  o["exhausted"] = r.exhausted;
  doc["oracle"] = std::move(o);
  doc["status"] = r.exhausted ? "pass" : "budget-exhausted";
  return {std::move(doc), r.exhausted ? kExitOk : kExitBudgetExhausted};
}

// ---- trace ----

template <class Sys>
CmdResult trace_impl(const Scenario& sc, const Sys& sys, const SysStateOf<Sys>& st,
                     const TraceOf<Sys>& tr) {
  ordered_json doc = report_header("trace", sc);
  doc["initial_state"] = describe_state(sys, st);
  ordered_json rows = ordered_json::array();
  SysStateOf<Sys> cur = st;
  double total = 0.0;
  int step_no = 0;
  for (const MoveOf<Sys>& m : tr) {
    ordered_json row;
    row["step"] = ++step_no;
    row["move"] = describe_move(m);
    auto next = sys.semantics(cur, m);
    row["ok"] = bool(next);
    double g = 0.0;
    if (next) {
      g = gain_state(sys, cur, *next);
      cur = *next;
    }
    total += g;
    row["gain"] = g;
    row["state"] = describe_state(sys, cur);  // unchanged when the move reverted
    rows.push_back(std::move(row));
  }
  doc["steps"] = std::move(rows);
  doc["total_gain"] = total;
  doc["status"] = "pass";
  return {std::move(doc), kExitOk};
}

}  // namespace

CmdResult run_analyze(const Scenario& sc, const CmdOptions& opts) {
  switch (sc.kind) {
    case ContractKind::airdrop: {
      const AirdropSystem sys = make_airdrop_system(sc);
      return analyze_impl(sc, opts, sys, make_airdrop_state(sc), airdrop_guess_spec(sys),
                          "price(T0) * bal");
    }
    case ContractKind::coinpusher: {
      const CoinPusherSystem sys = make_coinpusher_system(sc);
      return analyze_impl(sc, opts, sys, make_coinpusher_state(sc), coinpusher_guess_spec(sys),
                          "price(T0) * (bal + capturable pending push)");
    }
    case ContractKind::amm: {
      const AmmSystem sys = make_amm_system(sc);
      const AmmState st = make_amm_state(sc);
      for (const auto& [id, tx] : st.s.mempool.entries()) {
        if (tx.vmin == 0.0) {
          ordered_json doc = report_header("analyze", sc);
          doc["error"] = "pending swap '" + id +
                         "' has vmin = 0: no maximizing trace exists, run the mevsup subcommand";
          return {std::move(doc), kExitUsage};
        }
      }
      return analyze_impl(sc, opts, sys, st, amm_guess_spec(sys),
                          "extractable(reserves) + sandwich margin");
    }
  }
  throw Error("run_analyze: unknown contract kind");
}

CmdResult run_oracle(const Scenario& sc, const CmdOptions& opts) {
  switch (sc.kind) {
    case ContractKind::airdrop: {
      const AirdropSystem sys = make_airdrop_system(sc);
      return oracle_impl(sc, opts, sys, make_airdrop_state(sc));
    }
    case ContractKind::coinpusher: {
      const CoinPusherSystem sys = make_coinpusher_system(sc);
      return oracle_impl(sc, opts, sys, make_coinpusher_state(sc));
    }
    case ContractKind::amm: {
      const AmmSystem sys = make_amm_system(sc);
      return oracle_impl(sc, opts, sys, make_amm_state(sc));
    }
  }
  throw Error("run_oracle: unknown contract kind");
}

CmdResult run_mevsup(const Scenario& sc, const CmdOptions& opts) {
  ordered_json doc = report_header("mevsup", sc);
  if (sc.kind != ContractKind::amm) {
    doc["error"] = "mevsup needs an amm scenario with one pending vmin = 0 swap";
    return {std::move(doc), kExitUsage};
  }
  const AmmSystem sys = make_amm_system(sc);
  const AmmState st = make_amm_state(sc);
  const auto& entries = st.s.mempool.entries();
  if (entries.size() != 1 || entries[0].second.vmin != 0.0 ||
      !amm_tx_executable(st, entries[0].second)) {
    doc["error"] = "mevsup needs exactly one pending executable swap with vmin = 0";
    return {std::move(doc), kExitUsage};
  }
  const TxId id = entries[0].first;
  const AmmSystem::Tx tx = entries[0].second;

  std::vector<double> xs =
      opts.x_schedule.empty() ? std::vector<double>{1.0, 10.0, 100.0, 1000.0} : opts.x_schedule;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || (i > 0 && xs[i] <= xs[i - 1])) {
      doc["error"] = "x schedule must be positive and strictly increasing";
      return {std::move(doc), kExitUsage};
    }
  }

  const double sup = mevsup_supremum(sys, st, tx);
  ordered_json claim;
  claim["kind"] = "mev_sup";
  claim["value"] = sup;
  doc["claim"] = std::move(claim);

  auto family = [&](double x) { return mevsup_trace_family(sys, st, id, x); };
  MevSupEstimate est;
  try {
    est = estimate_mev_sup<AmmSystem>(sys, st, family, xs, sup);
  } catch (const NotConverging& e) {
    doc["verdict"] = "not-converging";
    doc["error"] = e.what();
    doc["status"] = "fail";
    return {std::move(doc), kExitChecksFailed};
  }

  bool closed_form_ok = true;
  ordered_json rows = ordered_json::array();
  for (const MevSupRow& r : est.rows) {
    const double cf = mevsup_gain_closed_form(sys, st, tx, r.x);
    const bool match = std::abs(r.gain - cf) <= kEpsValue;
    closed_form_ok = closed_form_ok && match;
    ordered_json row;
    row["x"] = r.x;
    row["gain"] = r.gain;
    row["closed_form"] = cf;
    row["gap"] = r.gap;
    row["matches_closed_form"] = match;
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  doc["verdict"] = est.verdict;
  doc["closed_form_matches"] = closed_form_ok;
  const bool pass = est.verdict == "converging" && closed_form_ok;
  doc["status"] = pass ? "pass" : "fail";
  return {std::move(doc), pass ? kExitOk : kExitChecksFailed};
}

CmdResult run_trace(const Scenario& sc, std::string_view trace_literal, const CmdOptions&) {
  switch (sc.kind) {
    case ContractKind::airdrop: {
      const AirdropSystem sys = make_airdrop_system(sc);
      return trace_impl(sc, sys, make_airdrop_state(sc), parse_airdrop_trace(sys, trace_literal));
    }
    case ContractKind::coinpusher: {
      const CoinPusherSystem sys = make_coinpusher_system(sc);
      return trace_impl(sc, sys, make_coinpusher_state(sc),
                        parse_coinpusher_trace(sys, trace_literal));
    }
    case ContractKind::amm: {
      const AmmSystem sys = make_amm_system(sc);
      return trace_impl(sc, sys, make_amm_state(sc), parse_amm_trace(sys, trace_literal));
    }
  }
  throw Error("run_trace: unknown contract kind");
}

}  // namespace mevc
