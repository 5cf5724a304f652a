#ifndef MEVC_VERIFY_HPP
#define MEVC_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mevc/errors.hpp"
#include "mevc/grid.hpp"
#include "mevc/oracle.hpp"
#include "mevc/rng.hpp"
#include "mevc/sampler.hpp"
#include "mevc/system.hpp"

namespace mevc {

// A claimed MEV characterization: an invariant on reachable states, a guess
// for the MEV of every invariant state, and a witness trace builder whose
// replayed gain should meet the guess. Coherence + soundness of these three
// pin the guess to the exact MEV.
template <ContractSystem Sys>
struct GuessSpec {
  std::function<bool(const SysStateOf<Sys>&)> invariant;
  std::function<double(const SysStateOf<Sys>&)> guess;
  std::function<TraceOf<Sys>(const SysStateOf<Sys>&)> witness_trace;
};

struct Counterexample {
  double violation = 0.0;
  std::string detail;
};

struct CoherenceResult {
  double claimed = 0.0;
  double witness_gain = 0.0;
  bool pass = false;
};

struct InvariantSoundnessResult {
  std::uint64_t samples = 0;
  std::vector<Counterexample> counterexamples;
  bool pass = false;
};

struct GuessSoundnessResult {
  std::uint64_t samples = 0;
  double max_violation = 0.0;
  std::uint64_t noise_warnings = 0;  // violations within (0, kEpsValue]
  std::vector<Counterexample> counterexamples;
  bool pass = false;
};

struct TelescopingResult {
  std::uint64_t traces = 0;
  bool all_bounded = false;
  std::vector<Counterexample> counterexamples;
};

struct OracleCrosscheck {
  double oracle_value = 0.0;
  double gap = 0.0;
  std::uint64_t nodes_expanded = 0;
  bool exhausted = false;
  bool pass = false;
};

struct VerificationReport {
  CoherenceResult coherence;
  InvariantSoundnessResult invariant_soundness;
  GuessSoundnessResult guess_soundness;
  std::optional<OracleCrosscheck> oracle_crosscheck;
  TelescopingResult telescoping;

  bool pass() const {
    return coherence.pass && invariant_soundness.pass && guess_soundness.pass &&
           telescoping.all_bounded && (!oracle_crosscheck || oracle_crosscheck->pass);
  }
};

// Witness coherence at st: the replayed witness gain must meet the guess
// within kEpsValue.
template <ContractSystem Sys>
CoherenceResult check_coherence(const Sys& sys, const GuessSpec<Sys>& spec,
                                const SysStateOf<Sys>& st) {
  if (!spec.invariant(st)) throw InvariantViolated("check_coherence: invariant fails at init");
  CoherenceResult r;
  r.claimed = spec.guess(st);
  r.witness_gain = gain_trace(sys, st, spec.witness_trace(st));
  r.pass = std::abs(r.witness_gain - r.claimed) <= kEpsValue;
  return r;
}

namespace detail {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

// Samples (state, move) pairs along random walks from st and checks the
// invariant is closed under defined moves. Counterexamples are re-checked
// (semantics re-evaluated) before being reported. Only pairs with a defined
// successor count toward n.
template <ContractSystem Sys>
InvariantSoundnessResult check_invariant_soundness(const Sys& sys, const GuessSpec<Sys>& spec,
                                                   const SysStateOf<Sys>& st,
                                                   const MoveSampler<Sys>& sampler, std::uint64_t n,
                                                   Rng& rng, const SamplerConfig& cfg = {}) {
  InvariantSoundnessResult r;
  if (!spec.invariant(st)) {
    r.counterexamples.push_back({1.0, "initial state violates the invariant"});
    r.pass = false;
    return r;
  }
  std::uint64_t attempts = 0;
  const std::uint64_t max_attempts = n * 64 + 1024;
  while (r.samples < n && attempts++ < max_attempts) {
    const int len = static_cast<int>(rng.below(cfg.max_walk_len + 1));
    SysStateOf<Sys> cur = random_walk(sys, st, sampler, rng, len);
    if (!spec.invariant(cur)) {
      r.counterexamples.push_back({1.0, "walk reached a state violating the invariant"});
      break;
    }
    auto m = sampler(rng, cur);
    if (!m) continue;
    auto next = sys.semantics(cur, *m);
    if (!next) continue;
    ++r.samples;
    if (!spec.invariant(*next)) {
      auto recheck = sys.semantics(cur, *m);
      if (recheck && !spec.invariant(*recheck))
        r.counterexamples.push_back({1.0, "defined move leaves the invariant"});
    }
  }
  r.pass = r.counterexamples.empty();
  return r;
}

// Samples invariant-abiding (state, move) pairs with defined successors and
// checks gain + guess(succ) <= guess(state) + kEpsValue. Violations within
// (0, kEpsValue] are float-noise warnings; larger ones are counterexamples,
// re-checked deterministically before being reported.
template <ContractSystem Sys>
GuessSoundnessResult check_guess_soundness(const Sys& sys, const GuessSpec<Sys>& spec,
                                           const SysStateOf<Sys>& st,
                                           const MoveSampler<Sys>& sampler, std::uint64_t n,
                                           Rng& rng, const SamplerConfig& cfg = {},
                                           std::uint64_t stop_after_counterexamples = 0) {
  GuessSoundnessResult r;
  std::uint64_t attempts = 0;
  const std::uint64_t max_attempts = n * 64 + 1024;
  while (r.samples < n && attempts++ < max_attempts) {
    const int len = static_cast<int>(rng.below(cfg.max_walk_len + 1));
    SysStateOf<Sys> cur = random_walk(sys, st, sampler, rng, len);
    if (!spec.invariant(cur)) continue;
    auto m = sampler(rng, cur);
    if (!m) continue;
    auto next = sys.semantics(cur, *m);
    if (!next || !spec.invariant(*next)) continue;
    ++r.samples;
    const double lhs = gain_state(sys, cur, *next) + spec.guess(*next);
    const double rhs = spec.guess(cur);
    const double violation = lhs - rhs;
    if (violation > r.max_violation) r.max_violation = violation;
    if (violation > kEpsValue) {
      auto recheck = sys.semantics(cur, *m);
      if (recheck &&
          gain_state(sys, cur, *recheck) + spec.guess(*recheck) - spec.guess(cur) > kEpsValue) {
        r.counterexamples.push_back(
            {violation, "gain + guess(succ) exceeds guess(state) by " + detail::fmt_double(violation)});
        if (stop_after_counterexamples && r.counterexamples.size() >= stop_after_counterexamples)
          break;
      }
    } else if (violation > 0.0) {
      ++r.noise_warnings;
    }
  }
  r.pass = r.counterexamples.empty();
  return r;
}

// Exhaustive variant over the finite grid: every state reachable from st via
// grid moves within `radius` steps, crossed with every grid move.
template <ContractSystem Sys>
GuessSoundnessResult check_guess_soundness_exhaustive(const Sys& sys, const GuessSpec<Sys>& spec,
                                                      const SysStateOf<Sys>& st,
                                                      const GridSpec& grid, int radius,
                                                      double eps = kEpsValue) {
  GuessSoundnessResult r;
  std::deque<std::pair<SysStateOf<Sys>, int>> queue{{st, 0}};
  while (!queue.empty()) {
    auto [cur, depth] = queue.front();
    queue.pop_front();
    if (!spec.invariant(cur)) continue;
    for (const MoveOf<Sys>& m : sys.move_grid(cur, grid)) {
      auto next = sys.semantics(cur, m);
      if (!next || !spec.invariant(*next)) continue;
      ++r.samples;
      const double violation = gain_state(sys, cur, *next) + spec.guess(*next) - spec.guess(cur);
      if (violation > r.max_violation) r.max_violation = violation;
      if (violation > eps)
        r.counterexamples.push_back(
            {violation, "grid soundness violated by " + detail::fmt_double(violation)});
      else if (violation > 0.0)
        ++r.noise_warnings;
      if (depth + 1 < radius) queue.emplace_back(*next, depth + 1);
    }
  }
  r.pass = r.counterexamples.empty();
  return r;
}

// Replays the telescoping argument: for each trace, walking the intermediate
// states, the chained step inequalities collapse to
// gain_trace(st, tr) <= guess(st) + kEpsValue.
template <ContractSystem Sys>
TelescopingResult replay_telescoping(const Sys& sys, const GuessSpec<Sys>& spec,
                                     const SysStateOf<Sys>& st,
                                     std::span<const TraceOf<Sys>> traces) {
  TelescopingResult r;
  const double bound = spec.guess(st);
  for (const TraceOf<Sys>& tr : traces) {
    ++r.traces;
    SysStateOf<Sys> cur = st;
    bool invariant_held = true;
    for (const MoveOf<Sys>& m : tr) {
      auto next = sys.semantics(cur, m);
      if (!next) continue;
      cur = *next;
      if (!spec.invariant(cur)) {
        invariant_held = false;
        break;
      }
    }
    if (!invariant_held) {
      r.counterexamples.push_back({1.0, "trace leaves the invariant"});
      continue;
    }
    const double total = gain_state(sys, st, cur);
    if (total > bound + kEpsValue)
      r.counterexamples.push_back(
          {total - bound, "trace gain " + detail::fmt_double(total) + " exceeds guess " +
                              detail::fmt_double(bound)});
  }
  r.all_bounded = r.counterexamples.empty();
  return r;
}

// Completeness direction, grid-restricted: the oracle itself is a guess
// (MEV is its own guess, the optimal trace its own witness). Diverging
// searches surface as OracleDiverged instead of silently truncating.
template <ContractSystem Sys>
GuessSpec<Sys> build_guess_from_oracle(const Sys& sys,
                                       std::function<bool(const SysStateOf<Sys>&)> inv,
                                       const GridSpec& grid, const OracleConfig& cfg = {}) {
  GuessSpec<Sys> spec;
  spec.invariant = inv;
  const Sys* sys_p = &sys;
  spec.guess = [sys_p, inv, grid, cfg](const SysStateOf<Sys>& st) {
    if (!inv(st)) throw InvariantViolated("oracle guess: invariant fails");
    auto r = brute_force_mev(*sys_p, st, grid, cfg);
    if (!r.exhausted) throw OracleDiverged("oracle guess: node budget exceeded");
    return r.value;
  };
  spec.witness_trace = [sys_p, inv, grid, cfg](const SysStateOf<Sys>& st) {
    if (!inv(st)) throw InvariantViolated("oracle witness: invariant fails");
    auto r = brute_force_mev(*sys_p, st, grid, cfg);
    if (!r.exhausted) throw OracleDiverged("oracle witness: node budget exceeded");
    return r.trace;
  };
  return spec;
}

enum class MevKind { mev, mev_sup };

struct MevClaim {
  MevKind kind = MevKind::mev;
  double value = 0.0;
};

struct MevSupRow {
  double x = 0.0;
  double gain = 0.0;
  double gap = 0.0;
};

struct MevSupEstimate {
  MevClaim claim;
  std::vector<MevSupRow> rows;
  bool gaps_shrink = false;
  bool all_below_sup = false;
  std::string verdict;  // "converging" | "not-converging" | "insufficient schedule"
};

// Evaluates a parameterized trace family against a claimed supremum: gains
// must approach it monotonically from below. A gain decreasing beyond
// kEpsValue across the schedule is NotConverging.
template <ContractSystem Sys>
MevSupEstimate estimate_mev_sup(const Sys& sys, const SysStateOf<Sys>& st,
                                const std::function<TraceOf<Sys>(double)>& family,
                                std::span<const double> x_schedule, double claimed_sup) {
  MevSupEstimate est;
  est.claim = {MevKind::mev_sup, claimed_sup};
  est.all_below_sup = true;
  double prev_gain = 0.0;
  for (std::size_t i = 0; i < x_schedule.size(); ++i) {
    const double x = x_schedule[i];
    const double g = gain_trace(sys, st, family(x));
    if (i > 0 && g < prev_gain - kEpsValue)
      throw NotConverging("mevsup: gain decreased across the x schedule");
    prev_gain = g;
    est.rows.push_back({x, g, claimed_sup - g});
    if (!(g < claimed_sup)) est.all_below_sup = false;
  }
  est.gaps_shrink = true;
  for (std::size_t i = 1; i < est.rows.size(); ++i)
    if (!(est.rows[i].gap < est.rows[i - 1].gap)) est.gaps_shrink = false;
  if (est.rows.size() < 2)
    est.verdict = "insufficient schedule";
  else
    est.verdict = (est.gaps_shrink && est.all_below_sup) ? "converging" : "not-converging";
  return est;
}

// Deliberately wrong guess for harness self-tests: adds `offset` to the
// guess wherever `where` holds.
template <ContractSystem Sys>
GuessSpec<Sys> with_guess_offset(GuessSpec<Sys> spec,
                                 std::function<bool(const SysStateOf<Sys>&)> where,
                                 double offset) {
  auto base = spec.guess;
  spec.guess = [base, where, offset](const SysStateOf<Sys>& st) {
    return base(st) + (where(st) ? offset : 0.0);
  };
  return spec;
}

}  // namespace mevc

#endif
