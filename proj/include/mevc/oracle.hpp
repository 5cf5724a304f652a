#ifndef MEVC_ORACLE_HPP
#define MEVC_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "mevc/grid.hpp"
#include "mevc/system.hpp"

namespace mevc {

struct OracleConfig {
  std::uint64_t node_budget = 10'000'000;
  bool prune = true;
};

template <class Tx>
struct OracleResult {
  double value = 0.0;
  Trace<Tx> trace;
  std::uint64_t nodes_expanded = 0;
  bool exhausted = true;  // false iff the node budget cut the search short
};

// Admissible bound on any continuation from a state: everything the honest
// side still holds. No trace gains more, so a subtree whose bound cannot
// beat the incumbent is skippable.
template <ContractSystem Sys>
double admissible_bound(const Sys& sys, const SysStateOf<Sys>& st, double gain_so_far) {
  return gain_so_far + token_value(sys, sys.hon_tokens(st.s));
}

namespace detail {

template <ContractSystem Sys>
struct BruteForce {
  const Sys& sys;
  const GridSpec& grid;
  const OracleConfig& cfg;
  OracleResult<TxOf<Sys>> res;
  std::vector<MoveOf<Sys>> prefix;

  // DFS in lexicographic move order. Candidates are compared by value, then
  // shorter trace, then first-found (= lexicographically least). A failing
  // move is never entered: the same continuation exists without it, shorter.
  // Pruning recurses only into subtrees that can still strictly beat the
  // incumbent, or tie it with a strictly shorter trace, so the pruned and
  // unpruned searches return identical results.
  void dfs(const SysStateOf<Sys>& st, double gain_so_far) {
    if (!res.exhausted) return;
    for (const MoveOf<Sys>& m : sys.move_grid(st, grid)) {
      auto next = sys.semantics(st, m);
      if (!next) continue;
      if (res.nodes_expanded++ >= cfg.node_budget) {
        res.exhausted = false;
        return;
      }
      prefix.push_back(m);
      const double g = gain_so_far + gain_state(sys, st, *next);
      if (g > res.value || (g == res.value && prefix.size() < res.trace.size())) {
        res.value = g;
        res.trace = prefix;
      }
      if (prefix.size() < static_cast<std::size_t>(grid.max_depth)) {
        bool descend = true;
        if (cfg.prune) {
          const double bound = admissible_bound(sys, *next, g);
          descend = bound > res.value ||
                    (bound == res.value && prefix.size() + 1 < res.trace.size());
        }
        if (descend) dfs(*next, g);
      }
      prefix.pop_back();
      if (!res.exhausted) return;
    }
  }
};

}  // namespace detail

// Exhaustive max over grid traces of length <= max_depth. The empty trace is
// always a candidate, so the result is >= 0. On budget exhaustion the best
// value found so far is returned with exhausted = false.
template <ContractSystem Sys>
OracleResult<TxOf<Sys>> brute_force_mev(const Sys& sys, const SysStateOf<Sys>& st,
                                        const GridSpec& grid, const OracleConfig& cfg = {}) {
  grid.validate();
  detail::BruteForce<Sys> search{sys, grid, cfg, {}, {}};
  search.dfs(st, 0.0);
  return std::move(search.res);
}

// All traces of length <= max_depth mixing adversarial grid moves with each
// pending mempool id at most once. Reduced space for contracts where firing
// a pending tx twice can never pay; every emitted prefix is visited.
template <ContractSystem Sys>
void for_each_mempool_interleaving(const Sys& sys, const SysStateOf<Sys>& st, const GridSpec& grid,
                                   const std::function<void(const TraceOf<Sys>&)>& fn) {
  grid.validate();
  GridSpec adv_only = grid;
  adv_only.include_mempool = false;
  TraceOf<Sys> prefix;
  std::vector<TxId> pending;
  for (const auto& [id, tx] : st.s.mempool.entries()) pending.push_back(id);
  std::vector<bool> used(pending.size(), false);

  const std::function<void(const SysStateOf<Sys>&)> rec = [&](const SysStateOf<Sys>& cur) {
    fn(prefix);
    if (prefix.size() >= static_cast<std::size_t>(grid.max_depth)) return;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      prefix.push_back(MoveOf<Sys>::from_mempool(pending[i]));
      auto next = sys.semantics(cur, prefix.back());
      rec(next ? *next : cur);
      prefix.pop_back();
      used[i] = false;
    }
    for (const MoveOf<Sys>& m : sys.move_grid(cur, adv_only)) {
      prefix.push_back(m);
      auto next = sys.semantics(cur, m);
      rec(next ? *next : cur);
      prefix.pop_back();
    }
  };
  rec(st);
}

}  // namespace mevc

#endif
