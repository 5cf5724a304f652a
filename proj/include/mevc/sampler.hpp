#ifndef MEVC_SAMPLER_HPP
#define MEVC_SAMPLER_HPP

#include <algorithm>
#include <functional>
#include <optional>

#include "mevc/airdrop.hpp"
#include "mevc/amm.hpp"
#include "mevc/coinpusher.hpp"
#include "mevc/rng.hpp"
#include "mevc/system.hpp"

namespace mevc {

// Random move source for soundness sampling: pending mempool ids uniformly,
// adversarial amounts log-uniformly between the grid step and a wealth cap
// of 10x the honest holdings' value (log-uniform so every magnitude gets
// exercised, not just the cap's neighborhood).
struct SamplerConfig {
  double amount_lo = 1.0;
  double wealth_cap_multiplier = 10.0;
  int max_walk_len = 8;
};

template <class Sys>
using MoveSampler = std::function<std::optional<MoveOf<Sys>>(Rng&, const SysStateOf<Sys>&)>;

namespace detail {

template <class Sys>
std::optional<MoveOf<Sys>> pick_mempool(Rng& rng, const SysStateOf<Sys>& st) {
  const auto& entries = st.s.mempool.entries();
  if (entries.empty()) return std::nullopt;
  return MoveOf<Sys>::from_mempool(entries[rng.below(entries.size())].first);
}

template <class Sys>
double amount_cap(const Sys& sys, const SysStateOf<Sys>& st, const SamplerConfig& cfg, TokenId t) {
  const double hon = token_value(sys, sys.hon_tokens(st.s));
  const double cap = cfg.wealth_cap_multiplier * hon / sys.prices().get(t);
  return std::max(cap, cfg.amount_lo * 2.0);
}

}  // namespace detail

inline MoveSampler<AirdropSystem> make_move_sampler(const AirdropSystem& sys, SamplerConfig cfg) {
  return [&sys, cfg](Rng& rng, const SysState<AirdropSystem::State>& st)
             -> std::optional<Move<AirdropSystem::Tx>> {
    if (!st.s.mempool.empty() && rng.chance(0.5)) return detail::pick_mempool<AirdropSystem>(rng, st);
    const double v =
        rng.log_uniform(cfg.amount_lo, detail::amount_cap(sys, st, cfg, TokenId::T0));
    return Move<AirdropSystem::Tx>::craft(sys, {Participant::adversary(), v});
  };
}

inline MoveSampler<CoinPusherSystem> make_move_sampler(const CoinPusherSystem& sys,
                                                       SamplerConfig cfg) {
  return [&sys, cfg](Rng& rng, const CpState& st) -> std::optional<Move<CoinPusherSystem::Tx>> {
    if (!st.s.mempool.empty() && rng.chance(0.5))
      return detail::pick_mempool<CoinPusherSystem>(rng, st);
    const double cap =
        std::max(detail::amount_cap(sys, st, cfg, TokenId::T0), 2.0 * st.s.threshold);
    const double v = rng.log_uniform(cfg.amount_lo, cap);
    return Move<CoinPusherSystem::Tx>::craft(sys, {Participant::adversary(), v});
  };
}

inline MoveSampler<AmmSystem> make_move_sampler(const AmmSystem& sys, SamplerConfig cfg) {
  return [&sys, cfg](Rng& rng, const AmmState& st) -> std::optional<Move<AmmSystem::Tx>> {
    if (!st.s.mempool.empty() && rng.chance(0.5)) return detail::pick_mempool<AmmSystem>(rng, st);
    const TokenId tin = rng.chance(0.5) ? TokenId::T0 : TokenId::T1;
    const double v = rng.log_uniform(cfg.amount_lo, detail::amount_cap(sys, st, cfg, tin));
    return Move<AmmSystem::Tx>::craft(sys, {Participant::adversary(), v, tin, 0.0});
  };
}

// Random reachable state: a walk of sampled moves from st, failures skipped.
template <ContractSystem Sys>
SysStateOf<Sys> random_walk(const Sys& sys, SysStateOf<Sys> st, const MoveSampler<Sys>& sampler,
                            Rng& rng, int len) {
  for (int i = 0; i < len; ++i) {
    auto m = sampler(rng, st);
    if (!m) continue;
    if (auto next = sys.semantics(st, *m)) st = std::move(*next);
  }
  return st;
}

// Random trace for telescoping replay; moves are kept whether or not they
// end up succeeding, apply_trace skips the failures.
template <ContractSystem Sys>
TraceOf<Sys> sample_trace(const Sys& sys, const SysStateOf<Sys>& st, const MoveSampler<Sys>& sampler,
                          Rng& rng, int max_len) {
  TraceOf<Sys> tr;
  SysStateOf<Sys> cur = st;
  const int len = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_len) + 1));
  for (int i = 0; i < len; ++i) {
    auto m = sampler(rng, cur);
    if (!m) continue;
    tr.push_back(*m);
    if (auto next = sys.semantics(cur, *m)) cur = std::move(*next);
  }
  return tr;
}

}  // namespace mevc

#endif
