#ifndef MEVC_COINPUSHER_HPP
#define MEVC_COINPUSHER_HPP

#include <algorithm>
#include <compare>
#include <optional>
#include <span>
#include <vector>

#include "mevc/errors.hpp"
#include "mevc/system.hpp"

namespace mevc {

// Coin-pusher game: push(v) adds v to the pot; if the pot reaches the
// threshold, the whole pot (push included) pays out to the sender. Honest
// pushes are limited by wal, the adversary mints its own stake on credit.
class CoinPusherSystem {
 public:
  struct Tx {
    Participant sender;
    double v;  // > 0
    auto operator<=>(const Tx&) const = default;
  };

  struct State {
    double threshold = 0.0;  // > 0, fixed
    double bal = 0.0;        // pot
    Wallet wal;
    Mempool<Tx> mempool;
  };

  explicit CoinPusherSystem(PriceMap prices) : prices_(std::move(prices)) {}

  std::span<const TokenId> token_universe() const {
    static constexpr TokenId u[] = {TokenId::T0};
    return u;
  }
  const PriceMap& prices() const { return prices_; }

  bool adv_craftable(const Tx& tx) const { return tx.sender.is_adv() && tx.v > 0.0; }

  Wallet hon_tokens(const State& s) const {
    Wallet w = s.wal;
    w.credit(TokenId::T0, s.bal);
    return w;
  }

  std::optional<SysState<State>> semantics(const SysState<State>& st, const Move<Tx>& m) const {
    const bool from_pool = m.kind() == Move<Tx>::Kind::from_mempool;
    const Tx* tx = from_pool ? st.s.mempool.find(m.id()) : &m.tx();
    if (tx == nullptr || !(tx->v > 0.0)) return std::nullopt;
    const bool adv = tx->sender.is_adv();
    if (!adv && !le_tok(tx->v, st.s.wal.get(TokenId::T0))) return std::nullopt;

    SysState<State> next = st;
    if (adv)
      next.delta.add(TokenId::T0, -tx->v);
    else
      next.s.wal.debit(TokenId::T0, tx->v);
    next.s.bal += tx->v;
    if (ge_tok(next.s.bal, next.s.threshold)) {
      // pot tips: everything goes back to the sender
      if (adv)
        next.delta.add(TokenId::T0, next.s.bal);
      else
        next.s.wal.credit(TokenId::T0, next.s.bal);
      next.s.bal = 0.0;
    }
    if (from_pool) next.s.mempool.erase(m.id());
    return next;
  }

  std::vector<Move<Tx>> move_grid(const SysState<State>& st, const GridSpec& grid) const {
    std::vector<Move<Tx>> out;
    if (grid.include_mempool)
      for (const auto& [id, tx] : st.s.mempool.entries()) out.push_back(Move<Tx>::from_mempool(id));
    auto amounts = grid_amounts(grid);
    amounts.push_back(st.s.threshold);  // distinguished: tip from empty
    if (st.s.threshold - st.s.bal > kEpsToken)
      amounts.push_back(st.s.threshold - st.s.bal);  // distinguished: tip exactly
    for (double a : amounts)
      if (auto m = Move<Tx>::craft(*this, Tx{Participant::adversary(), a})) out.push_back(*m);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  PriceMap prices_;
};

using CpState = SysState<CoinPusherSystem::State>;
using CpTrace = Trace<CoinPusherSystem::Tx>;

// One-or-less discipline: guesses and strategies are stated for an empty
// mempool or a single pending honest push.
inline bool coinpusher_invariant(const CpState& st) {
  const auto& entries = st.s.mempool.entries();
  if (entries.empty()) return true;
  return entries.size() == 1 && !entries[0].second.sender.is_adv();
}

inline double coinpusher_guess_empty(const CoinPusherSystem& sys, const CpState& st) {
  if (!st.s.mempool.empty()) throw InvariantViolated("coinpusher_guess_empty: mempool not empty");
  return sys.prices().get(TokenId::T0) * st.s.bal;
}

// Pending push worth capturing iff it cannot tip the pot on its own and the
// sender can fund it; then the adversary banks the pot and the push.
inline double coinpusher_guess_singleton(const CoinPusherSystem& sys, const CpState& st,
                                         const TxId& id) {
  const CoinPusherSystem::Tx* tx = st.s.mempool.find(id);
  if (st.s.mempool.size() != 1 || tx == nullptr || tx->sender.is_adv())
    throw InvariantViolated("coinpusher_guess_singleton: need a singleton honest mempool");
  const double p = sys.prices().get(TokenId::T0);
  if (tx->v < st.s.threshold && le_tok(tx->v, st.s.wal.get(TokenId::T0)))
    return p * (st.s.bal + tx->v);
  return p * st.s.bal;
}

inline double coinpusher_guess(const CoinPusherSystem& sys, const CpState& st) {
  if (!coinpusher_invariant(st)) throw InvariantViolated("coinpusher_guess: mempool too large");
  if (st.s.mempool.empty()) return coinpusher_guess_empty(sys, st);
  return coinpusher_guess_singleton(sys, st, st.s.mempool.entries()[0].first);
}

// Interleaved strategy: tip the pot, let the next pending push land, tip
// again, and so on; n pending txs give n+1 adversarial trigger pushes.
// With an empty mempool this is the single trigger push.
inline CpTrace coinpusher_strategy(const CoinPusherSystem& sys, const CpState& st) {
  using Tx = CoinPusherSystem::Tx;
  const Tx trigger{Participant::adversary(), st.s.threshold};
  CpTrace tr;
  tr.push_back(*Move<Tx>::craft(sys, trigger));
  for (const auto& [id, tx] : st.s.mempool.entries()) {
    tr.push_back(Move<Tx>::from_mempool(id));
    tr.push_back(*Move<Tx>::craft(sys, trigger));
  }
  return tr;
}

inline CpTrace coinpusher_witness_singleton(const CoinPusherSystem& sys, const CpState& st,
                                            const TxId& id) {
  using Tx = CoinPusherSystem::Tx;
  const Tx trigger{Participant::adversary(), st.s.threshold};
  CpTrace tr;
  tr.push_back(*Move<Tx>::craft(sys, trigger));
  tr.push_back(Move<Tx>::from_mempool(id));
  tr.push_back(*Move<Tx>::craft(sys, trigger));
  return tr;
}

}  // namespace mevc

#endif
