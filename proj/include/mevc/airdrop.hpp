#ifndef MEVC_AIRDROP_HPP
#define MEVC_AIRDROP_HPP

#include <algorithm>
#include <compare>
#include <optional>
#include <span>
#include <vector>

#include "mevc/errors.hpp"
#include "mevc/system.hpp"

namespace mevc {

// Airdrop contract: anyone may withdraw any v <= bal of the single token T0.
// All the value sitting in the contract is extractable in one move.
class AirdropSystem {
 public:
  struct Tx {
    Participant sender;
    double v;  // > 0
    auto operator<=>(const Tx&) const = default;
  };

  struct State {
    double bal = 0.0;  // contract's T0 balance
    Wallet wal;        // honest participants' cumulative holdings
    Mempool<Tx> mempool;
  };

  explicit AirdropSystem(PriceMap prices) : prices_(std::move(prices)) {}

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
    if (tx == nullptr) return std::nullopt;
    if (!(tx->v > 0.0) || !le_tok(tx->v, st.s.bal)) return std::nullopt;

    SysState<State> next = st;
    next.s.bal -= tx->v;
    if (next.s.bal < 0.0) next.s.bal = 0.0;
    if (tx->sender.is_adv())
      next.delta.add(TokenId::T0, tx->v);
    else
      next.s.wal.credit(TokenId::T0, tx->v);
    if (from_pool) next.s.mempool.erase(m.id());
    return next;
  }

  std::vector<Move<Tx>> move_grid(const SysState<State>& st, const GridSpec& grid) const {
    std::vector<Move<Tx>> out;
    if (grid.include_mempool)
      for (const auto& [id, tx] : st.s.mempool.entries()) out.push_back(Move<Tx>::from_mempool(id));
    auto amounts = grid_amounts(grid);
    if (st.s.bal > kEpsToken) amounts.push_back(st.s.bal);  // distinguished: drain exactly
    for (double a : amounts)
      if (auto m = Move<Tx>::craft(*this, Tx{Participant::adversary(), a})) out.push_back(*m);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  PriceMap prices_;
};

// MEV of any airdrop state is the contract balance at the T0 price,
// independent of the mempool.
inline bool airdrop_invariant(const SysState<AirdropSystem::State>&) { return true; }

inline double airdrop_guess(const AirdropSystem& sys, const SysState<AirdropSystem::State>& st) {
  return sys.prices().get(TokenId::T0) * st.s.bal;
}

// Witness: drain the whole balance in one adversarial drop.
inline Trace<AirdropSystem::Tx> airdrop_witness(const AirdropSystem& sys,
                                                const SysState<AirdropSystem::State>& st) {
  Trace<AirdropSystem::Tx> tr;
  if (st.s.bal > kEpsToken) {
    auto m = Move<AirdropSystem::Tx>::craft(sys, {Participant::adversary(), st.s.bal});
    tr.push_back(*m);
  }
  return tr;
}

}  // namespace mevc

#endif
