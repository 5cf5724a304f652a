#ifndef MEVC_SYSTEM_HPP
#define MEVC_SYSTEM_HPP

#include <cmath>
#include <compare>
#include <concepts>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mevc/grid.hpp"
#include "mevc/participant.hpp"
#include "mevc/tokens.hpp"

namespace mevc {

using TxId = std::string;

// Ordered association list of pending transactions; ids are unique and a tx
// is removed exactly when a FromMempool move on it succeeds.
template <class Tx>
class Mempool {
 public:
  using Entry = std::pair<TxId, Tx>;

  bool insert(TxId id, Tx tx) {
    if (find(id) != nullptr) return false;
    entries_.emplace_back(std::move(id), std::move(tx));
    return true;
  }

  const Tx* find(const TxId& id) const {
    for (const Entry& e : entries_)
      if (e.first == id) return &e.second;
    return nullptr;
  }

  void erase(const TxId& id) {
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
      if (it->first == id) {
        entries_.erase(it);
        return;
      }
    }
  }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  bool operator==(const Mempool&) const = default;

 private:
  std::vector<Entry> entries_;
};

// A move is either firing a pending mempool tx by id or an adversary-crafted
// tx. Crafting is checked at construction: craft() yields nothing when the
// contract's adv_craftable predicate rejects the payload, so an ill-formed
// AdvCraft move cannot exist at semantics time.
template <class Tx>
class Move {
 public:
  enum class Kind { from_mempool = 0, adv_craft = 1 };

  static Move from_mempool(TxId id) { return Move(Kind::from_mempool, std::move(id), std::nullopt); }

  template <class Sys>
  static std::optional<Move> craft(const Sys& sys, Tx tx) {
    if (!sys.adv_craftable(tx)) return std::nullopt;
    return Move(Kind::adv_craft, TxId{}, std::move(tx));
  }

  Kind kind() const { return kind_; }
  bool is_adv() const { return kind_ == Kind::adv_craft; }
  const TxId& id() const { return id_; }
  const Tx& tx() const { return *tx_; }

  bool operator==(const Move& o) const {
    return kind_ == o.kind_ && id_ == o.id_ && tx_ == o.tx_;
  }
  // Lexicographic move order: mempool moves first (by id), then adversarial
  // moves by tx. This is the oracle's enumeration and tie-break order.
  bool operator<(const Move& o) const {
    if (kind_ != o.kind_) return kind_ < o.kind_;
    if (kind_ == Kind::from_mempool) return id_ < o.id_;
    return *tx_ < *o.tx_;
  }

 private:
  Move(Kind k, TxId id, std::optional<Tx> tx) : kind_(k), id_(std::move(id)), tx_(std::move(tx)) {}

  Kind kind_;
  TxId id_;
  std::optional<Tx> tx_;
};

// Contract state plus the adversary's signed net position. gain_state reads
// MEV off the delta component alone.
template <class S>
struct SysState {
  AdvWallet delta;
  S s;
};

template <class Tx>
using Trace = std::vector<Move<Tx>>;

template <class C>
concept ContractSystem = requires(const C& sys, const SysState<typename C::State>& st,
                                  const Move<typename C::Tx>& m, const typename C::Tx& tx,
                                  const typename C::State& s, const GridSpec& grid) {
  typename C::State;
  typename C::Tx;
  { sys.token_universe() } -> std::convertible_to<std::span<const TokenId>>;
  { sys.prices() } -> std::convertible_to<const PriceMap&>;
  { sys.adv_craftable(tx) } -> std::convertible_to<bool>;
  { sys.hon_tokens(s) } -> std::convertible_to<Wallet>;
  { sys.semantics(st, m) } -> std::convertible_to<std::optional<SysState<typename C::State>>>;
  { sys.move_grid(st, grid) } -> std::convertible_to<std::vector<Move<typename C::Tx>>>;
};

template <class Sys>
using StateOf = typename Sys::State;
template <class Sys>
using TxOf = typename Sys::Tx;
template <class Sys>
using MoveOf = Move<typename Sys::Tx>;
template <class Sys>
using SysStateOf = SysState<typename Sys::State>;
template <class Sys>
using TraceOf = Trace<typename Sys::Tx>;

template <ContractSystem Sys>
double token_value(const Sys& sys, const AdvWallet& w) {
  return token_value(sys.prices(), sys.token_universe(), w);
}

template <ContractSystem Sys>
double token_value(const Sys& sys, const Wallet& w) {
  return token_value(sys.prices(), sys.token_universe(), w);
}

// Adversary's gain between two states, in value units.
template <ContractSystem Sys>
double gain_state(const Sys& sys, const SysStateOf<Sys>& from, const SysStateOf<Sys>& to) {
  return token_value(sys, to.delta) - token_value(sys, from.delta);
}

template <ContractSystem Sys>
std::optional<SysStateOf<Sys>> apply_move(const Sys& sys, const SysStateOf<Sys>& st,
                                          const MoveOf<Sys>& m) {
  return sys.semantics(st, m);
}

// Left fold; a move whose semantics is undefined reverts, leaving the state
// untouched (mempool included).
template <ContractSystem Sys>
SysStateOf<Sys> apply_trace(const Sys& sys, SysStateOf<Sys> st, const TraceOf<Sys>& tr) {
  for (const MoveOf<Sys>& m : tr) {
    if (auto next = sys.semantics(st, m)) st = std::move(*next);
  }
  return st;
}

template <ContractSystem Sys>
double gain_trace(const Sys& sys, const SysStateOf<Sys>& st, const TraceOf<Sys>& tr) {
  return gain_state(sys, st, apply_trace(sys, st, tr));
}

// Per-token conservation: honest holdings plus adversary delta are constant
// across any defined move, up to kEpsToken.
template <ContractSystem Sys>
bool check_token_preservation(const Sys& sys, const SysStateOf<Sys>& st, const MoveOf<Sys>& m) {
  auto next = sys.semantics(st, m);
  if (!next) return true;
  const Wallet before_hon = sys.hon_tokens(st.s);
  const Wallet after_hon = sys.hon_tokens(next->s);
  for (TokenId t : sys.token_universe()) {
    const double before = before_hon.get(t) + st.delta.get(t);
    const double after = after_hon.get(t) + next->delta.get(t);
    if (std::abs(before - after) > kEpsToken) return false;
  }
  return true;
}

}  // namespace mevc

#endif
