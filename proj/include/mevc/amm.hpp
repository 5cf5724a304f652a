#ifndef MEVC_AMM_HPP
#define MEVC_AMM_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mevc/errors.hpp"
#include "mevc/system.hpp"

namespace mevc {

// Constant-product AMM over {T0, T1}. swap(v, tin, vmin) pays v of tin into
// the reserves and returns x = v * r_out / (r_in + v) of the other token,
// reverting when x < vmin. The product r0 * r1 is preserved exactly by this
// formula: (r_in + v) * (r_out - x) = r_in * r_out.
class AmmSystem {
 public:
  struct Tx {
    Participant sender;
    double v0;      // input amount, > 0
    TokenId tin;    // input token
    double vmin;    // slippage floor on the output, >= 0
    auto operator<=>(const Tx&) const = default;
  };

  struct State {
    double r0 = 0.0;  // T0 reserve, > 0
    double r1 = 0.0;  // T1 reserve, > 0
    Wallet wal;
    Mempool<Tx> mempool;

    double reserve(TokenId t) const { return t == TokenId::T0 ? r0 : r1; }
    double& reserve(TokenId t) { return t == TokenId::T0 ? r0 : r1; }
  };

  explicit AmmSystem(PriceMap prices) : prices_(std::move(prices)) {}

  std::span<const TokenId> token_universe() const {
    static constexpr TokenId u[] = {TokenId::T0, TokenId::T1};
    return u;
  }
  const PriceMap& prices() const { return prices_; }

  bool adv_craftable(const Tx& tx) const {
    return tx.sender.is_adv() && tx.v0 > 0.0 && tx.vmin >= 0.0;
  }

  Wallet hon_tokens(const State& s) const {
    Wallet w = s.wal;
    w.credit(TokenId::T0, s.r0);
    w.credit(TokenId::T1, s.r1);
    return w;
  }

  static double swap_output(const State& s, const Tx& tx) {
    const double rin = s.reserve(tx.tin);
    const double rout = s.reserve(other_token(tx.tin));
    return tx.v0 * rout / (rin + tx.v0);
  }

  std::optional<SysState<State>> semantics(const SysState<State>& st, const Move<Tx>& m) const {
    const bool from_pool = m.kind() == Move<Tx>::Kind::from_mempool;
    const Tx* tx = from_pool ? st.s.mempool.find(m.id()) : &m.tx();
    if (tx == nullptr || !(tx->v0 > 0.0)) return std::nullopt;
    const bool adv = tx->sender.is_adv();
    if (!adv && !le_tok(tx->v0, st.s.wal.get(tx->tin))) return std::nullopt;
    const double x = swap_output(st.s, *tx);
    if (!ge_tok(x, tx->vmin)) return std::nullopt;

    const TokenId tout = other_token(tx->tin);
    SysState<State> next = st;
    next.s.reserve(tx->tin) += tx->v0;
    next.s.reserve(tout) -= x;
    if (adv) {
      next.delta.add(tx->tin, -tx->v0);
      next.delta.add(tout, x);
    } else {
      next.s.wal.debit(tx->tin, tx->v0);
      next.s.wal.credit(tout, x);
    }
    if (from_pool) next.s.mempool.erase(m.id());
    return next;
  }

  std::vector<Move<Tx>> move_grid(const SysState<State>& st, const GridSpec& grid) const;

 private:
  PriceMap prices_;
};

using AmmState = SysState<AmmSystem::State>;
using AmmTrace = Trace<AmmSystem::Tx>;

inline double constant_product(const AmmSystem::State& s) { return s.r0 * s.r1; }

// Value the adversary can pull out of the reserves alone by rebalancing:
// (sqrt(p0 r0) - sqrt(p1 r1))^2. Zero exactly when p0 r0 = p1 r1.
inline double extractable_value(const PriceMap& prices, double r0, double r1) {
  const double d = std::sqrt(prices.get(TokenId::T0) * r0) - std::sqrt(prices.get(TokenId::T1) * r1);
  return d * d;
}

inline double extractable_value(const AmmSystem& sys, const AmmSystem::State& s) {
  return extractable_value(sys.prices(), s.r0, s.r1);
}

// Reserves on the curve r0 r1 = k where the marginal rate matches external
// prices: p0 b0 = p1 b1 = sqrt(p0 p1 k).
inline std::pair<double, double> balanced_reserves(double k, const PriceMap& prices) {
  const double p0 = prices.get(TokenId::T0), p1 = prices.get(TokenId::T1);
  return {std::sqrt(k * p1 / p0), std::sqrt(k * p0 / p1)};
}

// Swap moving the reserves to a given target on the same curve. Returns
// nothing when already there; the target's product must match within
// tolerance, scaled by k.
inline std::optional<Move<AmmSystem::Tx>> move_to_reserves(const AmmSystem& sys,
                                                           const AmmSystem::State& from,
                                                           double t0, double t1) {
  const double k = constant_product(from);
  if (std::abs(t0 * t1 - k) > kEpsToken * std::max(1.0, k))
    throw ProductMismatch("move_to_reserves: target is off the constant-product curve");
  using Tx = AmmSystem::Tx;
  if (t0 - from.r0 > kEpsToken)
    return Move<Tx>::craft(sys, Tx{Participant::adversary(), t0 - from.r0, TokenId::T0, 0.0});
  if (t1 - from.r1 > kEpsToken)
    return Move<Tx>::craft(sys, Tx{Participant::adversary(), t1 - from.r1, TokenId::T1, 0.0});
  return std::nullopt;
}

inline std::optional<Move<AmmSystem::Tx>> move_to_state(const AmmSystem& sys,
                                                        const AmmSystem::State& from,
                                                        const AmmSystem::State& target) {
  return move_to_reserves(sys, from, target.r0, target.r1);
}

// Adversarial swap rebalancing the pool; its replayed gain is exactly
// extractable_value(s). Nothing to do when already balanced.
inline std::optional<Move<AmmSystem::Tx>> arbitrage_move(const AmmSystem& sys,
                                                         const AmmSystem::State& s) {
  const auto [b0, b1] = balanced_reserves(constant_product(s), sys.prices());
  return move_to_reserves(sys, s, b0, b1);
}

// State on the same curve where tx's output is exactly its slippage floor:
// the positive root of vmin r^2 + vmin v0 r - k v0 = 0 for the input-side
// reserve. Undefined for vmin = 0 (the output can approach but never reach 0).
inline AmmSystem::State tight_state(const AmmSystem::State& s, const AmmSystem::Tx& tx) {
  if (!(tx.vmin > 0.0)) throw DegenerateTx("tight_state: tx has vmin = 0");
  const double k = constant_product(s);
  const double disc = tx.vmin * tx.vmin * tx.v0 * tx.v0 + 4.0 * k * tx.v0 * tx.vmin;
  const double rin = (-tx.vmin * tx.v0 + std::sqrt(disc)) / (2.0 * tx.vmin);
  AmmSystem::State t = s;
  t.reserve(tx.tin) = rin;
  t.reserve(other_token(tx.tin)) = k / rin;
  return t;
}

inline bool amm_invariant(const AmmState& st) {
  const auto& entries = st.s.mempool.entries();
  if (entries.empty()) return true;
  if (entries.size() != 1) return false;
  const AmmSystem::Tx& tx = entries[0].second;
  return !tx.sender.is_adv() && tx.vmin > 0.0;
}

inline bool amm_tx_executable(const AmmState& st, const AmmSystem::Tx& tx) {
  return le_tok(tx.v0, st.s.wal.get(tx.tin));
}

// Worth sandwiching iff the victim pays more value in than the floor it
// insists on getting out.
inline bool amm_tx_profitable(const AmmSystem& sys, const AmmSystem::Tx& tx) {
  return tx.v0 * sys.prices().get(tx.tin) > tx.vmin * sys.prices().get(other_token(tx.tin));
}

// MEV with a single pending swap. Profitable and executable: front-run to
// the tight state (possibly at a temporary loss), let the victim fill at its
// floor, and the post-tx reserves' extractable value is banked by the
// back-run. Otherwise the pending swap adds nothing over plain arbitrage.
// The post-tx state is obtained by executing the tx, not by substitution.
inline double amm_guess_singleton(const AmmSystem& sys, const AmmState& st, const TxId& id) {
  const AmmSystem::Tx* tx = st.s.mempool.find(id);
  if (st.s.mempool.size() != 1 || tx == nullptr || tx->sender.is_adv() || !(tx->vmin > 0.0))
    throw InvariantViolated("amm_guess_singleton: need a singleton honest mempool with vmin > 0");
  if (!amm_tx_executable(st, *tx) || !amm_tx_profitable(sys, *tx))
    return extractable_value(sys, st.s);

  const AmmSystem::State tight = tight_state(st.s, *tx);
  AmmState at_tight = st;
  double front_gain = 0.0;
  if (auto front = move_to_state(sys, st.s, tight)) {
    auto next = sys.semantics(st, *front);
    at_tight = *next;
    front_gain = gain_state(sys, st, at_tight);
  }
  auto post = sys.semantics(at_tight, Move<AmmSystem::Tx>::from_mempool(id));
  if (!post) throw Error("amm_guess_singleton: pending swap reverted at its tight state");
  return std::max(0.0, front_gain + extractable_value(sys, post->s));
}

inline double amm_guess(const AmmSystem& sys, const AmmState& st) {
  if (!amm_invariant(st)) throw InvariantViolated("amm_guess: invariant violated");
  if (st.s.mempool.empty()) return extractable_value(sys, st.s);
  return amm_guess_singleton(sys, st, st.s.mempool.entries()[0].first);
}

// Front-run / victim / back-run bundle together with the states it pins.
struct SandwichPlan {
  std::optional<Move<AmmSystem::Tx>> front_run;
  Move<AmmSystem::Tx> mempool_move;
  std::optional<Move<AmmSystem::Tx>> back_run;
  AmmSystem::State tight;    // reserves the front-run steers to
  AmmSystem::State post_tx;  // reserves after the victim fills

  AmmTrace to_trace() const {
    AmmTrace tr;
    if (front_run) tr.push_back(*front_run);
    tr.push_back(mempool_move);
    if (back_run) tr.push_back(*back_run);
    return tr;
  }
};

inline SandwichPlan sandwich_plan(const AmmSystem& sys, const AmmState& st, const TxId& id) {
  const AmmSystem::Tx* tx = st.s.mempool.find(id);
  if (st.s.mempool.size() != 1 || tx == nullptr || tx->sender.is_adv() || !(tx->vmin > 0.0))
    throw InvariantViolated("sandwich_plan: need a singleton honest mempool with vmin > 0");
  if (!amm_tx_executable(st, *tx))
    throw InvariantViolated("sandwich_plan: pending swap is not executable");

  SandwichPlan plan{std::nullopt, Move<AmmSystem::Tx>::from_mempool(id), std::nullopt,
                    tight_state(st.s, *tx), {}};
  AmmState at_tight = st;
  plan.front_run = move_to_state(sys, st.s, plan.tight);
  if (plan.front_run) at_tight = *sys.semantics(st, *plan.front_run);
  auto post = sys.semantics(at_tight, plan.mempool_move);
  if (!post) throw Error("sandwich_plan: pending swap reverted at its tight state");
  plan.post_tx = post->s;
  plan.back_run = arbitrage_move(sys, post->s);
  return plan;
}

// When the pending swap carries no slippage floor no maximal strategy exists:
// over-front-running by x loses only O(1/x). tr(x) rebalances, front-runs by
// x in the victim's direction, lets the victim fill, and rebalances again.
inline AmmTrace mevsup_trace_family(const AmmSystem& sys, const AmmState& st, const TxId& id,
                                    double x) {
  const AmmSystem::Tx* tx = st.s.mempool.find(id);
  if (tx == nullptr || tx->sender.is_adv()) throw InvariantViolated("mevsup: need a pending honest swap");
  if (tx->vmin != 0.0) throw InvariantViolated("mevsup: pending swap must have vmin = 0");
  if (!amm_tx_executable(st, *tx)) throw InvariantViolated("mevsup: pending swap is not executable");
  if (!(x > 0.0)) throw std::invalid_argument("mevsup: x must be > 0");

  using Tx = AmmSystem::Tx;
  AmmTrace tr;
  AmmState cur = st;
  if (auto arb = arbitrage_move(sys, cur.s)) {
    tr.push_back(*arb);
    cur = *sys.semantics(cur, *arb);
  }
  auto front = *Move<Tx>::craft(sys, Tx{Participant::adversary(), x, tx->tin, 0.0});
  tr.push_back(front);
  cur = *sys.semantics(cur, front);
  tr.push_back(Move<Tx>::from_mempool(id));
  cur = *sys.semantics(cur, tr.back());
  if (auto arb = arbitrage_move(sys, cur.s)) tr.push_back(*arb);
  return tr;
}

// Least upper bound of the family's gains: extractable(st) + v0 * p_in.
inline double mevsup_supremum(const AmmSystem& sys, const AmmState& st, const AmmSystem::Tx& tx) {
  return extractable_value(sys, st.s) + tx.v0 * sys.prices().get(tx.tin);
}

// Closed form for gain(tr(x)), writing bin for the balanced input-side
// reserve and k for the product:
//   extractable(st) + p_in v0 - p_out k v0 / ((bin + x + v0)(bin + x)).
inline double mevsup_gain_closed_form(const AmmSystem& sys, const AmmState& st,
                                      const AmmSystem::Tx& tx, double x) {
  const double k = constant_product(st.s);
  const double pin = sys.prices().get(tx.tin);
  const double pout = sys.prices().get(other_token(tx.tin));
  const double bin = std::sqrt(k * pout / pin);
  return extractable_value(sys, st.s) + pin * tx.v0 -
         pout * k * tx.v0 / ((bin + x + tx.v0) * (bin + x));
}

// Witness for the one-or-less guess: the sandwich when it pays, otherwise
// plain arbitrage (empty when already balanced).
inline AmmTrace amm_witness(const AmmSystem& sys, const AmmState& st) {
  if (!amm_invariant(st)) throw InvariantViolated("amm_witness: invariant violated");
  if (!st.s.mempool.empty()) {
    const auto& [id, tx] = st.s.mempool.entries()[0];
    if (amm_tx_executable(st, tx) && amm_tx_profitable(sys, tx))
      return sandwich_plan(sys, st, id).to_trace();
  }
  AmmTrace tr;
  if (auto arb = arbitrage_move(sys, st.s)) tr.push_back(*arb);
  return tr;
}

inline std::vector<Move<AmmSystem::Tx>> AmmSystem::move_grid(const SysState<State>& st,
                                                             const GridSpec& grid) const {
  using MoveT = Move<Tx>;
  std::vector<MoveT> out;
  if (grid.include_mempool)
    for (const auto& [id, tx] : st.s.mempool.entries()) out.push_back(MoveT::from_mempool(id));
  for (double a : grid_amounts(grid)) {
    out.push_back(*MoveT::craft(*this, Tx{Participant::adversary(), a, TokenId::T0, 0.0}));
    out.push_back(*MoveT::craft(*this, Tx{Participant::adversary(), a, TokenId::T1, 0.0}));
  }
  // Distinguished moves: rebalance exactly, and front-run each pending swap
  // to its tight state.
  const AmmSystem& sys = *this;
  if (auto arb = arbitrage_move(sys, st.s)) out.push_back(*arb);
  for (const auto& [id, tx] : st.s.mempool.entries()) {
    if (!(tx.vmin > 0.0)) continue;
    if (auto front = move_to_state(sys, st.s, tight_state(st.s, tx))) out.push_back(*front);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace mevc

#endif
