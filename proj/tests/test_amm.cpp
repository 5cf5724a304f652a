#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mevc/amm.hpp"
#include "mevc/oracle.hpp"
#include "mevc/rng.hpp"

using namespace mevc;

namespace {

using Tx = AmmSystem::Tx;

AmmSystem sys49() { return AmmSystem{PriceMap{4.0, 9.0}}; }

AmmState state(double r0, double r1, Wallet wal = Wallet{3.0, 0.0}) {
  return AmmState{{}, {r0, r1, wal, {}}};
}

AmmState with_pending(AmmState st, const TxId& id, Tx tx) {
  st.s.mempool.insert(id, tx);
  return st;
}

const Tx kVictim{Participant::honest("A"), 3.0, TokenId::T0, 1.0};

}  // namespace

TEST_CASE("extractable value: examples and balance characterization") {
  const auto sys = sys49();
  CHECK(extractable_value(sys, state(6.0, 6.0).s) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(extractable_value(sys, state(12.0, 3.0).s) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(extractable_value(sys, state(9.0, 4.0).s) == doctest::Approx(0.0));
  CHECK(extractable_value(sys, state(1.0, 17.0).s) >= 0.0);
}

TEST_CASE("balanced reserves sit on the curve at the external rate") {
  const auto [b0, b1] = balanced_reserves(48.0, PriceMap{3.0, 1.0});
  CHECK(b0 == doctest::Approx(4.0));
  CHECK(b1 == doctest::Approx(12.0));

  const auto [c0, c1] = balanced_reserves(36.0, PriceMap{4.0, 9.0});
  CHECK(c0 == doctest::Approx(9.0));
  CHECK(c1 == doctest::Approx(4.0));
  CHECK(c0 * c1 == doctest::Approx(36.0));
}

TEST_CASE("arbitrage move rebalances and gains exactly the extractable value") {
  const auto sys = sys49();
  const AmmState st = state(6.0, 6.0);
  auto arb = arbitrage_move(sys, st.s);
  REQUIRE(arb);
  CHECK(arb->tx().tin == TokenId::T0);
  CHECK(arb->tx().v0 == doctest::Approx(3.0));
  auto next = sys.semantics(st, *arb);
  REQUIRE(next);
  CHECK(next->s.r0 == doctest::Approx(9.0));
  CHECK(next->s.r1 == doctest::Approx(4.0));
  CHECK(gain_state(sys, st, *next) == doctest::Approx(6.0).epsilon(1e-12));

  CHECK_FALSE(arbitrage_move(sys, state(9.0, 4.0).s));  // already balanced

  // other direction: T1 side under-priced
  auto arb1 = arbitrage_move(sys, state(18.0, 2.0).s);
  REQUIRE(arb1);
  CHECK(arb1->tx().tin == TokenId::T1);
}

TEST_CASE("tight state: the pending swap's output is exactly its floor") {
  const AmmState st = state(6.0, 6.0);
  const auto t1 = tight_state(st.s, kVictim);  // k 36, v0 3, vmin 1 -> (9, 4)
  CHECK(t1.r0 == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(t1.r1 == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(AmmSystem::swap_output(t1, kVictim) == doctest::Approx(1.0).epsilon(1e-12));

  const Tx loose{Participant::honest("A"), 3.0, TokenId::T0, 2.0};
  const auto t2 = tight_state(state(9.0, 4.0).s, loose);  // same curve -> (6, 6)
  CHECK(t2.r0 == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(t2.r1 == doctest::Approx(6.0).epsilon(1e-12));

  CHECK_THROWS_AS(tight_state(st.s, Tx{Participant::honest("A"), 3.0, TokenId::T0, 0.0}),
                  DegenerateTx);
}

TEST_CASE("tight state reproduces the floor across random curves") {
  Rng rng{20240817};
  for (int i = 0; i < 1000; ++i) {
    const double k = rng.log_uniform(1e-1, 1e6);
    const double skew = rng.log_uniform(0.05, 20.0);
    const double v0 = rng.log_uniform(1e-3, 1e3);
    const double vmin = rng.log_uniform(1e-3, 1e3);
    const TokenId tin = rng.chance(0.5) ? TokenId::T0 : TokenId::T1;
    AmmSystem::State s{std::sqrt(k) * skew, std::sqrt(k) / skew, {}, {}};
    const Tx tx{Participant::honest("A"), v0, tin, vmin};
    const auto tight = tight_state(s, tx);
    CHECK(AmmSystem::swap_output(tight, tx) ==
          doctest::Approx(vmin).epsilon(1e-9));
    CHECK(constant_product(tight) == doctest::Approx(k).epsilon(1e-9));
  }
}

TEST_CASE("move_to_state steers along the curve in either direction") {
  const auto sys = sys49();
  auto down = move_to_state(sys, state(9.0, 4.0).s, state(6.0, 6.0).s);
  REQUIRE(down);
  CHECK(down->tx().tin == TokenId::T1);
  CHECK(down->tx().v0 == doctest::Approx(2.0));

  auto up = move_to_state(sys, state(6.0, 6.0).s, state(9.0, 4.0).s);
  REQUIRE(up);
  CHECK(up->tx().tin == TokenId::T0);
  CHECK(up->tx().v0 == doctest::Approx(3.0));

  CHECK_FALSE(move_to_state(sys, state(6.0, 6.0).s, state(6.0, 6.0).s));
  CHECK_THROWS_AS(move_to_state(sys, state(6.0, 6.0).s, state(5.0, 5.0).s), ProductMismatch);
}

TEST_CASE("singleton guess: sandwich value when profitable and funded") {
  const auto sys = sys49();
  const AmmState st = with_pending(state(6.0, 6.0), "v", kVictim);
  CHECK(amm_guess_singleton(sys, st, "v") == doctest::Approx(9.0).epsilon(1e-9));
  CHECK(amm_guess(sys, st) == doctest::Approx(9.0).epsilon(1e-9));

  // not fundable: wal(T0) < v0
  const AmmState broke = with_pending(state(6.0, 6.0, Wallet{2.0, 0.0}), "v", kVictim);
  CHECK(amm_guess(sys, broke) == doctest::Approx(6.0));

  // not profitable: 3*4 < 2*9
  const Tx greedy{Participant::honest("A"), 3.0, TokenId::T0, 2.0};
  CHECK(amm_guess(sys, with_pending(state(6.0, 6.0), "v", greedy)) == doctest::Approx(6.0));

  // empty mempool falls back to plain arbitrage
  CHECK(amm_guess(sys, state(6.0, 6.0)) == doctest::Approx(6.0));

  CHECK_THROWS_AS(amm_guess_singleton(sys, state(6.0, 6.0), "v"), InvariantViolated);
}

TEST_CASE("front-run may run at a loss that the back-run more than recovers") {
  const auto sys = sys49();
  const Tx victim{Participant::honest("A"), 3.0, TokenId::T0, 0.5};
  const AmmState st = with_pending(state(9.0, 4.0), "v", victim);

  const auto tight = tight_state(st.s, victim);
  CHECK(tight.r0 > st.s.r0);  // adversary worsens the rate before the fill
  auto front = move_to_state(sys, st.s, tight);
  REQUIRE(front);
  const double front_gain = gain_state(sys, st, *sys.semantics(st, *front));
  CHECK(front_gain < 0.0);

  const double guess = amm_guess_singleton(sys, st, "v");
  CHECK(guess > extractable_value(sys, st.s));
  const auto plan = sandwich_plan(sys, st, "v");
  CHECK(gain_trace(sys, st, plan.to_trace()) == doctest::Approx(guess).epsilon(1e-9));
}

TEST_CASE("sandwich plan pins the tight and post-fill states") {
  const auto sys = sys49();
  const AmmState st = with_pending(state(6.0, 6.0), "v", kVictim);
  const auto plan = sandwich_plan(sys, st, "v");
  REQUIRE(plan.front_run);
  REQUIRE(plan.back_run);
  CHECK(plan.tight.r0 == doctest::Approx(9.0));
  CHECK(plan.tight.r1 == doctest::Approx(4.0));
  CHECK(plan.post_tx.r0 == doctest::Approx(12.0));
  CHECK(plan.post_tx.r1 == doctest::Approx(3.0));
  CHECK(plan.back_run->tx().tin == TokenId::T1);
  CHECK(plan.back_run->tx().v0 == doctest::Approx(1.0));
  CHECK(gain_trace(sys, st, plan.to_trace()) == doctest::Approx(9.0).epsilon(1e-9));

  // replaying the plan reproduces the snapshots
  auto mid = sys.semantics(st, *plan.front_run);
  REQUIRE(mid);
  CHECK(mid->s.r0 == doctest::Approx(plan.tight.r0).epsilon(1e-12));
  auto post = sys.semantics(*mid, plan.mempool_move);
  REQUIRE(post);
  CHECK(post->s.r1 == doctest::Approx(plan.post_tx.r1).epsilon(1e-12));
}

TEST_CASE("sandwich at the profitability boundary needs no back-run") {
  const auto sys = sys49();
  // v0 1, vmin 0.5 on curve 36: tight (8, 4.5), post-fill (9, 4) balanced
  const Tx tx{Participant::honest("A"), 1.0, TokenId::T0, 0.5};
  const AmmState st = with_pending(state(6.0, 6.0), "v", tx);
  const auto plan = sandwich_plan(sys, st, "v");
  CHECK(plan.post_tx.r0 == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(extractable_value(sys, plan.post_tx) == doctest::Approx(0.0));
  CHECK_FALSE(plan.back_run);
}

TEST_CASE("witness: sandwich when it pays, otherwise arbitrage only") {
  const auto sys = sys49();
  const AmmState rich = with_pending(state(6.0, 6.0), "v", kVictim);
  CHECK(gain_trace(sys, rich, amm_witness(sys, rich)) == doctest::Approx(9.0).epsilon(1e-9));

  const Tx greedy{Participant::honest("A"), 3.0, TokenId::T0, 2.0};
  const AmmState meh = with_pending(state(6.0, 6.0), "v", greedy);
  const auto tr = amm_witness(sys, meh);
  REQUIRE(tr.size() == 1);
  CHECK(tr[0].is_adv());
  CHECK(gain_trace(sys, meh, tr) == doctest::Approx(6.0).epsilon(1e-9));

  CHECK(amm_witness(sys, state(9.0, 4.0)).empty());
}

TEST_CASE("oracle confirms the sandwich optimum on a small grid") {
  const auto sys = sys49();
  const AmmState st = with_pending(state(6.0, 6.0), "v", kVictim);
  auto r = brute_force_mev(sys, st, GridSpec{1.0, 6.0, 3, true});
  CHECK(r.exhausted);
  CHECK(r.value == doctest::Approx(9.0).epsilon(1e-9));
  CHECK(gain_trace(sys, st, r.trace) == doctest::Approx(r.value).epsilon(1e-9));
}

TEST_CASE("mevsup family: structure, replay vs closed form, strict gap") {
  const auto sys = sys49();
  const Tx victim0{Participant::honest("A"), 3.0, TokenId::T0, 0.0};
  const AmmState st = with_pending(state(6.0, 6.0), "v", victim0);

  const double sup = mevsup_supremum(sys, st, victim0);
  CHECK(sup == doctest::Approx(18.0).epsilon(1e-12));  // extractable 6 + 3*4

  const auto tr12 = mevsup_trace_family(sys, st, "v", 12.0);
  REQUIRE(tr12.size() == 4);  // arb, front(x), fill, arb
  const double g12 = gain_trace(sys, st, tr12);
  CHECK(g12 == doctest::Approx(225.0 / 14.0).epsilon(1e-12));  // 18 - 972/(24*21)
  CHECK(mevsup_gain_closed_form(sys, st, victim0, 12.0) ==
        doctest::Approx(225.0 / 14.0).epsilon(1e-12));

  double prev = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double x = 0.7 * i * i;  // 20 sampled x, increasing
    const double g = gain_trace(sys, st, mevsup_trace_family(sys, st, "v", x));
    CHECK(g == doctest::Approx(mevsup_gain_closed_form(sys, st, victim0, x)).epsilon(1e-9));
    CHECK(g < sup - 1e-12);
    CHECK(g > prev);
    prev = g;
  }

  CHECK_THROWS_AS(mevsup_trace_family(sys, with_pending(state(6.0, 6.0), "v", kVictim), "v", 1.0),
                  InvariantViolated);  // vmin > 0: a maximizing trace exists instead
}

TEST_CASE("mevsup family from a balanced start needs no initial arbitrage") {
  const auto sys = sys49();
  const Tx victim0{Participant::honest("A"), 3.0, TokenId::T0, 0.0};
  const AmmState st = with_pending(state(9.0, 4.0), "v", victim0);
  const auto tr = mevsup_trace_family(sys, st, "v", 1.0);
  REQUIRE(tr.size() == 3);
  CHECK(gain_trace(sys, st, tr) == doctest::Approx(12.0 - 972.0 / 130.0).epsilon(1e-12));
  CHECK(mevsup_supremum(sys, st, victim0) == doctest::Approx(12.0));
}

TEST_CASE("swaps preserve the constant product") {
  const auto sys = sys49();
  Rng rng{7};
  AmmState st = state(6.0, 6.0);
  const double k = constant_product(st.s);
  for (int i = 0; i < 200; ++i) {
    const double v = rng.log_uniform(0.01, 50.0);
    const TokenId tin = rng.chance(0.5) ? TokenId::T0 : TokenId::T1;
    auto next = sys.semantics(st, *Move<Tx>::craft(sys, {Participant::adversary(), v, tin, 0.0}));
    REQUIRE(next);
    st = *next;
    CHECK(constant_product(st.s) == doctest::Approx(k).epsilon(1e-9));
  }
}
