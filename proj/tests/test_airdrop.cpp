#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mevc/airdrop.hpp"
#include "mevc/oracle.hpp"

using namespace mevc;

namespace {

using Tx = AirdropSystem::Tx;
using St = SysState<AirdropSystem::State>;

St state(double bal, double wal = 0.0) { return St{{}, {bal, Wallet{wal}, {}}}; }

}  // namespace

TEST_CASE("drop requires v <= bal and credits the sender") {
  const AirdropSystem sys{PriceMap{1.0}};
  const St st = state(5.0);

  auto drained = sys.semantics(st, *Move<Tx>::craft(sys, {Participant::adversary(), 5.0}));
  REQUIRE(drained);
  CHECK(drained->s.bal == 0.0);
  CHECK(drained->delta.get(TokenId::T0) == 5.0);

  CHECK_FALSE(sys.semantics(st, *Move<Tx>::craft(sys, {Participant::adversary(), 5.1})));
}

TEST_CASE("honest mempool drop pays into wal") {
  const AirdropSystem sys{PriceMap{1.0}};
  St st = state(5.0);
  st.s.mempool.insert("d", {Participant::honest("A"), 2.0});

  auto next = sys.semantics(st, Move<Tx>::from_mempool("d"));
  REQUIRE(next);
  CHECK(next->s.bal == 3.0);
  CHECK(next->s.wal.get(TokenId::T0) == 2.0);
  CHECK(next->s.mempool.empty());
  CHECK(next->delta.get(TokenId::T0) == 0.0);
}

TEST_CASE("guess is price * bal and the witness drains it in one drop") {
  const AirdropSystem sys{PriceMap{2.0}};
  const St st = state(7.0);
  CHECK(airdrop_guess(sys, st) == 14.0);

  const auto witness = airdrop_witness(sys, st);
  REQUIRE(witness.size() == 1);
  CHECK(gain_trace(sys, st, witness) == doctest::Approx(14.0));

  CHECK(airdrop_witness(sys, state(0.0)).empty());
  CHECK(airdrop_guess(sys, state(0.0)) == 0.0);
}

TEST_CASE("oracle agrees with the closed form, mempool or not") {
  const AirdropSystem sys{PriceMap{2.0}};
  const GridSpec grid{1.0, 10.0, 2, true};

  auto r = brute_force_mev(sys, state(7.0), grid);
  CHECK(r.exhausted);
  CHECK(r.value == doctest::Approx(14.0));
  CHECK(r.trace.size() == 1);  // distinguished amount: drain exactly

  // pending honest drop cannot raise MEV: it only removes balance
  St st = state(7.0);
  st.s.mempool.insert("d", {Participant::honest("A"), 2.0});
  auto r2 = brute_force_mev(sys, st, grid);
  CHECK(r2.value == doctest::Approx(airdrop_guess(sys, st)));

  // deeper search cannot improve on draining
  GridSpec deeper = grid;
  deeper.max_depth = 3;
  CHECK(brute_force_mev(sys, state(7.0), deeper).value == doctest::Approx(14.0));
}

TEST_CASE("fractional balance is drained exactly via the distinguished amount") {
  const AirdropSystem sys{PriceMap{1.0}};
  auto r = brute_force_mev(sys, state(4.75), GridSpec{1.0, 10.0, 2, true});
  CHECK(r.value == doctest::Approx(4.75));
}
