#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "mevc/airdrop.hpp"
#include "mevc/amm.hpp"
#include "mevc/coinpusher.hpp"
#include "mevc/oracle.hpp"

using namespace mevc;

namespace {

CpState cp_state(double threshold, double bal, double wal) {
  return CpState{{}, {threshold, bal, Wallet{wal}, {}}};
}

CpState cp_pending(double threshold, double bal, double wal,
                   std::initializer_list<std::pair<TxId, double>> txs) {
  CpState st = cp_state(threshold, bal, wal);
  for (const auto& [id, v] : txs)
    st.s.mempool.insert(id, {Participant::honest("A"), v});
  return st;
}

AmmState amm_sandwich_state() {
  AmmState st{{}, {6.0, 6.0, Wallet{3.0, 0.0}, {}}};
  st.s.mempool.insert("v", {Participant::honest("A"), 3.0, TokenId::T0, 1.0});
  return st;
}

}  // namespace

TEST_CASE("pruning changes neither the value nor the trace") {
  const OracleConfig unpruned{10'000'000, false};

  CoinPusherSystem cp{PriceMap{1.0}};
  const CpState st = cp_pending(10.0, 2.0, 7.0, {{"a", 3.0}, {"b", 4.0}});
  auto p = brute_force_mev(cp, st, GridSpec{1.0, 12.0, 4, true});
  auto u = brute_force_mev(cp, st, GridSpec{1.0, 12.0, 4, true}, unpruned);
  CHECK(p.exhausted);
  CHECK(u.exhausted);
  CHECK(p.value == u.value);
  CHECK(p.trace == u.trace);
  CHECK(p.nodes_expanded <= u.nodes_expanded);

  AmmSystem amm{PriceMap{4.0, 9.0}};
  const AmmState ast = amm_sandwich_state();
  auto ap = brute_force_mev(amm, ast, GridSpec{1.0, 6.0, 3, true});
  auto au = brute_force_mev(amm, ast, GridSpec{1.0, 6.0, 3, true}, unpruned);
  CHECK(ap.value == au.value);
  CHECK(ap.trace == au.trace);
  CHECK(ap.nodes_expanded <= au.nodes_expanded);

  AirdropSystem air{PriceMap{2.0}};
  const SysState<AirdropSystem::State> dst{{}, {7.0, Wallet{}, {}}};
  auto dp = brute_force_mev(air, dst, GridSpec{1.0, 10.0, 3, true});
  auto du = brute_force_mev(air, dst, GridSpec{1.0, 10.0, 3, true}, unpruned);
  CHECK(dp.value == du.value);
  CHECK(dp.trace == du.trace);
}

TEST_CASE("node budget cuts the search short, never inflates the value") {
  CoinPusherSystem cp{PriceMap{1.0}};
  const CpState st = cp_pending(100.0, 0.0, 1.0, {{"a", 1.0}});
  const GridSpec grid{1.0, 200.0, 4, true};
  // The pruned search finishes this grid in ~800 nodes; 200 is guaranteed
  // to cut it short.
  auto r = brute_force_mev(cp, st, grid, OracleConfig{200, true});
  CHECK_FALSE(r.exhausted);
  CHECK(r.nodes_expanded >= 200);
  CHECK(r.value <= 1.0 + 1e-9);  // true MEV of this state is 1

  auto r2 = brute_force_mev(cp, st, grid, OracleConfig{200, true});
  CHECK(r2.value == r.value);  // deterministic under the same budget
  CHECK(r2.trace == r.trace);

  auto full = brute_force_mev(cp, st, grid);
  CHECK(full.exhausted);
  CHECK(full.value == doctest::Approx(1.0));
}

TEST_CASE("ties prefer the shortest trace, then the first found") {
  AirdropSystem air{PriceMap{1.0}};
  const SysState<AirdropSystem::State> dst{{}, {5.0, Wallet{}, {}}};
  auto r = brute_force_mev(air, dst, GridSpec{1.0, 5.0, 3, true});
  CHECK(r.value == doctest::Approx(5.0));
  REQUIRE(r.trace.size() == 1);  // not 1+4 or 2+3
  CHECK(r.trace[0].tx().v == doctest::Approx(5.0));

  // push(5) tips a 5-pot at threshold 10 just as push(10) does; the smaller
  // amount sorts first and is found first at equal length
  CoinPusherSystem cp{PriceMap{1.0}};
  auto c = brute_force_mev(cp, cp_state(10.0, 5.0, 0.0), GridSpec{5.0, 10.0, 2, true});
  CHECK(c.value == doctest::Approx(5.0));
  REQUIRE(c.trace.size() == 1);
  CHECK(c.trace[0].tx().v == doctest::Approx(5.0));
}

TEST_CASE("empty and worthless states yield the empty trace") {
  CoinPusherSystem cp{PriceMap{1.0}};
  auto r = brute_force_mev(cp, cp_state(10.0, 0.0, 0.0), GridSpec{1.0, 20.0, 3, true});
  CHECK(r.value == 0.0);
  CHECK(r.trace.empty());
  CHECK(r.exhausted);
}

TEST_CASE("refining the grid or deepening the search never lowers the value") {
  CoinPusherSystem cp{PriceMap{1.0}};
  const CpState st = cp_pending(10.0, 2.0, 7.0, {{"a", 3.0}});
  const double coarse = brute_force_mev(cp, st, GridSpec{4.0, 12.0, 3, true}).value;
  const double fine = brute_force_mev(cp, st, GridSpec{2.0, 12.0, 3, true}).value;
  const double finer = brute_force_mev(cp, st, GridSpec{1.0, 12.0, 3, true}).value;
  CHECK(fine >= coarse);
  CHECK(finer >= fine);

  AmmSystem amm{PriceMap{4.0, 9.0}};
  const AmmState ast = amm_sandwich_state();
  const double a2 = brute_force_mev(amm, ast, GridSpec{2.0, 6.0, 3, true}).value;
  const double a1 = brute_force_mev(amm, ast, GridSpec{1.0, 6.0, 3, true}).value;
  CHECK(a1 >= a2);

  const double d2 = brute_force_mev(cp, st, GridSpec{1.0, 12.0, 2, true}).value;
  const double d3 = brute_force_mev(cp, st, GridSpec{1.0, 12.0, 3, true}).value;
  CHECK(d3 >= d2);
}

TEST_CASE("one extra level of depth adds nothing once the optimum is reachable") {
  AirdropSystem air{PriceMap{2.0}};
  const SysState<AirdropSystem::State> dst{{}, {7.5, Wallet{}, {}}};
  const double v1 = brute_force_mev(air, dst, GridSpec{1.0, 7.0, 1, true}).value;
  const double v2 = brute_force_mev(air, dst, GridSpec{1.0, 7.0, 2, true}).value;
  CHECK(v1 == doctest::Approx(15.0));
  CHECK(v2 - v1 <= kEpsValue);

  CoinPusherSystem cp{PriceMap{1.0}};
  const CpState st = cp_pending(10.0, 2.0, 7.0, {{"a", 3.0}});
  const double c3 = brute_force_mev(cp, st, GridSpec{1.0, 12.0, 3, true}).value;
  const double c4 = brute_force_mev(cp, st, GridSpec{1.0, 12.0, 4, true}).value;
  CHECK(c3 == doctest::Approx(5.0));
  CHECK(c4 - c3 <= kEpsValue);

  AmmSystem amm{PriceMap{4.0, 9.0}};
  const AmmState ast = amm_sandwich_state();
  const double m3 = brute_force_mev(amm, ast, GridSpec{1.0, 6.0, 3, true}).value;
  const double m4 = brute_force_mev(amm, ast, GridSpec{1.0, 6.0, 4, true}).value;
  CHECK(m3 == doctest::Approx(9.0));
  CHECK(m4 - m3 <= kEpsValue);
}

TEST_CASE("oracle value respects the admissible bound") {
  CoinPusherSystem cp{PriceMap{1.0}};
  const CpState st = cp_pending(10.0, 2.0, 7.0, {{"a", 3.0}, {"b", 4.0}});
  auto r = brute_force_mev(cp, st, GridSpec{1.0, 12.0, 5, true});
  CHECK(r.value <= admissible_bound(cp, st, 0.0) + 1e-12);
  CHECK(r.value == doctest::Approx(9.0));  // and here the bound is met exactly
}

TEST_CASE("interleavings: adversary-only when the mempool is empty") {
  CoinPusherSystem cp{PriceMap{1.0}};
  const CpState st = cp_state(10.0, 0.0, 0.0);
  std::vector<CpTrace> seen;
  for_each_mempool_interleaving(cp, st, GridSpec{1.0, 3.0, 2, true},
                                [&](const CpTrace& tr) { seen.push_back(tr); });
  CHECK(seen.size() > 1);
  CHECK(seen.front().empty());  // the empty prefix is always emitted
  for (const CpTrace& tr : seen) {
    CHECK(tr.size() <= 2);
    for (const auto& m : tr) CHECK(m.is_adv());
  }

  std::vector<CpTrace> again;
  for_each_mempool_interleaving(cp, st, GridSpec{1.0, 3.0, 2, true},
                                [&](const CpTrace& tr) { again.push_back(tr); });
  CHECK(seen == again);  // deterministic enumeration
}

TEST_CASE("interleavings: each pending tx appears at most once") {
  CoinPusherSystem cp{PriceMap{1.0}};
  const CpState st = cp_pending(10.0, 2.0, 7.0, {{"a", 3.0}});
  bool saw_sandwich_shape = false;
  for_each_mempool_interleaving(cp, st, GridSpec{2.0, 10.0, 3, true}, [&](const CpTrace& tr) {
    int pool_moves = 0;
    for (const auto& m : tr)
      if (!m.is_adv()) ++pool_moves;
    CHECK(pool_moves <= 1);
    if (tr.size() == 3 && tr[0].is_adv() && !tr[1].is_adv() && tr[2].is_adv())
      saw_sandwich_shape = true;
  });
  CHECK(saw_sandwich_shape);
}

TEST_CASE("interleaving max matches the unrestricted oracle") {
  CoinPusherSystem cp{PriceMap{1.0}};
  const CpState st = cp_pending(10.0, 2.0, 7.0, {{"a", 3.0}, {"b", 4.0}});
  const GridSpec grid{1.0, 12.0, 5, true};
  double best = 0.0;
  for_each_mempool_interleaving(cp, st, grid, [&](const CpTrace& tr) {
    best = std::max(best, gain_trace(cp, st, tr));
  });
  auto r = brute_force_mev(cp, st, grid);
  CHECK(r.exhausted);
  CHECK(best == doctest::Approx(r.value).epsilon(1e-12));
  CHECK(best == doctest::Approx(9.0));
}
