#ifndef MEVC_SPECS_HPP
#define MEVC_SPECS_HPP

#include "mevc/airdrop.hpp"
#include "mevc/amm.hpp"
#include "mevc/coinpusher.hpp"
#include "mevc/verify.hpp"

namespace mevc {

// Closed-form characterizations of the three case-study contracts bundled
// for the verification harness. The lambdas copy the system (it is just a
// price map), so the spec outlives the argument.

inline GuessSpec<AirdropSystem> airdrop_guess_spec(const AirdropSystem& sys) {
  using St = SysState<AirdropSystem::State>;
  return {[](const St& st) { return airdrop_invariant(st); },
          [sys](const St& st) { return airdrop_guess(sys, st); },
          [sys](const St& st) { return airdrop_witness(sys, st); }};
}

inline GuessSpec<CoinPusherSystem> coinpusher_guess_spec(const CoinPusherSystem& sys) {
  return {[](const CpState& st) { return coinpusher_invariant(st); },
          [sys](const CpState& st) { return coinpusher_guess(sys, st); },
          [sys](const CpState& st) { return coinpusher_strategy(sys, st); }};
}

inline GuessSpec<AmmSystem> amm_guess_spec(const AmmSystem& sys) {
  return {[](const AmmState& st) { return amm_invariant(st); },
          [sys](const AmmState& st) { return amm_guess(sys, st); },
          [sys](const AmmState& st) { return amm_witness(sys, st); }};
}

}  // namespace mevc

#endif
