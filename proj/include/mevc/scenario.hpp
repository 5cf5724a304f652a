#ifndef MEVC_SCENARIO_HPP
#define MEVC_SCENARIO_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mevc/airdrop.hpp"
#include "mevc/amm.hpp"
#include "mevc/coinpusher.hpp"
#include "mevc/errors.hpp"
#include "mevc/grid.hpp"

namespace mevc {

enum class ContractKind { airdrop, coinpusher, amm };

std::string_view contract_kind_name(ContractKind k);

// One pending transaction as written in a scenario file. `tin` and `vmin`
// are meaningful for the amm kind only.
struct MempoolEntry {
  TxId id;
  std::string sender;
  double v = 0.0;
  TokenId tin = TokenId::T0;
  double vmin = 0.0;
};

// On-disk description of an initial state plus oracle and sampling knobs.
// Amounts are decimal strings in canonical form (raw JSON numbers are also
// accepted on input); echo() re-emits the canonical document, and loading
// the echo reproduces the scenario exactly.
struct Scenario {
  int schema_version = 1;
  ContractKind kind = ContractKind::airdrop;
  PriceMap prices;
  double bal = 0.0;        // airdrop / coinpusher pot
  double threshold = 0.0;  // coinpusher
  double r0 = 0.0;         // amm reserves
  double r1 = 0.0;
  Wallet wallet;
  std::vector<MempoolEntry> mempool;
  GridSpec oracle;
  std::uint64_t seed = 42;
  std::uint64_t samples = 2000;

  // Both throw ScenarioError with the offending field's path in the message.
  static Scenario from_json(const nlohmann::json& j);
  static Scenario load(const std::string& path);

  nlohmann::ordered_json echo() const;
};

// Shortest decimal string that parses back to exactly v.
std::string format_amount(double v);

AirdropSystem make_airdrop_system(const Scenario& sc);
SysState<AirdropSystem::State> make_airdrop_state(const Scenario& sc);
CoinPusherSystem make_coinpusher_system(const Scenario& sc);
CpState make_coinpusher_state(const Scenario& sc);
AmmSystem make_amm_system(const Scenario& sc);
AmmState make_amm_state(const Scenario& sc);

// Trace literals: comma- or semicolon-separated moves in the per-contract
// grammar, e.g. "push(10), mempool(a), push(10)" or "swap0(3), mempool(v),
// swap1(1, 0.5)". Adversarial moves round-trip through describe_move.
Trace<AirdropSystem::Tx> parse_airdrop_trace(const AirdropSystem& sys, std::string_view text);
CpTrace parse_coinpusher_trace(const CoinPusherSystem& sys, std::string_view text);
AmmTrace parse_amm_trace(const AmmSystem& sys, std::string_view text);

std::string describe_move(const Move<AirdropSystem::Tx>& m);
std::string describe_move(const Move<CoinPusherSystem::Tx>& m);
std::string describe_move(const Move<AmmSystem::Tx>& m);

nlohmann::ordered_json describe_state(const AirdropSystem& sys,
                                      const SysState<AirdropSystem::State>& st);
nlohmann::ordered_json describe_state(const CoinPusherSystem& sys, const CpState& st);
nlohmann::ordered_json describe_state(const AmmSystem& sys, const AmmState& st);

}  // namespace mevc

#endif
