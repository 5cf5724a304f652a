#include "mevc/scenario.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <utility>

namespace mevc {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ScenarioError(path + ": " + what);
}

const json& require_field(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing required key '") + key + "'");
  return *it;
}

void expect_keys(const json& j, std::initializer_list<std::string_view> allowed,
                 const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (std::string_view k : allowed)
      if (it.key() == k) known = true;
    if (!known) fail(path, "unknown key '" + it.key() + "'");
  }
}

const json& expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_amount_str(const std::string& raw, const std::string& path) {
  const std::string s = trim(raw);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE)
    fail(path, "not a decimal amount: '" + s + "'");
  if (!std::isfinite(v)) fail(path, "amount must be finite");
  return v;
}

double parse_amount_field(const json& j, const std::string& path) {
  if (j.is_number()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "amount must be finite");
    return v;
  }
  if (j.is_string()) return parse_amount_str(j.get_ref<const std::string&>(), path);
  fail(path, "expected a decimal string or number");
}

std::uint64_t parse_count(const json& j, const std::string& path, std::uint64_t lo) {
  std::uint64_t v = 0;
  if (j.is_number_unsigned())
    v = j.get<std::uint64_t>();
  else if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
    v = static_cast<std::uint64_t>(j.get<std::int64_t>());
  else
    fail(path, "expected a non-negative integer");
  if (v < lo) fail(path, "must be >= " + std::to_string(lo));
  return v;
}

TokenId parse_token(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    if (s == "T0") return TokenId::T0;
    if (s == "T1") return TokenId::T1;
  }
  fail(path, "expected \"T0\" or \"T1\"");
}

// Tokens legal in wallets and prices for each contract kind.
bool kind_has_t1(ContractKind k) { return k == ContractKind::amm; }

void parse_wallet(const json& j, ContractKind kind, Wallet& out, const std::string& path) {
  expect_object(j, path);
  if (kind_has_t1(kind))
    expect_keys(j, {"T0", "T1"}, path);
  else
    expect_keys(j, {"T0"}, path);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const TokenId t = it.key() == "T0" ? TokenId::T0 : TokenId::T1;
    const double v = parse_amount_field(*it, path + "." + it.key());
    if (v < 0.0) fail(path + "." + it.key(), "wallet amounts must be >= 0");
    out.set(t, v);
  }
}

void parse_prices(const json& j, ContractKind kind, PriceMap& out, const std::string& path) {
  expect_object(j, path);
  if (kind_has_t1(kind))
    expect_keys(j, {"T0", "T1"}, path);
  else
    expect_keys(j, {"T0"}, path);
  for (auto it = j.begin(); it != j.end(); ++it) {
    const TokenId t = it.key() == "T0" ? TokenId::T0 : TokenId::T1;
    const double p = parse_amount_field(*it, path + "." + it.key());
    if (!(p > 0.0)) fail(path + "." + it.key(), "prices must be > 0");
    out.set(t, p);
  }
}

ContractKind parse_kind(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    if (s == "airdrop") return ContractKind::airdrop;
    if (s == "coinpusher") return ContractKind::coinpusher;
    if (s == "amm") return ContractKind::amm;
  }
  fail(path, "expected \"airdrop\", \"coinpusher\" or \"amm\"");
}

void parse_state(const json& j, Scenario& sc) {
  const std::string path = "scenario.state";
  expect_object(j, path);
  switch (sc.kind) {
    case ContractKind::airdrop: {
      expect_keys(j, {"bal", "wallet"}, path);
      sc.bal = parse_amount_field(require_field(j, "bal", path), path + ".bal");
      if (sc.bal < 0.0) fail(path + ".bal", "must be >= 0");
      break;
    }
    case ContractKind::coinpusher: {
      expect_keys(j, {"threshold", "bal", "wallet"}, path);
      sc.threshold =
          parse_amount_field(require_field(j, "threshold", path), path + ".threshold");
      if (!(sc.threshold > 0.0)) fail(path + ".threshold", "must be > 0");
      if (auto it = j.find("bal"); it != j.end()) {
        sc.bal = parse_amount_field(*it, path + ".bal");
        if (sc.bal < 0.0) fail(path + ".bal", "must be >= 0");
      }
      break;
    }
    case ContractKind::amm: {
      expect_keys(j, {"r0", "r1", "wallet"}, path);
      sc.r0 = parse_amount_field(require_field(j, "r0", path), path + ".r0");
      sc.r1 = parse_amount_field(require_field(j, "r1", path), path + ".r1");
      if (!(sc.r0 > 0.0)) fail(path + ".r0", "reserves must be > 0");
      if (!(sc.r1 > 0.0)) fail(path + ".r1", "reserves must be > 0");
      break;
    }
  }
  if (auto it = j.find("wallet"); it != j.end())
    parse_wallet(*it, sc.kind, sc.wallet, path + ".wallet");
}

void parse_mempool(const json& j, Scenario& sc) {
  const std::string path = "scenario.mempool";
  if (!j.is_array()) fail(path, "expected an array");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string epath = path + "[" + std::to_string(i) + "]";
    const json& e = expect_object(j[i], epath);
    if (sc.kind == ContractKind::amm)
      expect_keys(e, {"id", "sender", "v", "in", "vmin"}, epath);
    else
      expect_keys(e, {"id", "sender", "v"}, epath);

    MempoolEntry m;
    const json& id = require_field(e, "id", epath);
    if (!id.is_string() || id.get_ref<const std::string&>().empty())
      fail(epath + ".id", "expected a non-empty string");
    m.id = id.get<std::string>();
    for (const MempoolEntry& prev : sc.mempool)
      if (prev.id == m.id) fail(epath + ".id", "duplicate id '" + m.id + "'");

    const json& sender = require_field(e, "sender", epath);
    if (!sender.is_string() || sender.get_ref<const std::string&>().empty())
      fail(epath + ".sender", "expected a non-empty string");
    m.sender = sender.get<std::string>();
    if (m.sender == "Adv")
      fail(epath + ".sender", "the adversary crafts its moves, it never pre-commits to the pool");

    m.v = parse_amount_field(require_field(e, "v", epath), epath + ".v");
    if (!(m.v > 0.0)) fail(epath + ".v", "must be > 0");

    if (sc.kind == ContractKind::amm) {
      if (auto it = e.find("in"); it != e.end()) m.tin = parse_token(*it, epath + ".in");
      if (auto it = e.find("vmin"); it != e.end()) {
        m.vmin = parse_amount_field(*it, epath + ".vmin");
        if (m.vmin < 0.0) fail(epath + ".vmin", "must be >= 0");
      }
    }
    sc.mempool.push_back(std::move(m));
  }
}

void parse_oracle(const json& j, Scenario& sc) {
  const std::string path = "scenario.oracle";
  expect_object(j, path);
  expect_keys(j, {"grid_step", "grid_max", "max_depth"}, path);
  if (auto it = j.find("grid_step"); it != j.end())
    sc.oracle.amount_step = parse_amount_field(*it, path + ".grid_step");
  if (auto it = j.find("grid_max"); it != j.end())
    sc.oracle.amount_max = parse_amount_field(*it, path + ".grid_max");
  if (auto it = j.find("max_depth"); it != j.end()) {
    const std::uint64_t d = parse_count(*it, path + ".max_depth", 1);
    if (d > 16) fail(path + ".max_depth", "depths beyond 16 are not searchable, use <= 16");
    sc.oracle.max_depth = static_cast<int>(d);
  }
}

void parse_sampling(const json& j, Scenario& sc) {
  const std::string path = "scenario.sampling";
  expect_object(j, path);
  expect_keys(j, {"seed", "samples"}, path);
  if (auto it = j.find("seed"); it != j.end()) sc.seed = parse_count(*it, path + ".seed", 0);
  if (auto it = j.find("samples"); it != j.end())
    sc.samples = parse_count(*it, path + ".samples", 1);
}

ordered_json echo_mempool(const Scenario& sc) {
  ordered_json arr = ordered_json::array();
  for (const MempoolEntry& m : sc.mempool) {
    ordered_json e;
    e["id"] = m.id;
    e["sender"] = m.sender;
    e["v"] = format_amount(m.v);
    if (sc.kind == ContractKind::amm) {
      e["in"] = token_name(m.tin);
      e["vmin"] = format_amount(m.vmin);
    }
    arr.push_back(std::move(e));
  }
  return arr;
}

// ---- trace literal scanning ----

struct RawMove {
  std::string name;
  std::vector<std::string> args;
};

std::vector<RawMove> scan_trace(std::string_view text) {
  std::vector<RawMove> out;
  std::size_t i = 0;
  const auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  while (i < text.size()) {
    std::size_t start = i;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
      ++i;
    if (i == start) throw ScenarioError("trace: expected a move name at offset " + std::to_string(i));
    RawMove m;
    m.name = std::string(text.substr(start, i - start));
    skip_ws();
    if (i >= text.size() || text[i] != '(')
      throw ScenarioError("trace: expected '(' after '" + m.name + "'");
    ++i;
    std::size_t close = text.find(')', i);
    if (close == std::string_view::npos)
      throw ScenarioError("trace: missing ')' after '" + m.name + "('");
    std::string_view inner = text.substr(i, close - i);
    while (!inner.empty()) {
      const std::size_t comma = inner.find(',');
      m.args.push_back(trim(inner.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      inner.remove_prefix(comma + 1);
    }
    if (!m.args.empty() && m.args.back().empty())
      throw ScenarioError("trace: empty argument in '" + m.name + "(...)'");
    i = close + 1;
    skip_ws();
    if (i < text.size()) {
      if (text[i] != ',' && text[i] != ';')
        throw ScenarioError("trace: expected ',' or ';' between moves at offset " +
                            std::to_string(i));
      ++i;
      skip_ws();
      if (i >= text.size()) throw ScenarioError("trace: trailing separator");
    }
    out.push_back(std::move(m));
  }
  return out;
}

void expect_arity(const RawMove& m, std::size_t lo, std::size_t hi) {
  if (m.args.size() < lo || m.args.size() > hi)
    throw ScenarioError("trace: '" + m.name + "' takes " + std::to_string(lo) +
                        (hi > lo ? ".." + std::to_string(hi) : "") + " argument(s), got " +
                        std::to_string(m.args.size()));
}

[[noreturn]] void bad_move(const RawMove& m, const char* kind) {
  throw ScenarioError("trace: unknown move '" + m.name + "' for kind " + kind +
                      " (expected " + (std::string(kind) == "amm"
                                           ? "swap0/swap1/mempool"
                                           : std::string(kind) == "airdrop" ? "drop/mempool"
                                                                            : "push/mempool") +
                      ")");
}

}  // namespace

std::string_view contract_kind_name(ContractKind k) {
  switch (k) {
    case ContractKind::airdrop: return "airdrop";
    case ContractKind::coinpusher: return "coinpusher";
    case ContractKind::amm: return "amm";
  }
  return "unknown";
}

std::string format_amount(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

Scenario Scenario::from_json(const json& j) {
  expect_object(j, "scenario");
  expect_keys(j, {"schema_version", "kind", "prices", "state", "mempool", "oracle", "sampling"},
              "scenario");

  const json& sv = require_field(j, "schema_version", "scenario");
  if (!sv.is_number_integer() || sv.get<std::int64_t>() != 1)
    fail("scenario.schema_version", "this tool reads schema_version 1");

  Scenario sc;
  sc.kind = parse_kind(require_field(j, "kind", "scenario"), "scenario.kind");
  if (auto it = j.find("prices"); it != j.end())
    parse_prices(*it, sc.kind, sc.prices, "scenario.prices");
  parse_state(require_field(j, "state", "scenario"), sc);
  if (auto it = j.find("mempool"); it != j.end()) parse_mempool(*it, sc);
  if (auto it = j.find("oracle"); it != j.end()) parse_oracle(*it, sc);
  if (auto it = j.find("sampling"); it != j.end()) parse_sampling(*it, sc);

  try {
    sc.oracle.validate();
  } catch (const std::invalid_argument& e) {
    fail("scenario.oracle", e.what());
  }
  return sc;
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError(path + ": " + e.what());
  }
  return from_json(j);
}

ordered_json Scenario::echo() const {
  ordered_json j;
  j["schema_version"] = schema_version;
  j["kind"] = std::string(contract_kind_name(kind));
  ordered_json prices_j;
  prices_j["T0"] = format_amount(prices.get(TokenId::T0));
  if (kind_has_t1(kind)) prices_j["T1"] = format_amount(prices.get(TokenId::T1));
  j["prices"] = std::move(prices_j);

  ordered_json state_j;
  switch (kind) {
    case ContractKind::airdrop:
      state_j["bal"] = format_amount(bal);
      break;
    case ContractKind::coinpusher:
      state_j["threshold"] = format_amount(threshold);
      state_j["bal"] = format_amount(bal);
      break;
    case ContractKind::amm:
      state_j["r0"] = format_amount(r0);
      state_j["r1"] = format_amount(r1);
      break;
  }
  ordered_json wallet_j;
  wallet_j["T0"] = format_amount(wallet.get(TokenId::T0));
  if (kind_has_t1(kind)) wallet_j["T1"] = format_amount(wallet.get(TokenId::T1));
  state_j["wallet"] = std::move(wallet_j);
  j["state"] = std::move(state_j);

  j["mempool"] = echo_mempool(*this);
  ordered_json oracle_j;
  oracle_j["grid_step"] = format_amount(oracle.amount_step);
  oracle_j["grid_max"] = format_amount(oracle.amount_max);
  oracle_j["max_depth"] = oracle.max_depth;
  j["oracle"] = std::move(oracle_j);
  ordered_json sampling_j;
  sampling_j["seed"] = seed;
  sampling_j["samples"] = samples;
  j["sampling"] = std::move(sampling_j);
  return j;
}

namespace {

void expect_kind(const Scenario& sc, ContractKind k) {
  if (sc.kind != k)
    throw ScenarioError(std::string("scenario kind is ") +
                        std::string(contract_kind_name(sc.kind)) + ", this command path needs " +
                        std::string(contract_kind_name(k)));
}

}  // namespace

AirdropSystem make_airdrop_system(const Scenario& sc) {
  expect_kind(sc, ContractKind::airdrop);
  return AirdropSystem{sc.prices};
}

SysState<AirdropSystem::State> make_airdrop_state(const Scenario& sc) {
  expect_kind(sc, ContractKind::airdrop);
  SysState<AirdropSystem::State> st{{}, {sc.bal, sc.wallet, {}}};
  for (const MempoolEntry& m : sc.mempool)
    st.s.mempool.insert(m.id, {Participant::honest(m.sender), m.v});
  return st;
}

CoinPusherSystem make_coinpusher_system(const Scenario& sc) {
  expect_kind(sc, ContractKind::coinpusher);
  return CoinPusherSystem{sc.prices};
}

CpState make_coinpusher_state(const Scenario& sc) {
  expect_kind(sc, ContractKind::coinpusher);
  CpState st{{}, {sc.threshold, sc.bal, sc.wallet, {}}};
  for (const MempoolEntry& m : sc.mempool)
    st.s.mempool.insert(m.id, {Participant::honest(m.sender), m.v});
  return st;
}

AmmSystem make_amm_system(const Scenario& sc) {
  expect_kind(sc, ContractKind::amm);
  return AmmSystem{sc.prices};
}

AmmState make_amm_state(const Scenario& sc) {
  expect_kind(sc, ContractKind::amm);
  AmmState st{{}, {sc.r0, sc.r1, sc.wallet, {}}};
  for (const MempoolEntry& m : sc.mempool)
    st.s.mempool.insert(m.id, {Participant::honest(m.sender), m.v, m.tin, m.vmin});
  return st;
}

Trace<AirdropSystem::Tx> parse_airdrop_trace(const AirdropSystem& sys, std::string_view text) {
  using Tx = AirdropSystem::Tx;
  Trace<Tx> tr;
  for (const RawMove& m : scan_trace(text)) {
    if (m.name == "mempool") {
      expect_arity(m, 1, 1);
      tr.push_back(Move<Tx>::from_mempool(m.args[0]));
    } else if (m.name == "drop") {
      expect_arity(m, 1, 1);
      auto mv = Move<Tx>::craft(
          sys, Tx{Participant::adversary(), parse_amount_str(m.args[0], "trace.drop")});
      if (!mv) throw ScenarioError("trace: drop amount must be > 0");
      tr.push_back(*mv);
    } else {
      bad_move(m, "airdrop");
    }
  }
  return tr;
}

CpTrace parse_coinpusher_trace(const CoinPusherSystem& sys, std::string_view text) {
  using Tx = CoinPusherSystem::Tx;
  CpTrace tr;
  for (const RawMove& m : scan_trace(text)) {
    if (m.name == "mempool") {
      expect_arity(m, 1, 1);
      tr.push_back(Move<Tx>::from_mempool(m.args[0]));
    } else if (m.name == "push") {
      expect_arity(m, 1, 1);
      auto mv = Move<Tx>::craft(
          sys, Tx{Participant::adversary(), parse_amount_str(m.args[0], "trace.push")});
      if (!mv) throw ScenarioError("trace: push amount must be > 0");
      tr.push_back(*mv);
    } else {
      bad_move(m, "coinpusher");
    }
  }
  return tr;
}

AmmTrace parse_amm_trace(const AmmSystem& sys, std::string_view text) {
  using Tx = AmmSystem::Tx;
  AmmTrace tr;
  for (const RawMove& m : scan_trace(text)) {
    if (m.name == "mempool") {
      expect_arity(m, 1, 1);
      tr.push_back(Move<Tx>::from_mempool(m.args[0]));
    } else if (m.name == "swap0" || m.name == "swap1") {
      expect_arity(m, 1, 2);
      const TokenId tin = m.name == "swap0" ? TokenId::T0 : TokenId::T1;
      const double v = parse_amount_str(m.args[0], "trace." + m.name);
      const double vmin =
          m.args.size() == 2 ? parse_amount_str(m.args[1], "trace." + m.name + ".vmin") : 0.0;
      auto mv = Move<Tx>::craft(sys, Tx{Participant::adversary(), v, tin, vmin});
      if (!mv) throw ScenarioError("trace: swap needs v > 0 and vmin >= 0");
      tr.push_back(*mv);
    } else {
      bad_move(m, "amm");
    }
  }
  return tr;
}

std::string describe_move(const Move<AirdropSystem::Tx>& m) {
  if (m.kind() == Move<AirdropSystem::Tx>::Kind::from_mempool) return "mempool(" + m.id() + ")";
  return "drop(" + format_amount(m.tx().v) + ")";
}

std::string describe_move(const Move<CoinPusherSystem::Tx>& m) {
  if (m.kind() == Move<CoinPusherSystem::Tx>::Kind::from_mempool) return "mempool(" + m.id() + ")";
  return "push(" + format_amount(m.tx().v) + ")";
}

std::string describe_move(const Move<AmmSystem::Tx>& m) {
  if (m.kind() == Move<AmmSystem::Tx>::Kind::from_mempool) return "mempool(" + m.id() + ")";
  const AmmSystem::Tx& tx = m.tx();
  std::string s = tx.tin == TokenId::T0 ? "swap0(" : "swap1(";
  s += format_amount(tx.v0);
  if (tx.vmin != 0.0) s += ", " + format_amount(tx.vmin);
  return s + ")";
}

namespace {

template <class Sys>
ordered_json describe_common(const Sys& sys, const SysStateOf<Sys>& st) {
  ordered_json j;
  ordered_json delta;
  for (TokenId t : sys.token_universe()) delta[token_name(t)] = format_amount(st.delta.get(t));
  j["adv_delta"] = std::move(delta);
  ordered_json pool = ordered_json::array();
  for (const auto& [id, tx] : st.s.mempool.entries()) pool.push_back(id);
  j["mempool"] = std::move(pool);
  return j;
}

}  // namespace

ordered_json describe_state(const AirdropSystem& sys, const SysState<AirdropSystem::State>& st) {
  ordered_json j;
  j["bal"] = format_amount(st.s.bal);
  j["wallet"] = ordered_json{{"T0", format_amount(st.s.wal.get(TokenId::T0))}};
  j.update(describe_common(sys, st));
  return j;
}

ordered_json describe_state(const CoinPusherSystem& sys, const CpState& st) {
  ordered_json j;
  j["threshold"] = format_amount(st.s.threshold);
  j["bal"] = format_amount(st.s.bal);
  j["wallet"] = ordered_json{{"T0", format_amount(st.s.wal.get(TokenId::T0))}};
  j.update(describe_common(sys, st));
  return j;
}

ordered_json describe_state(const AmmSystem& sys, const AmmState& st) {
  ordered_json j;
  j["r0"] = format_amount(st.s.r0);
  j["r1"] = format_amount(st.s.r1);
  j["wallet"] = ordered_json{{"T0", format_amount(st.s.wal.get(TokenId::T0))},
                             {"T1", format_amount(st.s.wal.get(TokenId::T1))}};
  j.update(describe_common(sys, st));
  return j;
}

}  // namespace mevc
