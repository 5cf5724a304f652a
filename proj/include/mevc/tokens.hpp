#ifndef MEVC_TOKENS_HPP
#define MEVC_TOKENS_HPP

#include <array>
#include <cassert>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace mevc {

// Token amounts and prices are doubles throughout. Comparisons against
// thresholds (slippage minima, wallet funds, win thresholds) tolerate
// kEpsToken of absolute dust; value-level assertions (gains vs guesses)
// tolerate kEpsValue.
using Amount = double;
inline constexpr double kEpsToken = 1e-9;
inline constexpr double kEpsValue = 1e-6;

// a >= b and a <= b up to token dust.
inline bool ge_tok(double a, double b) { return a >= b - kEpsToken; }
inline bool le_tok(double a, double b) { return a <= b + kEpsToken; }
inline bool eq_tok(double a, double b) { return a <= b + kEpsToken && b <= a + kEpsToken; }

// Per-contract token universes are {T0} or {T0, T1}.
enum class TokenId : int { T0 = 0, T1 = 1 };
inline constexpr std::size_t kMaxTokens = 2;

inline const char* token_name(TokenId t) { return t == TokenId::T0 ? "T0" : "T1"; }

inline TokenId other_token(TokenId t) { return t == TokenId::T0 ? TokenId::T1 : TokenId::T0; }

// Total map over the token universe; entries default to zero. Wallet entries
// stay non-negative (debits clamp sub-eps float dust at zero), AdvWallet is
// the adversary's signed net position.
class Wallet {
 public:
  Wallet() = default;
  Wallet(std::initializer_list<double> vs) {
    assert(vs.size() <= kMaxTokens);
    std::size_t i = 0;
    for (double v : vs) v_[i++] = v;
  }

  double get(TokenId t) const { return v_[static_cast<std::size_t>(t)]; }
  void set(TokenId t, double amt) {
    assert(amt >= 0.0);
    v_[static_cast<std::size_t>(t)] = amt;
  }
  void credit(TokenId t, double amt) { v_[static_cast<std::size_t>(t)] += amt; }
  // pre: caller checked funds up to kEpsToken.
  void debit(TokenId t, double amt) {
    double& x = v_[static_cast<std::size_t>(t)];
    x -= amt;
    if (x < 0.0) {
      assert(x >= -kEpsToken);
      x = 0.0;
    }
  }

  bool operator==(const Wallet&) const = default;

 private:
  std::array<double, kMaxTokens> v_{};
};

class AdvWallet {
 public:
  AdvWallet() = default;
  AdvWallet(std::initializer_list<double> vs) {
    assert(vs.size() <= kMaxTokens);
    std::size_t i = 0;
    for (double v : vs) v_[i++] = v;
  }

  double get(TokenId t) const { return v_[static_cast<std::size_t>(t)]; }
  void set(TokenId t, double amt) { v_[static_cast<std::size_t>(t)] = amt; }
  void add(TokenId t, double amt) { v_[static_cast<std::size_t>(t)] += amt; }

  bool operator==(const AdvWallet&) const = default;

 private:
  std::array<double, kMaxTokens> v_{};
};

class PriceMap {
 public:
  PriceMap() = default;
  PriceMap(std::initializer_list<double> ps) {
    assert(ps.size() <= kMaxTokens);
    std::size_t i = 0;
    for (double p : ps) {
      if (!(p > 0.0)) throw std::invalid_argument("token price must be > 0");
      v_[i++] = p;
    }
  }

  double get(TokenId t) const { return v_[static_cast<std::size_t>(t)]; }
  void set(TokenId t, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("token price must be > 0");
    v_[static_cast<std::size_t>(t)] = p;
  }

 private:
  std::array<double, kMaxTokens> v_{1.0, 1.0};
};

// Summation order is fixed by the universe, so equal inputs give bit-equal
// values on every run.
inline double token_value(const PriceMap& prices, std::span<const TokenId> universe,
                          const AdvWallet& w) {
  double v = 0.0;
  for (TokenId t : universe) v += prices.get(t) * w.get(t);
  return v;
}

inline double token_value(const PriceMap& prices, std::span<const TokenId> universe,
                          const Wallet& w) {
  double v = 0.0;
  for (TokenId t : universe) v += prices.get(t) * w.get(t);
  return v;
}

}  // namespace mevc

#endif
