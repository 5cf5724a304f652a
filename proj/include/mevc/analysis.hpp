#ifndef MEVC_ANALYSIS_HPP
#define MEVC_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mevc/scenario.hpp"

namespace mevc {

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;             // bad input, unsupported regime
inline constexpr int kExitChecksFailed = 3;      // analysis ran, a check failed
inline constexpr int kExitBudgetExhausted = 4;   // oracle hit its node budget

// Command-line overrides; anything unset falls back to the scenario file.
// node_budget additionally falls back to the MEVC_BUDGET environment
// variable before the built-in default.
struct CmdOptions {
  std::optional<double> grid_step;
  std::optional<double> grid_max;
  std::optional<int> depth;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> node_budget;
  double inject_guess_offset = 0.0;  // self-test hook: offsets the guess on empty-mempool states
  std::vector<double> x_schedule;    // mevsup only; empty means {1, 10, 100, 1000}
};

struct CmdResult {
  nlohmann::ordered_json doc;
  int exit_code = kExitOk;
};

// Full verification run: closed-form claim, witness replay, coherence,
// invariant and guess soundness, telescoping replay, oracle crosscheck.
CmdResult run_analyze(const Scenario& sc, const CmdOptions& opts = {});

// Brute-force grid oracle only.
CmdResult run_oracle(const Scenario& sc, const CmdOptions& opts = {});

// Supremum estimation for a pending amm swap with vmin = 0.
CmdResult run_mevsup(const Scenario& sc, const CmdOptions& opts = {});

// Replays a trace literal against the scenario, one row per move.
CmdResult run_trace(const Scenario& sc, std::string_view trace_literal,
                    const CmdOptions& opts = {});

}  // namespace mevc

#endif
