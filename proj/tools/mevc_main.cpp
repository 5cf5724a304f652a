#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mevc/analysis.hpp"

using namespace mevc;

namespace {

struct CliState {
  std::string scenario_path;
  std::string out_path;
  std::string trace_literal;
  CmdOptions opts;
};

void add_common(CLI::App* cmd, CliState& c) {
  cmd->add_option("scenario", c.scenario_path, "scenario JSON file")->required();
  cmd->add_option("--out", c.out_path, "write the report here instead of stdout");
}

void add_grid(CLI::App* cmd, CliState& c) {
  cmd->add_option("--grid-step", c.opts.grid_step, "oracle grid amount step");
  cmd->add_option("--grid-max", c.opts.grid_max, "oracle grid amount cap");
  cmd->add_option("--depth", c.opts.depth, "oracle trace depth cap");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact MEV for contracts modelled as adversarial transition systems"};
  app.require_subcommand(1);
  CliState c;

  CLI::App* analyze =
      app.add_subcommand("analyze", "closed-form MEV claim, witness replay and verification");
  add_common(analyze, c);
  add_grid(analyze, c);
  analyze->add_option("--samples", c.opts.samples, "soundness samples per check");
  analyze->add_option("--seed", c.opts.seed, "sampler seed");
  analyze->add_option("--inject-guess-offset", c.opts.inject_guess_offset,
                      "self-test hook: shift the guess on empty-mempool states");

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force grid-restricted MEV search");
  add_common(oracle, c);
  add_grid(oracle, c);

  CLI::App* mevsup =
      app.add_subcommand("mevsup", "supremum estimation for a pending vmin = 0 swap");
  add_common(mevsup, c);
  mevsup->add_option("--x-schedule", c.opts.x_schedule, "comma-separated front-run sizes")
      ->delimiter(',');

  CLI::App* trace = app.add_subcommand("trace", "replay a trace literal move by move");
  add_common(trace, c);
  trace->add_option("moves", c.trace_literal, "e.g. \"push(10), mempool(a), push(10)\"")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Scenario sc = Scenario::load(c.scenario_path);
    CmdResult res;
    if (app.got_subcommand(analyze))
      res = run_analyze(sc, c.opts);
    else if (app.got_subcommand(oracle))
      res = run_oracle(sc, c.opts);
    else if (app.got_subcommand(mevsup))
      res = run_mevsup(sc, c.opts);
    else
      res = run_trace(sc, c.trace_literal, c.opts);

    const std::string text = res.doc.dump(2) + "\n";
    if (c.out_path.empty()) {
      std::fputs(text.c_str(), stdout);
    } else {
      std::ofstream out(c.out_path);
      if (!out) {
        std::cerr << "error: cannot write " << c.out_path << "\n";
        return kExitUsage;
      }
      out << text;
    }
    return res.exit_code;
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
