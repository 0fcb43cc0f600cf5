#include <iostream>

#include <CLI11.hpp>

#include "hcache/runner.hpp"
#include "hcache/walkthrough.hpp"

using namespace hcache::cli;

int main(int argc, char** argv) {
  CLI::App app{"Hybrid coded/uncoded caching: analysis, optimization and simulation"};
  app.require_subcommand(1);

  RunOptions options;
  std::uint64_t seed = 0;
  std::size_t slots = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", options.scenario_path, "Scenario JSON file")->required();
    sub->add_option("--seed", seed, "Override the scenario seed");
    sub->add_option("--slots", slots, "Override the simulated slot count");
    sub->add_option("--out", options.out, "Results CSV path (stdout when omitted)");
    sub->add_option("--threads", options.threads, "OpenMP threads; 1 runs the serial path");
    sub->add_flag("--exact-oracle", options.exact_oracle,
                  "Add the exhaustive expected load (tiny instances only)");
  };
  struct Sub {
    const char* name;
    const char* help;
    Mode mode;
  };
  const Sub subs[] = {
      {"analyze", "Closed-form load of the scenario's placement", Mode::analyze},
      {"simulate", "Closed form plus Monte Carlo for the scenario's placement", Mode::simulate},
      {"optimize", "Best placement per scheme", Mode::optimize},
      {"sweep", "Optimize over the scenario's sweep axes", Mode::sweep},
  };
  std::vector<std::pair<CLI::App*, Mode>> run_subs;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_common(sub);
    run_subs.emplace_back(sub, s.mode);
  }

  std::string demands = kWalkthroughDemands;
  auto* fig1 = app.add_subcommand("fig1", "Narrated delivery slot of a three-SBS example");
  fig1->add_option("--demands", demands, "Requests per SBS as letters, e.g. ADEFJBDK,CGHJ,AIZAIL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  if (fig1->parsed()) {
    try {
      std::cout << walkthrough(demands).report;
      return kExitOk;
    } catch (const ParseError& e) {
      std::cerr << "parse error: " << e.what() << '\n';
      return kExitParse;
    }
  }
  for (const auto& [sub, mode] : run_subs) {
    if (!sub->parsed()) continue;
    options.mode = mode;
    if (sub->count("--seed")) options.seed = seed;
    if (sub->count("--slots")) options.slots = slots;
    return run(options, std::cout, std::cerr);
  }
  return kExitParse;
}
