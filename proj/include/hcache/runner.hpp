#pragma once

// Executes a parsed scenario and renders the results CSV.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hcache/scenario.hpp"

namespace hcache::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitTooLarge = 4;

/// One evaluated configuration. Every row carries its full input.
struct ResultRow {
  Mode mode = Mode::analyze;
  Scheme scheme = Scheme::hybrid;
  SystemConfig config;
  std::string popularity;  // "zipf" or "matrix"
  std::optional<double> alpha;
  Placement placement;
  std::size_t evaluated = 0;  // candidates scored by the optimizer
  LoadReport load;
  std::optional<SimulationReport> simulated;
  std::uint64_t seed = 0;
  std::optional<double> exact_r;
};

/// Runs `mode` on the scenario. Sweep rows come out ordered by
/// (alpha, Z, M, scheme) index regardless of execution order.
std::vector<ResultRow> execute(const Scenario& scenario, Mode mode,
                               Execution execution = Execution::parallel);

std::string csv_header();
std::string to_csv(const std::vector<ResultRow>& rows);

/// Placement in the CSV's text form: "M1=37;N1=352" or the group form.
std::string placement_text(const Placement& placement);

struct RunOptions {
  Mode mode = Mode::analyze;
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> slots;
  std::string out;  // results CSV; empty writes to `out` stream
  int threads = 0;  // 0 = OpenMP default, 1 = serial reference path
  bool exact_oracle = false;
};

/// Loads, validates and executes; writes the CSV plus `<out>.meta.json`.
/// Returns one of the kExit* codes; diagnostics go to `err`.
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace hcache::cli
