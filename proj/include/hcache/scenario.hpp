#pragma once

// JSON scenario files for the command-line runner.
//
//   {
//     "K": 10, "N": 1000, "M": 100,
//     "Z": [10, 10, ...] | 10,
//     "F": 1.0,
//     "popularity": {"zipf": 1.0} | {"matrix": [[p(n=1,c=1), ...], ...]},
//     "scheme": "hybrid" | ["hybrid", "pure-coded", "pure-uncoded", "hetero"],
//     "placement": {"M1": 37, "N1": 352}
//                | {"groups": [{"sbs": [1,2], "M": 1, "contents": [1,2]}],
//                   "uncoded": [[3], [3], [4], [4]]},
//     "sweep": {"alpha": [..] | {"from": a, "to": b, "step": s},
//               "Z": [[..], ..], "M": [..] | {"from": a, "to": b, "step": s}},
//     "simulate": false, "slots": 2000, "seed": 1, "exact_oracle": false,
//     "hetero": {"max_groups": 2, "single_group": false,
//                "prune_contents": false, "work_budget": 2e8}
//   }
//
// Indices are 1-based in the file. The matrix has one row per content and
// one column per SBS. Unknown keys are errors.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcache/model.hpp"
#include "hcache/optimizer.hpp"
#include "hcache/simulator.hpp"

namespace hcache::cli {

enum class Mode { analyze, simulate, optimize, sweep };
enum class Scheme { hybrid, pure_coded, pure_uncoded, hetero };

const char* to_string(Mode mode);
const char* to_string(Scheme scheme);
std::optional<Mode> parse_mode(const std::string& text);
std::optional<Scheme> parse_scheme(const std::string& text);

/// Malformed JSON or a value of the wrong type.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input that violates a model constraint.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct PopularitySpec {
  std::optional<double> zipf_alpha;
  std::vector<std::vector<double>> columns;  // per SBS, when given as a matrix

  /// Builds the N x K matrix, with `alpha` replacing the Zipf exponent when
  /// set (sweeps).
  PopularityMatrix build(const SystemConfig& config,
                         std::optional<double> alpha = std::nullopt) const;
  /// "zipf" or "matrix".
  std::string label() const;
};

struct SweepSpec {
  std::vector<double> alphas;
  std::vector<std::vector<int>> users;
  std::vector<int> capacities;

  bool empty() const { return alphas.empty() && users.empty() && capacities.empty(); }
};

struct Scenario {
  SystemConfig config;
  PopularitySpec popularity;
  std::vector<Scheme> schemes{Scheme::hybrid};
  std::optional<Placement> placement;
  SweepSpec sweep;
  bool simulate = false;
  SimulationOptions simulation;
  bool exact_oracle = false;
  HeteroSearchOptions hetero;
};

/// Throws ParseError or ValidationError naming the offending field.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

/// Checks that `mode` can run on the scenario; throws ValidationError.
void check_mode(const Scenario& scenario, Mode mode);

}  // namespace hcache::cli
