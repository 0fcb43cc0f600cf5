#pragma once

// Brute-force references for the recursions and the delivery model. They
// enumerate outcomes directly and share no code with the dynamic programs
// they check. Only tiny instances are accepted.

#include <span>
#include <vector>

#include "hcache/model.hpp"

namespace hcache::oracle {

/// probs[v] = Pr{value = v}.
struct ExactDistribution {
  std::vector<double> probs;
};

/// Distinct coded contents among `users` i.i.d. requests, where content i of
/// the coded set has probability coded_probs[i] and the remaining mass goes
/// to contents outside it. Refuses more than 1e7 request sequences.
ExactDistribution exact_distinct_distribution(std::span<const double> coded_probs, int users);

/// Number of successes among independent Bernoulli(P[c]) trials, by
/// enumerating all 2^K outcomes. Refuses K > 20.
ExactDistribution exact_queue_distribution(std::span<const double> occupied);

struct ExactLoad {
  double r1 = 0.0;
  double r2 = 0.0;
  double r = 0.0;
  long outcomes = 0;
};

/// Expected per-slot load of the simulator's delivery rules, summed over
/// every joint demand outcome. Refuses more than `max_outcomes` outcomes.
ExactLoad exact_expected_load(const SystemConfig& config, const PopularityMatrix& pop,
                              const Placement& placement, long max_outcomes = 1'000'000);

}  // namespace hcache::oracle
