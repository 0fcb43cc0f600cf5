#pragma once

// Closed-form expected shared-link load of the hybrid coded/uncoded scheme.
//
// A slot proceeds in coded steps. At step i the server serves the i-th
// distinct coded request of every SBS that has one; with k such SBSs and
// subfile replication T, the step costs (C(K,T+1) - C(K-k,T+1)) / C(K,T)
// contents, capped at the coded library minus the coded cache. The number of
// occupied queues per step follows from the distribution of distinct coded
// requests per SBS, both computed by dynamic programming. Uncached contents
// are broadcast once per slot if anyone asks for them.

#include <span>
#include <vector>

#include "hcache/model.hpp"

namespace hcache {

struct LoadReport {
  double r1 = 0.0;  // coded delivery, units of F
  double r2 = 0.0;  // uncoded broadcasts
  double r = 0.0;
  std::vector<double> per_step;   // coded load of steps 1..Z_max
  std::vector<double> per_group;  // coded load per group (SBS-dependent case)
};

/// Pr{l = j} for the number of distinct coded requests l of one SBS.
struct DistinctRequestDistribution {
  std::vector<double> probs;  // j = 0..Z
  std::vector<double> tails;  // tails[i] = Pr{l >= i}, i = 0..Z+1

  double at_least(int i) const {
    return i < static_cast<int>(tails.size()) ? tails[i] : 0.0;
  }
};

/// Pr{Q = k} for the number of non-empty coded queues at one step.
struct QueueOccupancyDistribution {
  std::vector<double> probs;  // k = 0..K
};

/// Probability that the next request is the j-th distinct coded content
/// (j >= 1), given j-1 distinct coded contents seen so far. Linear
/// approximation, exact when the coded contents are equally popular.
double q_coded(const PopularityMatrix& pop, const HybridPlacement& placement, int j);

/// The same quantity for SBS `sbs` inside group `group` of an SBS-dependent
/// placement. Throws std::invalid_argument if the SBS is not a member.
double q_coded_group(const PopularityMatrix& pop, const HeteroPlacement& placement,
                     int sbs, int group, int j);

/// q[j-1] holds q_j; entries past the end count as zero.
DistinctRequestDistribution distinct_distribution(std::span<const double> q, int users);

/// Rows z = 0..max_users of the same recursion, so SBSs that differ only in
/// their user count share one table.
std::vector<std::vector<double>> distinct_table(std::span<const double> q, int max_users);

/// Tail sums of one table row, the distribution of an SBS with `users` users.
DistinctRequestDistribution distinct_from_table(const std::vector<std::vector<double>>& table,
                                                int users);

/// Poisson-binomial recursion over SBSs; occupied[c] = Pr{SBS c has a
/// request at this step}.
QueueOccupancyDistribution queue_distribution(std::span<const double> occupied);

/// Load of one coded step with `occupied` requesting SBSs out of
/// `sbs_count`, replication `replication`, a coded library of `library`
/// contents and a coded cache of `cache` contents per SBS.
double coded_step_load(int sbs_count, int replication, int occupied, int library, int cache);

struct CodedLoad {
  double r1 = 0.0;
  std::vector<double> per_step;
  std::vector<double> per_group;
};

/// Expected coded load of one SBS-dependent group, optionally per step.
/// No validation beyond requiring an integer replication.
double group_coded_load(const SystemConfig& config, const PopularityMatrix& pop,
                        const SbsGroup& group, std::vector<double>* per_step = nullptr);

CodedLoad expected_coded_load(const SystemConfig& config, const PopularityMatrix& pop,
                              const HybridPlacement& placement);
CodedLoad expected_coded_load(const SystemConfig& config, const PopularityMatrix& pop,
                              const HeteroPlacement& placement);

double expected_uncoded_load(const SystemConfig& config, const PopularityMatrix& pop,
                             const HybridPlacement& placement);
double expected_uncoded_load(const SystemConfig& config, const PopularityMatrix& pop,
                             const HeteroPlacement& placement);

/// r1 + r2. Throws std::invalid_argument when the placement does not validate.
LoadReport total_load(const SystemConfig& config, const PopularityMatrix& pop,
                      const HybridPlacement& placement);
LoadReport total_load(const SystemConfig& config, const PopularityMatrix& pop,
                      const HeteroPlacement& placement);
LoadReport total_load(const SystemConfig& config, const PopularityMatrix& pop,
                      const Placement& placement);

/// Evaluates many hybrid placements over one scenario. Popularity prefix sums
/// and the per-content uncoded terms are computed once; each evaluation runs
/// the distinct-request recursion once and shares it across SBSs. Safe for
/// concurrent use.
class HybridEvaluator {
public:
  HybridEvaluator(const SystemConfig& config, const PopularityMatrix& pop);

  /// No validation; callers pass placements from hybrid_candidates() or
  /// check them first.
  LoadReport evaluate(const HybridPlacement& placement) const;

  double uncoded_load(int cached) const { return uncoded_suffix_[cached]; }
  double coded_mass(int full, int cached) const { return prefix_[cached] - prefix_[full]; }

  const SystemConfig& config() const { return config_; }

private:
  SystemConfig config_;
  std::vector<double> prefix_;          // prefix_[r] = sum of the r most popular
  std::vector<double> uncoded_suffix_;  // sum over ranks >= r of 1-(1-p)^sum(Z)
};

}  // namespace hcache
