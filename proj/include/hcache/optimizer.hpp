#pragma once

// Placement search.
//
// SBS-independent popularity: exhaustive over (N1, M1) with integer
// replication, plus the all-uncoded degenerate (N1 = M1 = M). Ties go to the
// smallest N1, then the smallest M1.
//
// SBS-dependent popularity: exhaustive over covers built from SBS subsets of
// size >= 2, per-group capacities and coded libraries, and per-SBS uncoded
// contents. Only tiny instances are tractable; larger ones are refused.

#include <cstdint>
#include <optional>
#include <vector>

#include "hcache/analysis.hpp"
#include "hcache/model.hpp"
#include "hcache/simulator.hpp"

namespace hcache {

template <typename P>
struct Candidate {
  P placement;
  double r = 0.0;
};

template <typename P>
struct SearchResult {
  P best;
  LoadReport load;
  std::size_t evaluated = 0;
  std::vector<Candidate<P>> log;  // every evaluated candidate when requested
  bool pruned = false;            // content pruning heuristic was active
  std::optional<SimulationReport> simulated;  // simulation-refined searches
};

struct SearchOptions {
  Execution execution = Execution::parallel;
  bool keep_log = false;
};

/// All feasible hybrid placements, ordered by (N1, M1). With
/// `pure_coded_only` the list keeps M1 = 0 only.
std::vector<HybridPlacement> hybrid_candidates(const SystemConfig& config,
                                               bool pure_coded_only = false);

/// Evaluates every candidate; the serial path is the reference for the
/// OpenMP one and both return identical vectors.
std::vector<LoadReport> evaluate_candidates(const HybridEvaluator& evaluator,
                                            const std::vector<HybridPlacement>& candidates,
                                            Execution execution);

SearchResult<HybridPlacement> optimize_hybrid(const SystemConfig& config,
                                              const PopularityMatrix& pop,
                                              const SearchOptions& options = {});

struct PureCodedOptions {
  SearchOptions search;
  /// When set, candidates are ranked by simulated mean load instead of the
  /// closed form, whose distinct-request approximation is weakest when all
  /// of a skewed library is coded.
  std::optional<SimulationOptions> refine;
};

/// Two-partition scheme: M1 = 0. If no coded placement is feasible (M = 0 or
/// M = N) the degenerate (M, M) is returned.
SearchResult<HybridPlacement> optimize_pure_coded(const SystemConfig& config,
                                                  const PopularityMatrix& pop,
                                                  const PureCodedOptions& options = {});

/// Caches the M most popular contents everywhere.
SearchResult<HybridPlacement> optimize_pure_uncoded(const SystemConfig& config,
                                                    const PopularityMatrix& pop);

/// Bitmask of SBSs.
using SbsSet = std::uint32_t;
using Cover = std::vector<SbsSet>;

/// Every cover of K SBSs by at most `max_groups` distinct subsets of size
/// >= 2, by group count, then lexicographically by subset mask.
/// Throws InstanceTooLarge when K > 6.
std::vector<Cover> enumerate_covers(int sbs_count, int max_groups);

/// Number of candidate groups, 2^K - K - 1.
std::uint64_t candidate_group_count(int sbs_count);

struct HeteroSearchOptions {
  int max_groups = 2;
  bool single_group = false;    // cover = {all SBSs} only
  bool prune_contents = false;  // X = top-N_g by sum_c Z_c p(n, c) over members
  bool pure_coded = false;      // force M_1c = 0
  double work_budget = 2e8;     // refuse above this many leaf evaluations
  Execution execution = Execution::parallel;
};

/// Exact-mode bounds.
inline constexpr int kHeteroMaxSbs = 5;
inline constexpr int kHeteroMaxContents = 8;
inline constexpr int kHeteroMaxCache = 4;
inline constexpr int kUncodedMaxSbs = 5;
inline constexpr int kUncodedMaxContents = 12;

/// Exhaustive search of the SBS-dependent hybrid scheme. The all-uncoded
/// degenerate is a candidate unless `pure_coded` is set. Throws
/// InstanceTooLarge naming the failed bound.
SearchResult<HeteroPlacement> optimize_hetero(const SystemConfig& config,
                                              const PopularityMatrix& pop,
                                              const HeteroSearchOptions& options = {});

/// Per-SBS uncoded caching only, exact with respect to the multicast-aware
/// uncoded load.
SearchResult<HeteroPlacement> optimize_pure_uncoded_hetero(const SystemConfig& config,
                                                           const PopularityMatrix& pop,
                                                           double work_budget = 2e8);

}  // namespace hcache
