#include "hcache/optimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "search_util.hpp"

namespace hcache {

std::vector<HybridPlacement> hybrid_candidates(const SystemConfig& config, bool pure_coded_only) {
  std::vector<HybridPlacement> out;
  const int m = config.cache_capacity;
  const long k = config.sbs_count;
  for (int n1 = m; n1 <= config.content_count; ++n1) {
    if (n1 == m) {
      if (!pure_coded_only) out.push_back({m, m});
      continue;
    }
    for (int m1 = 0; m1 < m; ++m1) {
      if (pure_coded_only && m1 > 0) break;
      if ((k * (m - m1)) % (n1 - m1) == 0) out.push_back({m1, n1});
    }
  }
  return out;
}

std::vector<LoadReport> evaluate_candidates(const HybridEvaluator& evaluator,
                                            const std::vector<HybridPlacement>& candidates,
                                            Execution execution) {
  std::vector<LoadReport> out(candidates.size());
  const long n = static_cast<long>(candidates.size());
  if (execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) out[i] = evaluator.evaluate(candidates[i]);
  } else {
    for (long i = 0; i < n; ++i) out[i] = evaluator.evaluate(candidates[i]);
  }
  return out;
}

namespace {

SearchResult<HybridPlacement> pick_best(const std::vector<HybridPlacement>& candidates,
                                        std::vector<LoadReport> loads, bool keep_log) {
  SearchResult<HybridPlacement> res;
  res.evaluated = candidates.size();
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (detail::strictly_better(loads[i].r, loads[best].r)) best = i;
  res.best = candidates[best];
  res.load = loads[best];
  if (keep_log) {
    res.log.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) res.log.push_back({candidates[i], loads[i].r});
  }
  return res;
}

void require_homogeneous(const SystemConfig& config, const PopularityMatrix& pop,
                         const char* who) {
  auto bad = config.check();
  if (!bad.empty()) throw std::invalid_argument(std::string(who) + ": " + bad.front());
  if (pop.content_count() != config.content_count || pop.sbs_count() != config.sbs_count)
    throw std::invalid_argument(std::string(who) + ": popularity matrix must be N x K");
  if (!pop.homogeneous())
    throw std::invalid_argument(std::string(who) + ": requires SBS-independent popularity");
}

}  // namespace

SearchResult<HybridPlacement> optimize_hybrid(const SystemConfig& config,
                                              const PopularityMatrix& pop,
                                              const SearchOptions& options) {
  require_homogeneous(config, pop, "optimize_hybrid");
  const HybridEvaluator evaluator(config, pop);
  const auto candidates = hybrid_candidates(config);
  return pick_best(candidates, evaluate_candidates(evaluator, candidates, options.execution),
                   options.keep_log);
}

SearchResult<HybridPlacement> optimize_pure_coded(const SystemConfig& config,
                                                  const PopularityMatrix& pop,
                                                  const PureCodedOptions& options) {
  require_homogeneous(config, pop, "optimize_pure_coded");
  const HybridEvaluator evaluator(config, pop);
  auto candidates = hybrid_candidates(config, true);
  if (candidates.empty()) candidates.push_back({config.cache_capacity, config.cache_capacity});
  auto loads = evaluate_candidates(evaluator, candidates, options.search.execution);
  if (!options.refine) return pick_best(candidates, std::move(loads), options.search.keep_log);

  std::vector<SimulationReport> sims;
  sims.reserve(candidates.size());
  for (const auto& c : candidates) sims.push_back(simulate(config, pop, c, *options.refine));
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i)
    if (detail::strictly_better(sims[i].mean_r, sims[best].mean_r)) best = i;
  SearchResult<HybridPlacement> res;
  res.evaluated = candidates.size();
  res.best = candidates[best];
  res.load = loads[best];
  res.simulated = sims[best];
  if (options.search.keep_log)
    for (std::size_t i = 0; i < candidates.size(); ++i)
      res.log.push_back({candidates[i], sims[i].mean_r});
  return res;
}

SearchResult<HybridPlacement> optimize_pure_uncoded(const SystemConfig& config,
                                                    const PopularityMatrix& pop) {
  require_homogeneous(config, pop, "optimize_pure_uncoded");
  SearchResult<HybridPlacement> res;
  res.best = {config.cache_capacity, config.cache_capacity};
  res.load = HybridEvaluator(config, pop).evaluate(res.best);
  res.evaluated = 1;
  return res;
}

}  // namespace hcache
