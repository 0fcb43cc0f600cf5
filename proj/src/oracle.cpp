#include "hcache/oracle.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "hcache/simulator.hpp"

namespace hcache::oracle {

ExactDistribution exact_distinct_distribution(std::span<const double> coded_probs, int users) {
  const int coded = static_cast<int>(coded_probs.size());
  if (coded > 30) throw InstanceTooLarge("exact_distinct_distribution: more than 30 coded contents");
  double coded_mass = 0.0;
  for (double p : coded_probs) coded_mass += p;
  const double other = std::max(0.0, 1.0 - coded_mass);
  const int symbols = coded + (other > 0.0 ? 1 : 0);
  if (users > 0 && std::pow(static_cast<double>(symbols), users) > 1e7)
    throw InstanceTooLarge("exact_distinct_distribution: more than 1e7 request sequences");

  std::vector<long double> tally(users + 1, 0.0L);
  auto rec = [&](auto&& self, int depth, long double prob, std::uint32_t seen) -> void {
    if (prob == 0.0L) return;
    if (depth == users) {
      tally[std::popcount(seen)] += prob;
      return;
    }
    for (int i = 0; i < coded; ++i) self(self, depth + 1, prob * coded_probs[i], seen | (1u << i));
    if (other > 0.0) self(self, depth + 1, prob * other, seen);
  };
  rec(rec, 0, 1.0L, 0u);
  ExactDistribution out;
  for (auto v : tally) out.probs.push_back(static_cast<double>(v));
  return out;
}

ExactDistribution exact_queue_distribution(std::span<const double> occupied) {
  const int k = static_cast<int>(occupied.size());
  if (k > 20) throw InstanceTooLarge("exact_queue_distribution: K > 20");
  std::vector<long double> tally(k + 1, 0.0L);
  for (std::uint32_t s = 0; s < (1u << k); ++s) {
    long double prob = 1.0L;
    for (int c = 0; c < k; ++c) prob *= (s >> c & 1) ? occupied[c] : 1.0L - occupied[c];
    tally[std::popcount(s)] += prob;
  }
  ExactDistribution out;
  for (auto v : tally) out.probs.push_back(static_cast<double>(v));
  return out;
}

ExactLoad exact_expected_load(const SystemConfig& config, const PopularityMatrix& pop,
                              const Placement& placement, long max_outcomes) {
  std::vector<std::vector<int>> support(config.sbs_count);
  double outcomes = 1.0;
  for (int c = 0; c < config.sbs_count; ++c) {
    for (int n = 0; n < config.content_count; ++n)
      if (pop.prob(n, c) > 0.0) support[c].push_back(n);
    outcomes *= std::pow(static_cast<double>(support[c].size()), config.users[c]);
  }
  if (outcomes > static_cast<double>(max_outcomes)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "exact_expected_load: %.3g joint demand outcomes exceed %ld",
                  outcomes, max_outcomes);
    throw InstanceTooLarge(buf);
  }

  const DeliveryPlan plan(config, pop, placement);
  DemandMatrix demands;
  demands.per_sbs.resize(config.sbs_count);
  long double r1 = 0.0L, r2 = 0.0L;
  ExactLoad out;
  auto rec = [&](auto&& self, int c, long double prob) -> void {
    if (c == config.sbs_count) {
      const auto slot = run_slot(demands, plan);
      r1 += prob * slot.coded_load;
      r2 += prob * slot.uncoded_broadcasts;
      ++out.outcomes;
      return;
    }
    auto& row = demands.per_sbs[c];
    if (static_cast<int>(row.size()) == config.users[c]) {
      self(self, c + 1, prob);
      return;
    }
    for (int n : support[c]) {
      row.push_back(n);
      self(self, c, prob * pop.prob(n, c));
      row.pop_back();
    }
  };
  rec(rec, 0, 1.0L);
  out.r1 = static_cast<double>(r1);
  out.r2 = static_cast<double>(r2);
  out.r = out.r1 + out.r2;
  return out;
}

}  // namespace hcache::oracle
