#include "hcache/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "hcache/binomial.hpp"

namespace hcache {

namespace {

double q_at(std::span<const double> q, int j) {
  return (j >= 1 && j <= static_cast<int>(q.size())) ? q[j - 1] : 0.0;
}

// 1 - (1 - p)^users, accurate for small p.
double prob_requested(double p, long users) {
  if (users <= 0 || p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(users) * std::log1p(-p));
}

void throw_if_invalid(const std::vector<std::string>& violations) {
  if (violations.empty()) return;
  std::string msg = "invalid placement:";
  for (const auto& v : violations) msg += " [" + v + "]";
  throw std::invalid_argument(msg);
}

// Linear approximation of q_j over a coded library of `library` contents
// holding `mass` of the SBS's request probability; only j <= limit matter.
std::vector<double> linear_q(double mass, int library, int limit) {
  std::vector<double> q(std::max(0, std::min(library, limit)));
  for (std::size_t j = 0; j < q.size(); ++j)
    q[j] = (1.0 - static_cast<double>(j) / library) * mass;
  return q;
}

// Expected coded load of every step 1..steps for one coded cluster whose
// members have the given distinct-request distributions.
std::vector<double> cluster_step_loads(int members, int replication, int library, int cache,
                                       const std::vector<DistinctRequestDistribution>& dists,
                                       int steps) {
  std::vector<double> step_cost(members + 1);
  for (int k = 0; k <= members; ++k)
    step_cost[k] = coded_step_load(members, replication, k, library, cache);

  std::vector<double> out(steps, 0.0);
  std::vector<double> occupied(members);
  for (int i = 1; i <= steps; ++i) {
    bool any = false;
    for (int c = 0; c < members; ++c) {
      occupied[c] = dists[c].at_least(i);
      any = any || occupied[c] > 0.0;
    }
    // Tails are non-increasing in i, so every later step is empty too.
    if (!any) break;
    const auto q = queue_distribution(occupied);
    double expected = 0.0;
    for (int k = 1; k <= members; ++k) expected += q.probs[k] * step_cost[k];
    out[i - 1] = expected;
  }
  return out;
}

}  // namespace

double q_coded(const PopularityMatrix& pop, const HybridPlacement& placement, int j) {
  if (j < 1) throw std::invalid_argument("q_coded: rank j must be >= 1");
  const int library = placement.cached - placement.full;
  if (library <= 0 || j > library) return 0.0;
  auto sorted = pop.sorted_probs();
  double mass = 0.0;
  for (int r = placement.full; r < placement.cached; ++r) mass += sorted[r];
  return (1.0 - static_cast<double>(j - 1) / library) * mass;
}

double q_coded_group(const PopularityMatrix& pop, const HeteroPlacement& placement, int sbs,
                     int group, int j) {
  if (j < 1) throw std::invalid_argument("q_coded_group: rank j must be >= 1");
  if (group < 0 || group >= static_cast<int>(placement.groups.size()))
    throw std::invalid_argument("q_coded_group: no such group");
  const auto& g = placement.groups[group];
  if (!g.contains_sbs(sbs))
    throw std::invalid_argument("q_coded_group: SBS " + std::to_string(sbs + 1) +
                                " is not a member of group " + std::to_string(group + 1));
  if (j > g.library()) return 0.0;
  double mass = 0.0;
  for (int n : g.contents) mass += pop.prob(n, sbs);
  return (1.0 - static_cast<double>(j - 1) / g.library()) * mass;
}

std::vector<std::vector<double>> distinct_table(std::span<const double> q, int max_users) {
  std::vector<std::vector<double>> table;
  table.reserve(max_users + 1);
  table.push_back({1.0});
  for (int z = 1; z <= max_users; ++z) {
    const auto& prev = table.back();
    std::vector<double> row(z + 1, 0.0);
    row[0] = prev[0] * (1.0 - q_at(q, 1));
    for (int j = 1; j < z; ++j)
      row[j] = prev[j] * (1.0 - q_at(q, j + 1)) + prev[j - 1] * q_at(q, j);
    row[z] = prev[z - 1] * q_at(q, z);
    table.push_back(std::move(row));
  }
  return table;
}

DistinctRequestDistribution distinct_from_table(const std::vector<std::vector<double>>& table,
                                                int users) {
  DistinctRequestDistribution d;
  d.probs = table.at(users);
  d.tails.assign(users + 2, 0.0);
  for (int j = users; j >= 0; --j) d.tails[j] = d.tails[j + 1] + d.probs[j];
  return d;
}

DistinctRequestDistribution distinct_distribution(std::span<const double> q, int users) {
  if (users < 0) throw std::invalid_argument("distinct_distribution: negative user count");
  return distinct_from_table(distinct_table(q, users), users);
}

QueueOccupancyDistribution queue_distribution(std::span<const double> occupied) {
  QueueOccupancyDistribution d;
  d.probs.assign(occupied.size() + 1, 0.0);
  d.probs[0] = 1.0;
  for (std::size_t c = 1; c <= occupied.size(); ++c) {
    const double p = occupied[c - 1];
    for (std::size_t k = c; k >= 1; --k) d.probs[k] = d.probs[k] * (1.0 - p) + d.probs[k - 1] * p;
    d.probs[0] *= 1.0 - p;
  }
  return d;
}

double coded_step_load(int sbs_count, int replication, int occupied, int library, int cache) {
  if (occupied <= 0) return 0.0;
  const int t = replication;
  // C(K,T+1)/C(K,T) = (K-T)/(T+1).
  const double full = static_cast<double>(sbs_count - t) / (t + 1);
  const double idle = binomial_ratio(sbs_count - occupied, t + 1, sbs_count, t);
  return std::min(full - idle, static_cast<double>(library - cache));
}

HybridEvaluator::HybridEvaluator(const SystemConfig& config, const PopularityMatrix& pop)
    : config_(config) {
  auto sorted = pop.sorted_probs();
  const int n = static_cast<int>(sorted.size());
  prefix_.assign(n + 1, 0.0);
  for (int r = 0; r < n; ++r) prefix_[r + 1] = prefix_[r] + sorted[r];
  const long users = config.total_users();
  uncoded_suffix_.assign(n + 1, 0.0);
  for (int r = n - 1; r >= 0; --r)
    uncoded_suffix_[r] = uncoded_suffix_[r + 1] + prob_requested(sorted[r], users);
}

LoadReport HybridEvaluator::evaluate(const HybridPlacement& placement) const {
  LoadReport out;
  const int zmax = config_.max_users();
  out.per_step.assign(zmax, 0.0);
  out.r2 = uncoded_load(placement.cached);
  const auto t = placement.replication(config_);
  if (t) {
    const int library = placement.cached - placement.full;
    const int cache = config_.cache_capacity - placement.full;
    const auto q = linear_q(coded_mass(placement.full, placement.cached), library, zmax);
    const auto table = distinct_table(q, zmax);
    std::map<int, DistinctRequestDistribution> by_users;
    std::vector<DistinctRequestDistribution> dists;
    dists.reserve(config_.sbs_count);
    for (int z : config_.users) {
      auto it = by_users.find(z);
      if (it == by_users.end()) it = by_users.emplace(z, distinct_from_table(table, z)).first;
      dists.push_back(it->second);
    }
    out.per_step = cluster_step_loads(config_.sbs_count, *t, library, cache, dists, zmax);
    for (double s : out.per_step) out.r1 += s;
    out.per_group = {out.r1};
  }
  out.r = out.r1 + out.r2;
  return out;
}

CodedLoad expected_coded_load(const SystemConfig& config, const PopularityMatrix& pop,
                              const HybridPlacement& placement) {
  throw_if_invalid(validate(config, pop, placement));
  auto rep = HybridEvaluator(config, pop).evaluate(placement);
  return {rep.r1, std::move(rep.per_step), std::move(rep.per_group)};
}

double group_coded_load(const SystemConfig& config, const PopularityMatrix& pop,
                        const SbsGroup& group, std::vector<double>* per_step) {
  const int zmax = config.max_users();
  if (per_step) per_step->assign(zmax, 0.0);
  const auto t = group.replication();
  if (!t || group.library() <= group.capacity) return 0.0;
  std::vector<DistinctRequestDistribution> dists;
  dists.reserve(group.members.size());
  for (int c : group.members) {
    double mass = 0.0;
    for (int n : group.contents) mass += pop.prob(n, c);
    const int users = config.users[c];
    dists.push_back(distinct_distribution(linear_q(mass, group.library(), users), users));
  }
  const auto steps =
      cluster_step_loads(group.size(), *t, group.library(), group.capacity, dists, zmax);
  double total = 0.0;
  for (double s : steps) total += s;
  if (per_step) *per_step = steps;
  return total;
}

CodedLoad expected_coded_load(const SystemConfig& config, const PopularityMatrix& pop,
                              const HeteroPlacement& placement) {
  throw_if_invalid(validate(config, pop, placement));
  CodedLoad out;
  out.per_step.assign(config.max_users(), 0.0);
  std::vector<double> steps;
  for (const auto& g : placement.groups) {
    const double load = group_coded_load(config, pop, g, &steps);
    for (std::size_t i = 0; i < steps.size(); ++i) out.per_step[i] += steps[i];
    out.per_group.push_back(load);
    out.r1 += load;
  }
  return out;
}

double expected_uncoded_load(const SystemConfig& config, const PopularityMatrix& pop,
                             const HybridPlacement& placement) {
  throw_if_invalid(validate(config, pop, placement));
  return HybridEvaluator(config, pop).uncoded_load(placement.cached);
}

double expected_uncoded_load(const SystemConfig& config, const PopularityMatrix& pop,
                             const HeteroPlacement& placement) {
  throw_if_invalid(validate(config, pop, placement));
  double r2 = 0.0;
  for (int n = 0; n < config.content_count; ++n) {
    double log_none = 0.0;  // log Pr{no SBS fetches n from the server}
    for (int c = 0; c < config.sbs_count; ++c) {
      const double p = pop.prob(n, c);
      if (p <= 0.0 || config.users[c] == 0 || placement.cached_uncoded(n, c)) continue;
      bool coded_here = false;
      for (const auto& g : placement.groups)
        coded_here = coded_here || (g.contains_sbs(c) && g.contains_content(n));
      if (coded_here) continue;
      log_none += config.users[c] * std::log1p(-p);
    }
    r2 += -std::expm1(log_none);
  }
  return r2;
}

LoadReport total_load(const SystemConfig& config, const PopularityMatrix& pop,
                      const HybridPlacement& placement) {
  throw_if_invalid(validate(config, pop, placement));
  return HybridEvaluator(config, pop).evaluate(placement);
}

LoadReport total_load(const SystemConfig& config, const PopularityMatrix& pop,
                      const HeteroPlacement& placement) {
  auto coded = expected_coded_load(config, pop, placement);
  LoadReport out;
  out.r1 = coded.r1;
  out.per_step = std::move(coded.per_step);
  out.per_group = std::move(coded.per_group);
  out.r2 = expected_uncoded_load(config, pop, placement);
  out.r = out.r1 + out.r2;
  return out;
}

LoadReport total_load(const SystemConfig& config, const PopularityMatrix& pop,
                      const Placement& placement) {
  return std::visit([&](const auto& p) { return total_load(config, pop, p); }, placement);
}

}  // namespace hcache
