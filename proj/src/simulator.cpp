#include "hcache/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace hcache {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t slot_seed(std::uint64_t seed, std::uint64_t slot) {
  return mix64(mix64(seed) ^ mix64(slot + 0x632be59bd9b4e019ULL));
}

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Inverse-CDF sampler over every popularity column.
class DemandSampler {
public:
  DemandSampler(const PopularityMatrix& pop) : content_count_(pop.content_count()) {
    cdf_.resize(pop.sbs_count());
    last_positive_.resize(pop.sbs_count(), 0);
    for (int c = 0; c < pop.sbs_count(); ++c) {
      auto col = pop.column(c);
      auto& cdf = cdf_[c];
      cdf.resize(col.size());
      double acc = 0.0;
      for (std::size_t n = 0; n < col.size(); ++n) {
        acc += col[n];
        cdf[n] = acc;
        if (col[n] > 0.0) last_positive_[c] = static_cast<int>(n);
      }
    }
  }

  DemandMatrix draw(const SystemConfig& config, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    DemandMatrix d;
    d.per_sbs.resize(config.sbs_count);
    for (int c = 0; c < config.sbs_count; ++c) {
      const auto& cdf = cdf_[c];
      auto& out = d.per_sbs[c];
      out.reserve(config.users[c]);
      for (int u = 0; u < config.users[c]; ++u) {
        const double x = unit_uniform(rng);
        int n = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), x) - cdf.begin());
        // Rounding can leave the last CDF entry just under 1.
        n = std::min(n, last_positive_[c]);
        out.push_back(n);
      }
    }
    return d;
  }

private:
  int content_count_;
  std::vector<std::vector<double>> cdf_;
  std::vector<int> last_positive_;
};

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

Moments moments(const std::vector<SlotRecord>& records, double (*get)(const SlotRecord&)) {
  Moments m;
  const double n = static_cast<double>(records.size());
  if (records.empty()) return m;
  double sum = 0.0;
  for (const auto& r : records) sum += get(r);
  m.mean = sum / n;
  if (records.size() < 2) return m;
  double ss = 0.0;
  for (const auto& r : records) {
    const double d = get(r) - m.mean;
    ss += d * d;
  }
  m.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return m;
}

}  // namespace

DeliveryPlan::DeliveryPlan(const SystemConfig& config, const PopularityMatrix& pop,
                           const HybridPlacement& placement) {
  init(config, to_hetero(config, pop, placement));
}

DeliveryPlan::DeliveryPlan(const SystemConfig& config, const PopularityMatrix&,
                           const HeteroPlacement& placement) {
  init(config, placement);
}

DeliveryPlan::DeliveryPlan(const SystemConfig& config, const PopularityMatrix& pop,
                           const Placement& placement) {
  std::visit([&](const auto& p) { *this = DeliveryPlan(config, pop, p); }, placement);
}

void DeliveryPlan::init(const SystemConfig& config, const HeteroPlacement& placement) {
  sbs_count_ = config.sbs_count;
  content_count_ = config.content_count;
  for (const auto& g : placement.groups)
    clusters_.push_back({g.members, g.replication().value_or(0), g.library(), g.capacity});
  routes_.assign(static_cast<std::size_t>(sbs_count_) * content_count_, kUncoded);
  for (int c = 0; c < sbs_count_; ++c) {
    for (int n = 0; n < content_count_; ++n) {
      int& r = routes_[static_cast<std::size_t>(c) * content_count_ + n];
      if (placement.cached_uncoded(n, c)) {
        r = kLocal;
        continue;
      }
      for (std::size_t g = 0; g < placement.groups.size(); ++g) {
        if (placement.groups[g].contains_sbs(c) && placement.groups[g].contains_content(n)) {
          r = static_cast<int>(g);
          break;
        }
      }
    }
  }
}

DemandMatrix sample_demands(const PopularityMatrix& pop, const SystemConfig& config,
                            std::uint64_t seed) {
  return DemandSampler(pop).draw(config, seed);
}

SlotOutcome run_slot(const DemandMatrix& demands, const DeliveryPlan& plan) {
  const auto& clusters = plan.clusters();
  SlotOutcome out;
  out.queue_lengths.resize(clusters.size());
  out.step_occupancy.resize(clusters.size());
  // queues[g][m]: distinct contents requested by member m of cluster g.
  std::vector<std::vector<std::vector<int>>> queues(clusters.size());
  for (std::size_t g = 0; g < clusters.size(); ++g) queues[g].resize(clusters[g].members.size());
  std::vector<int> uncoded;

  for (int c = 0; c < plan.sbs_count(); ++c) {
    for (int n : demands.per_sbs[c]) {
      const int route = plan.route(n, c);
      if (route == DeliveryPlan::kLocal) {
        ++out.local_hits;
      } else if (route == DeliveryPlan::kUncoded) {
        ++out.uncoded_requests;
        uncoded.push_back(n);
      } else {
        ++out.coded_requests;
        const auto& members = clusters[route].members;
        const auto m = std::lower_bound(members.begin(), members.end(), c) - members.begin();
        auto& q = queues[route][m];
        if (std::find(q.begin(), q.end(), n) == q.end()) q.push_back(n);
      }
    }
  }

  for (std::size_t g = 0; g < clusters.size(); ++g) {
    const auto& cl = clusters[g];
    auto& lengths = out.queue_lengths[g];
    for (const auto& q : queues[g]) lengths.push_back(static_cast<int>(q.size()));
    const int steps = lengths.empty() ? 0 : *std::max_element(lengths.begin(), lengths.end());
    for (int i = 1; i <= steps; ++i) {
      const int k = static_cast<int>(
          std::count_if(lengths.begin(), lengths.end(), [i](int l) { return l >= i; }));
      out.step_occupancy[g].push_back(k);
      out.coded_load +=
          coded_step_load(static_cast<int>(cl.members.size()), cl.replication, k, cl.library, cl.cache);
    }
    out.steps = std::max(out.steps, steps);
  }

  std::sort(uncoded.begin(), uncoded.end());
  out.uncoded_broadcasts =
      static_cast<int>(std::unique(uncoded.begin(), uncoded.end()) - uncoded.begin());
  return out;
}

std::string SimulationReport::trace_csv() const {
  std::string out = "slot,r1,r2,r,steps,local_hits\n";
  char buf[160];
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& t = trace[i];
    std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g,%.12g,%d,%d\n", i, t.r1, t.r2, t.r(), t.steps,
                  t.local_hits);
    out += buf;
  }
  return out;
}

SimulationReport simulate(const SystemConfig& config, const PopularityMatrix& pop,
                          const Placement& placement, const SimulationOptions& options) {
  if (options.slots < 1) throw std::invalid_argument("simulate: slots >= 1");
  const DeliveryPlan plan(config, pop, placement);
  const DemandSampler sampler(pop);
  std::vector<SlotRecord> records(options.slots);
  const auto n = static_cast<long>(options.slots);

  auto one = [&](long i) {
    const auto demands = sampler.draw(config, slot_seed(options.seed, static_cast<std::uint64_t>(i)));
    const auto o = run_slot(demands, plan);
    records[i] = {o.coded_load, static_cast<double>(o.uncoded_broadcasts), o.steps, o.local_hits};
  };
  if (options.execution == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) one(i);
  } else {
    for (long i = 0; i < n; ++i) one(i);
  }

  SimulationReport rep;
  rep.slots = options.slots;
  const auto r1 = moments(records, [](const SlotRecord& r) { return r.r1; });
  const auto r2 = moments(records, [](const SlotRecord& r) { return r.r2; });
  const auto r = moments(records, [](const SlotRecord& s) { return s.r(); });
  rep.mean_r1 = r1.mean;
  rep.se_r1 = r1.se;
  rep.mean_r2 = r2.mean;
  rep.se_r2 = r2.se;
  rep.mean_r = r.mean;
  rep.se_r = r.se;
  if (options.keep_trace) rep.trace = std::move(records);
  return rep;
}

}  // namespace hcache
