#include "hcache/walkthrough.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "hcache/scenario.hpp"

namespace hcache::cli {

namespace {

char letter(int content) { return static_cast<char>('A' + content); }

DemandMatrix parse_demands(const std::string& text) {
  DemandMatrix d;
  d.per_sbs.emplace_back();
  for (char ch : text) {
    if (ch == ',') {
      d.per_sbs.emplace_back();
    } else if (ch >= 'A' && ch <= 'Z') {
      d.per_sbs.back().push_back(ch - 'A');
    } else {
      throw ParseError(std::string("demands: unexpected character '") + ch + "'");
    }
  }
  if (d.per_sbs.size() != 3)
    throw ParseError("demands: expected 3 comma-separated groups, got " +
                     std::to_string(d.per_sbs.size()));
  return d;
}

std::string letters(const std::vector<int>& contents) {
  std::string out;
  for (int n : contents) out += letter(n);
  return out.empty() ? "-" : out;
}

}  // namespace

Walkthrough walkthrough(const std::string& demands) {
  Walkthrough w;
  w.demands = parse_demands(demands);
  w.config.sbs_count = 3;
  w.config.content_count = 26;
  w.config.cache_capacity = 5;
  for (const auto& row : w.demands.per_sbs) w.config.users.push_back(static_cast<int>(row.size()));
  w.placement = {3, 9};
  const auto pop = zipf_popularity(26, 1.0, 3);
  const DeliveryPlan plan(w.config, pop, w.placement);
  w.outcome = run_slot(w.demands, plan);

  std::ostringstream os;
  const int t = *w.placement.replication(w.config);
  os << "K=3 N=26 M=5 M1=3 N1=9 T=" << t << " Z=(" << w.config.users[0] << ','
     << w.config.users[1] << ',' << w.config.users[2] << ")\n";
  os << "cached whole: A-C   coded: D-I   not cached: J-Z\n";
  for (int c = 0; c < 3; ++c) {
    std::vector<int> local, coded, uncoded;
    for (int n : w.demands.per_sbs[c]) {
      const int route = plan.route(n, c);
      auto& bucket = route == DeliveryPlan::kLocal     ? local
                     : route == DeliveryPlan::kUncoded ? uncoded
                                                       : coded;
      bucket.push_back(n);
    }
    std::vector<int> queue;
    for (int n : coded)
      if (std::find(queue.begin(), queue.end(), n) == queue.end()) queue.push_back(n);
    os << "SBS" << c + 1 << " requests " << letters(w.demands.per_sbs[c]) << ": local "
       << letters(local) << ", coded " << letters(coded) << ", uncoded " << letters(uncoded)
       << ", coded queue " << letters(queue) << " (" << queue.size() << ")\n";
  }
  const auto& occupancy = w.outcome.step_occupancy.front();
  const auto& cluster = plan.clusters().front();
  char buf[96];
  for (std::size_t i = 0; i < occupancy.size(); ++i) {
    std::snprintf(buf, sizeof buf, "step %zu: %d non-empty queues, load %.6g\n", i + 1,
                  occupancy[i], coded_step_load(3, t, occupancy[i], cluster.library, cluster.cache));
    os << buf;
  }
  os << "step occupancy: (";
  for (std::size_t i = 0; i < occupancy.size(); ++i) os << (i ? "," : "") << occupancy[i];
  os << ")\n";
  std::snprintf(buf, sizeof buf, "coded load %.6g, uncoded broadcasts %d, total %.6g\n",
                w.outcome.coded_load, w.outcome.uncoded_broadcasts, w.outcome.total());
  os << buf;
  w.report = os.str();
  return w;
}

}  // namespace hcache::cli
