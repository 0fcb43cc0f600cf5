#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "hcache/binomial.hpp"
#include "hcache/optimizer.hpp"
#include "search_util.hpp"

namespace hcache {

std::uint64_t candidate_group_count(int sbs_count) {
  return (std::uint64_t{1} << sbs_count) - static_cast<std::uint64_t>(sbs_count) - 1;
}

std::vector<Cover> enumerate_covers(int sbs_count, int max_groups) {
  if (sbs_count > 6)
    throw InstanceTooLarge("enumerate_covers: K=" + std::to_string(sbs_count) +
                           " exceeds the exact-mode bound K <= 6");
  if (sbs_count < 2 || max_groups < 1) return {};
  const SbsSet all = (SbsSet{1} << sbs_count) - 1;
  std::vector<SbsSet> groups;
  for (SbsSet s = 1; s <= all; ++s)
    if (std::popcount(s) >= 2) groups.push_back(s);
  const int limit = std::min<int>(max_groups, static_cast<int>(groups.size()));

  std::vector<Cover> out;
  Cover current;
  // Combinations of `size` groups in lexicographic index order.
  auto rec = [&](auto&& self, std::size_t start, int size, SbsSet used) -> void {
    if (static_cast<int>(current.size()) == size) {
      if (used == all) out.push_back(current);
      return;
    }
    for (std::size_t i = start; i < groups.size(); ++i) {
      current.push_back(groups[i]);
      self(self, i + 1, size, used | groups[i]);
      current.pop_back();
      if (out.size() > 5'000'000)
        throw InstanceTooLarge("enumerate_covers: more than 5e6 covers; lower max_groups");
    }
  };
  for (int size = 1; size <= limit; ++size) rec(rec, 0, size, 0);
  return out;
}

namespace {

using ContentSet = std::uint32_t;

std::vector<int> members_of(SbsSet s) {
  std::vector<int> out;
  for (int c = 0; s; ++c, s >>= 1)
    if (s & 1) out.push_back(c);
  return out;
}

std::vector<int> contents_of(ContentSet s) {
  std::vector<int> out;
  for (int n = 0; s; ++n, s >>= 1)
    if (s & 1) out.push_back(n);
  return out;
}

// Subsets of `pool` with `size` elements, in lexicographic order of their
// sorted element lists.
std::vector<ContentSet> combinations(const std::vector<int>& pool, int size) {
  std::vector<ContentSet> out;
  if (size < 0 || size > static_cast<int>(pool.size())) return out;
  std::vector<int> idx(size);
  std::iota(idx.begin(), idx.end(), 0);
  const int n = static_cast<int>(pool.size());
  while (true) {
    ContentSet m = 0;
    for (int i : idx) m |= ContentSet{1} << pool[i];
    out.push_back(m);
    int i = size - 1;
    while (i >= 0 && idx[i] == n - size + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

double choose(int n, int k) { return std::exp(log_binomial(n, k)); }

struct Scenario {
  const SystemConfig& config;
  const PopularityMatrix& pop;
  int sbs;
  int contents;
  int cache;
  std::vector<std::vector<double>> miss;  // miss[c][n] = Pr{SBS c never asks for n}

  Scenario(const SystemConfig& cfg, const PopularityMatrix& p)
      : config(cfg), pop(p), sbs(cfg.sbs_count), contents(cfg.content_count),
        cache(cfg.cache_capacity), miss(sbs, std::vector<double>(contents, 1.0)) {
    for (int c = 0; c < sbs; ++c)
      for (int n = 0; n < contents; ++n)
        miss[c][n] = std::pow(1.0 - pop.prob(n, c), cfg.users[c]);
  }
};

struct UncodedChoice {
  double r2 = 0.0;
  std::vector<ContentSet> y;
  std::uint64_t leaves = 0;
};

// Contents whose uncoded caching at `c` lowers the load, given what the
// SBS's groups already cover.
std::vector<int> useful_contents(const Scenario& s, int c, ContentSet covered) {
  std::vector<int> out;
  for (int n = 0; n < s.contents; ++n)
    if (!(covered >> n & 1) && s.miss[c][n] < 1.0) out.push_back(n);
  return out;
}

double uncoded_leaf_bound(const Scenario& s, const std::vector<ContentSet>& covered,
                          const std::vector<int>& capacity) {
  double leaves = 1.0;
  for (int c = 0; c + 1 < s.sbs; ++c) {
    const int u = static_cast<int>(useful_contents(s, c, covered[c]).size());
    leaves *= choose(u, std::min(u, capacity[c]));
  }
  return leaves;
}

// Minimizes sum_n 1 - prod_c f(n, c) over per-SBS uncoded sets of the given
// sizes, where f is 1 when n is cached or coded at c and miss[c][n]
// otherwise. The coded load does not depend on these sets. Every SBS but the
// last is enumerated; the last one's best response is to cache the contents
// with the largest marginal gain, which is exact.
UncodedChoice best_uncoded(const Scenario& s, const std::vector<ContentSet>& covered,
                           const std::vector<int>& capacity) {
  const int k = s.sbs;
  const int n = s.contents;
  std::vector<std::vector<int>> useful(k);
  std::vector<std::vector<double>> base(k, std::vector<double>(n, 1.0));
  for (int c = 0; c < k; ++c) {
    useful[c] = useful_contents(s, c, covered[c]);
    for (int v : useful[c]) base[c][v] = s.miss[c][v];
  }
  std::vector<std::vector<ContentSet>> options(k);
  for (int c = 0; c + 1 < k; ++c) {
    const int take = std::min<int>(capacity[c], static_cast<int>(useful[c].size()));
    options[c] = combinations(useful[c], take);
  }

  UncodedChoice best;
  best.r2 = std::numeric_limits<double>::infinity();
  std::vector<ContentSet> chosen(k, 0);
  std::vector<std::vector<double>> prod(k + 1, std::vector<double>(n, 1.0));

  auto finish_last = [&]() {
    const int c = k - 1;
    const auto& a = prod[c];
    std::vector<int> order = useful[c];
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
      return a[x] * (1.0 - base[c][x]) > a[y] * (1.0 - base[c][y]);
    });
    const int take = std::min<int>(capacity[c], static_cast<int>(order.size()));
    ContentSet last = 0;
    for (int i = 0; i < take; ++i) last |= ContentSet{1} << order[i];
    double r2 = 0.0;
    for (int v = 0; v < n; ++v) r2 += 1.0 - a[v] * ((last >> v & 1) ? 1.0 : base[c][v]);
    ++best.leaves;
    if (best.y.empty() || detail::strictly_better(r2, best.r2)) {
      best.r2 = r2;
      chosen[c] = last;
      best.y = chosen;
    }
  };

  auto rec = [&](auto&& self, int c) -> void {
    if (c == k - 1) {
      finish_last();
      return;
    }
    for (ContentSet opt : options[c]) {
      chosen[c] = opt;
      for (int v = 0; v < n; ++v) prod[c + 1][v] = prod[c][v] * ((opt >> v & 1) ? 1.0 : base[c][v]);
      self(self, c + 1);
    }
  };
  rec(rec, 0);

  // Pad each set to its exact size with the lowest-indexed remaining contents.
  for (int c = 0; c < k; ++c) {
    ContentSet y = best.y[c];
    for (int v = 0; v < n && std::popcount(y) < capacity[c]; ++v) y |= ContentSet{1} << v;
    best.y[c] = y;
  }
  return best;
}

struct Leaf {
  double r = std::numeric_limits<double>::infinity();
  std::vector<int> capacity;
  std::vector<ContentSet> coded;
  std::vector<ContentSet> uncoded;
  bool found = false;
};

struct CoverOutcome {
  Leaf best;
  std::uint64_t evaluated = 0;
};

std::vector<std::vector<int>> capacity_vectors(const Scenario& s, const Cover& cover,
                                               bool pure_coded) {
  std::vector<std::vector<int>> out;
  std::vector<int> cap(cover.size(), 1);
  auto rec = [&](auto&& self, std::size_t g) -> void {
    if (g == cover.size()) {
      for (int c = 0; c < s.sbs; ++c) {
        int used = 0;
        for (std::size_t h = 0; h < cover.size(); ++h)
          if (cover[h] >> c & 1) used += cap[h];
        if (used > s.cache || (pure_coded && used != s.cache)) return;
      }
      out.push_back(cap);
      return;
    }
    for (int m = 1; m <= s.cache; ++m) {
      cap[g] = m;
      self(self, g + 1);
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<int> library_sizes(const Scenario& s, int group_size, int capacity) {
  std::vector<int> out;
  for (int ng = capacity + 1; ng <= s.contents; ++ng)
    if ((group_size * capacity) % ng == 0) out.push_back(ng);
  return out;
}

std::vector<int> remaining_capacity(const Scenario& s, const Cover& cover,
                                    const std::vector<int>& cap) {
  std::vector<int> rest(s.sbs, s.cache);
  for (std::size_t g = 0; g < cover.size(); ++g)
    for (int c = 0; c < s.sbs; ++c)
      if (cover[g] >> c & 1) rest[c] -= cap[g];
  return rest;
}

// Contents a pruned search codes in a group of `library` contents: the most
// requested by the group's members, ties by index.
ContentSet top_contents(const Scenario& s, SbsSet members, int library) {
  std::vector<double> weight(s.contents, 0.0);
  for (int c : members_of(members))
    for (int n = 0; n < s.contents; ++n) weight[n] += s.config.users[c] * s.pop.prob(n, c);
  std::vector<int> order(s.contents);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return weight[a] > weight[b]; });
  ContentSet out = 0;
  for (int i = 0; i < library; ++i) out |= ContentSet{1} << order[i];
  return out;
}

std::vector<ContentSet> library_choices(const Scenario& s, SbsSet members, int library,
                                        bool prune) {
  if (prune) return {top_contents(s, members, library)};
  std::vector<int> all(s.contents);
  std::iota(all.begin(), all.end(), 0);
  return combinations(all, library);
}

double estimate_cover(const Scenario& s, const Cover& cover, const HeteroSearchOptions& opt) {
  double total = 0.0;
  for (const auto& cap : capacity_vectors(s, cover, opt.pure_coded)) {
    const auto rest = remaining_capacity(s, cover, cap);
    double y = 1.0;
    for (int c = 0; c + 1 < s.sbs; ++c) y *= choose(s.contents, rest[c]);
    // Sum over library sizes of prod_g C(N, N_g), factorized per group.
    double x = 1.0;
    for (std::size_t g = 0; g < cover.size(); ++g) {
      double per = 0.0;
      for (int ng : library_sizes(s, std::popcount(cover[g]), cap[g]))
        per += opt.prune_contents ? 1.0 : choose(s.contents, ng);
      x *= per;
    }
    total += x * y;
  }
  return total;
}

CoverOutcome search_cover(const Scenario& s, const Cover& cover, const HeteroSearchOptions& opt) {
  CoverOutcome out;
  const std::size_t m = cover.size();
  for (const auto& cap : capacity_vectors(s, cover, opt.pure_coded)) {
    const auto rest = remaining_capacity(s, cover, cap);
    // Per group: every (library, coded load) option.
    std::vector<std::vector<std::pair<ContentSet, double>>> groups(m);
    for (std::size_t g = 0; g < m; ++g) {
      const int size = std::popcount(cover[g]);
      for (int ng : library_sizes(s, size, cap[g])) {
        for (ContentSet x : library_choices(s, cover[g], ng, opt.prune_contents)) {
          SbsGroup grp{members_of(cover[g]), cap[g], contents_of(x)};
          groups[g].emplace_back(x, group_coded_load(s.config, s.pop, grp));
        }
      }
    }
    std::vector<ContentSet> pick(m, 0);
    auto rec = [&](auto&& self, std::size_t g, double r1) -> void {
      if (g == m) {
        std::vector<ContentSet> covered(s.sbs, 0);
        for (std::size_t h = 0; h < m; ++h)
          for (int c = 0; c < s.sbs; ++c)
            if (cover[h] >> c & 1) covered[c] |= pick[h];
        const auto y = best_uncoded(s, covered, rest);
        out.evaluated += y.leaves;
        const double r = r1 + y.r2;
        if (!out.best.found || detail::strictly_better(r, out.best.r)) {
          out.best = {r, cap, pick, y.y, true};
        }
        return;
      }
      for (const auto& [x, load] : groups[g]) {
        pick[g] = x;
        self(self, g + 1, r1 + load);
      }
    };
    rec(rec, 0, 0.0);
  }
  return out;
}

HeteroPlacement to_placement(const Scenario& s, const Cover& cover, const Leaf& leaf) {
  HeteroPlacement p;
  for (std::size_t g = 0; g < cover.size(); ++g)
    p.groups.push_back({members_of(cover[g]), leaf.capacity[g], contents_of(leaf.coded[g])});
  p.uncoded.resize(s.sbs);
  for (int c = 0; c < s.sbs; ++c) p.uncoded[c] = contents_of(leaf.uncoded[c]);
  return p;
}

void check_inputs(const SystemConfig& config, const PopularityMatrix& pop, const char* who) {
  auto bad = config.check();
  if (!bad.empty()) throw std::invalid_argument(std::string(who) + ": " + bad.front());
  if (pop.content_count() != config.content_count || pop.sbs_count() != config.sbs_count)
    throw std::invalid_argument(std::string(who) + ": popularity matrix must be N x K");
}

void check_bound(const char* who, const char* name, int value, int bound) {
  if (value > bound)
    throw InstanceTooLarge(std::string(who) + ": " + name + "=" + std::to_string(value) +
                           " exceeds the exact-mode bound " + name + " <= " +
                           std::to_string(bound));
}

void check_budget(const char* who, double leaves, double budget) {
  if (leaves > budget) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: about %.3g leaf evaluations exceed the work budget %.3g",
                  who, leaves, budget);
    throw InstanceTooLarge(buf);
  }
}

}  // namespace

SearchResult<HeteroPlacement> optimize_hetero(const SystemConfig& config,
                                              const PopularityMatrix& pop,
                                              const HeteroSearchOptions& options) {
  constexpr const char* who = "optimize_hetero";
  check_inputs(config, pop, who);
  check_bound(who, "K", config.sbs_count, kHeteroMaxSbs);
  check_bound(who, "N", config.content_count, kHeteroMaxContents);
  check_bound(who, "M", config.cache_capacity, kHeteroMaxCache);
  const Scenario s(config, pop);

  std::vector<Cover> covers;
  if (options.single_group) {
    if (config.sbs_count >= 2) covers.push_back({(SbsSet{1} << config.sbs_count) - 1});
  } else {
    covers = enumerate_covers(config.sbs_count, options.max_groups);
  }
  // The all-uncoded degenerate goes first, as the empty cover.
  if (!options.pure_coded) covers.insert(covers.begin(), Cover{});

  double work = 0.0;
  for (const auto& cover : covers) work += estimate_cover(s, cover, options);
  check_budget(who, work, options.work_budget);

  std::vector<CoverOutcome> outcomes(covers.size());
  const long n = static_cast<long>(covers.size());
  if (options.execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) outcomes[i] = search_cover(s, covers[i], options);
  } else {
    for (long i = 0; i < n; ++i) outcomes[i] = search_cover(s, covers[i], options);
  }

  long best = -1;
  SearchResult<HeteroPlacement> res;
  for (long i = 0; i < n; ++i) {
    res.evaluated += outcomes[i].evaluated;
    if (!outcomes[i].best.found) continue;
    if (best < 0 || detail::strictly_better(outcomes[i].best.r, outcomes[best].best.r)) best = i;
  }
  if (best < 0)
    throw std::invalid_argument(std::string(who) + ": no feasible placement (pure coded needs "
                                "a cover whose capacities fill every cache)");
  res.best = to_placement(s, covers[best], outcomes[best].best);
  res.load = total_load(config, pop, res.best);
  res.pruned = options.prune_contents;
  return res;
}

SearchResult<HeteroPlacement> optimize_pure_uncoded_hetero(const SystemConfig& config,
                                                           const PopularityMatrix& pop,
                                                           double work_budget) {
  constexpr const char* who = "optimize_pure_uncoded";
  check_inputs(config, pop, who);
  check_bound(who, "K", config.sbs_count, kUncodedMaxSbs);
  check_bound(who, "N", config.content_count, kUncodedMaxContents);
  const Scenario s(config, pop);
  const std::vector<ContentSet> covered(s.sbs, 0);
  const std::vector<int> capacity(s.sbs, s.cache);
  check_budget(who, uncoded_leaf_bound(s, covered, capacity), work_budget);
  const auto y = best_uncoded(s, covered, capacity);
  SearchResult<HeteroPlacement> res;
  res.best = to_placement(s, Cover{}, Leaf{y.r2, {}, {}, y.y, true});
  res.load = total_load(config, pop, res.best);
  res.evaluated = y.leaves;
  return res;
}

}  // namespace hcache
