#include "hcache/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hcache {

int SystemConfig::max_users() const {
  return users.empty() ? 0 : *std::max_element(users.begin(), users.end());
}

long SystemConfig::total_users() const {
  return std::accumulate(users.begin(), users.end(), 0L);
}

std::vector<std::string> SystemConfig::check() const {
  std::vector<std::string> out;
  if (sbs_count < 1) out.emplace_back("K >= 1");
  if (content_count < 1) out.emplace_back("N >= 1");
  if (cache_capacity < 0 || cache_capacity > content_count)
    out.emplace_back("0 <= M <= N");
  if (static_cast<int>(users.size()) != sbs_count)
    out.emplace_back("Z must have one entry per SBS (length K)");
  if (std::any_of(users.begin(), users.end(), [](int z) { return z < 0; }))
    out.emplace_back("Z_c >= 0");
  if (!(content_bits > 0.0)) out.emplace_back("F > 0");
  return out;
}

PopularityMatrix PopularityMatrix::from_columns(std::vector<std::vector<double>> columns) {
  if (columns.empty()) throw std::invalid_argument("popularity: no SBS columns");
  PopularityMatrix m;
  m.sbs_count_ = static_cast<int>(columns.size());
  m.content_count_ = static_cast<int>(columns.front().size());
  if (m.content_count_ == 0) throw std::invalid_argument("popularity: empty column");
  m.data_.reserve(static_cast<std::size_t>(m.sbs_count_) * m.content_count_);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const auto& col = columns[c];
    if (static_cast<int>(col.size()) != m.content_count_)
      throw std::invalid_argument("popularity: column " + std::to_string(c + 1) +
                                  " has a different length");
    double sum = 0.0;
    for (double p : col) {
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("popularity: entry outside [0, 1] in column " +
                                    std::to_string(c + 1));
      sum += p;
    }
    if (std::abs(sum - 1.0) > kProbabilitySumTolerance)
      throw std::invalid_argument("popularity: column " + std::to_string(c + 1) +
                                  " sums to " + std::to_string(sum));
    m.data_.insert(m.data_.end(), col.begin(), col.end());
  }
  m.finish();
  return m;
}

PopularityMatrix PopularityMatrix::replicated(std::vector<double> column, int sbs_count) {
  if (sbs_count < 1) throw std::invalid_argument("popularity: K >= 1");
  return from_columns(std::vector<std::vector<double>>(sbs_count, column));
}

std::span<const double> PopularityMatrix::column(int sbs) const {
  return {data_.data() + static_cast<std::size_t>(sbs) * content_count_,
          static_cast<std::size_t>(content_count_)};
}

void PopularityMatrix::finish() {
  auto first = column(0);
  homogeneous_ = true;
  for (int c = 1; c < sbs_count_ && homogeneous_; ++c) {
    auto col = column(c);
    homogeneous_ = std::equal(col.begin(), col.end(), first.begin());
  }
  order_.resize(content_count_);
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(),
                   [&](int a, int b) { return first[a] > first[b]; });
  rank_.resize(content_count_);
  sorted_.resize(content_count_);
  for (int r = 0; r < content_count_; ++r) {
    rank_[order_[r]] = r;
    sorted_[r] = first[order_[r]];
  }
}

PopularityMatrix zipf_popularity(int content_count, double alpha, int sbs_count) {
  if (content_count < 1) throw std::invalid_argument("zipf: N >= 1");
  if (!(alpha >= 0.0)) throw std::invalid_argument("zipf: alpha >= 0");
  std::vector<double> p(content_count);
  double norm = 0.0;
  for (int n = 0; n < content_count; ++n) {
    p[n] = std::pow(1.0 / (n + 1), alpha);
    norm += p[n];
  }
  for (double& v : p) v /= norm;
  return PopularityMatrix::replicated(std::move(p), sbs_count);
}

std::optional<int> HybridPlacement::replication(const SystemConfig& config) const {
  const int coded_cache = config.cache_capacity - full;
  const int coded_library = cached - full;
  if (cached <= config.cache_capacity || coded_cache <= 0 || coded_library <= 0)
    return std::nullopt;
  const long num = static_cast<long>(config.sbs_count) * coded_cache;
  if (num % coded_library != 0) return std::nullopt;
  return static_cast<int>(num / coded_library);
}

bool SbsGroup::contains_sbs(int sbs) const {
  return std::binary_search(members.begin(), members.end(), sbs);
}

bool SbsGroup::contains_content(int content) const {
  return std::binary_search(contents.begin(), contents.end(), content);
}

std::optional<int> SbsGroup::replication() const {
  if (contents.empty() || capacity < 1) return std::nullopt;
  const long num = static_cast<long>(size()) * capacity;
  if (num % library() != 0 || num / library() < 1) return std::nullopt;
  return static_cast<int>(num / library());
}

bool HeteroPlacement::cached_uncoded(int content, int sbs) const {
  const auto& y = uncoded[sbs];
  return std::find(y.begin(), y.end(), content) != y.end();
}

int HeteroPlacement::coded_capacity(int sbs) const {
  int total = 0;
  for (const auto& g : groups)
    if (g.contains_sbs(sbs)) total += g.capacity;
  return total;
}

std::string HeteroPlacement::describe() const {
  std::ostringstream os;
  for (const auto& g : groups) {
    os << "G{";
    for (std::size_t i = 0; i < g.members.size(); ++i)
      os << (i ? "," : "") << g.members[i] + 1;
    os << "|M=" << g.capacity << "|";
    for (std::size_t i = 0; i < g.contents.size(); ++i)
      os << (i ? "," : "") << 'W' << g.contents[i] + 1;
    os << "};";
  }
  os << "Y{";
  for (std::size_t c = 0; c < uncoded.size(); ++c) {
    if (c) os << '|';
    auto y = uncoded[c];
    std::sort(y.begin(), y.end());
    for (std::size_t i = 0; i < y.size(); ++i) os << (i ? "," : "") << 'W' << y[i] + 1;
  }
  os << '}';
  return os.str();
}

namespace {

void check_shapes(const SystemConfig& config, const PopularityMatrix& pop,
                  std::vector<std::string>& out) {
  auto cfg = config.check();
  out.insert(out.end(), cfg.begin(), cfg.end());
  if (pop.content_count() != config.content_count || pop.sbs_count() != config.sbs_count)
    out.emplace_back("popularity matrix must be N x K");
}

bool sorted_unique_in_range(const std::vector<int>& v, int bound) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0 || v[i] >= bound) return false;
    if (i > 0 && v[i] <= v[i - 1]) return false;
  }
  return true;
}

}  // namespace

std::vector<std::string> validate(const SystemConfig& config, const PopularityMatrix& pop,
                                  const HybridPlacement& placement) {
  std::vector<std::string> out;
  check_shapes(config, pop, out);
  if (!pop.homogeneous())
    out.emplace_back("hybrid placement requires SBS-independent popularity");
  const int m = config.cache_capacity;
  const int m1 = placement.full;
  const int n1 = placement.cached;
  if (!(0 <= m1 && m1 <= m && m <= n1 && n1 <= config.content_count)) {
    out.emplace_back("0 <= M1 <= M <= N1 <= N");
    return out;
  }
  if (n1 == m) {
    if (m1 != m) out.emplace_back("N1=M requires M1=M");
  } else if (!placement.replication(config)) {
    out.emplace_back("T=K(M-M1)/(N1-M1) must be a positive integer");
  }
  return out;
}

std::vector<std::string> validate(const SystemConfig& config, const PopularityMatrix& pop,
                                  const HeteroPlacement& placement) {
  std::vector<std::string> out;
  check_shapes(config, pop, out);
  const int k = config.sbs_count;
  const int n = config.content_count;
  if (static_cast<int>(placement.uncoded.size()) != k) {
    out.emplace_back("uncoded contents must be listed for every SBS");
    return out;
  }
  for (int c = 0; c < k; ++c) {
    auto y = placement.uncoded[c];
    std::sort(y.begin(), y.end());
    if (!sorted_unique_in_range(y, n))
      out.emplace_back("SBS " + std::to_string(c + 1) +
                       ": uncoded contents must be distinct and within [1, N]");
  }
  std::vector<bool> covered(k, false);
  for (std::size_t g = 0; g < placement.groups.size(); ++g) {
    const auto& grp = placement.groups[g];
    const std::string tag = "group " + std::to_string(g + 1) + ": ";
    if (grp.size() < 2) out.emplace_back(tag + "needs at least two SBSs");
    if (!sorted_unique_in_range(grp.members, k))
      out.emplace_back(tag + "members must be sorted, distinct and within [1, K]");
    if (!sorted_unique_in_range(grp.contents, n))
      out.emplace_back(tag + "contents must be sorted, distinct and within [1, N]");
    if (grp.capacity < 1 || grp.capacity > config.cache_capacity)
      out.emplace_back(tag + "1 <= M_g <= M");
    if (!(grp.capacity < grp.library() && grp.library() <= n))
      out.emplace_back(tag + "M_g < N_g <= N");
    else if (!grp.replication())
      out.emplace_back(tag + "T_g=K_g*M_g/N_g must be a positive integer");
    for (int c : grp.members)
      if (c >= 0 && c < k) covered[c] = true;
  }
  if (!placement.groups.empty() &&
      std::find(covered.begin(), covered.end(), false) != covered.end())
    out.emplace_back("cover: groups must include every SBS");
  for (int c = 0; c < k; ++c) {
    if (placement.uncoded_capacity(c) + placement.coded_capacity(c) != config.cache_capacity)
      out.emplace_back("cache budget: SBS " + std::to_string(c + 1) +
                       " must satisfy M_1c + sum_g M_g S_cg = M");
  }
  return out;
}

std::vector<std::string> validate(const SystemConfig& config, const PopularityMatrix& pop,
                                  const Placement& placement) {
  return std::visit([&](const auto& p) { return validate(config, pop, p); }, placement);
}

HeteroPlacement to_hetero(const SystemConfig& config, const PopularityMatrix& pop,
                          const HybridPlacement& placement) {
  HeteroPlacement out;
  auto order = pop.sorted_order();
  std::vector<int> full(order.begin(), order.begin() + placement.full);
  std::sort(full.begin(), full.end());
  out.uncoded.assign(config.sbs_count, full);
  if (placement.cached > placement.full && !placement.pure_uncoded(config)) {
    SbsGroup g;
    g.members.resize(config.sbs_count);
    std::iota(g.members.begin(), g.members.end(), 0);
    g.capacity = config.cache_capacity - placement.full;
    g.contents.assign(order.begin() + placement.full, order.begin() + placement.cached);
    std::sort(g.contents.begin(), g.contents.end());
    out.groups.push_back(std::move(g));
  }
  return out;
}

double users_stddev(const SystemConfig& config) {
  const auto& z = config.users;
  if (z.size() < 2) return 0.0;
  const double mean = static_cast<double>(config.total_users()) / z.size();
  double ss = 0.0;
  for (int v : z) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (z.size() - 1));
}

}  // namespace hcache
