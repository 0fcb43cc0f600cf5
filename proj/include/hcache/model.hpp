#pragma once

// Domain types shared by the analytical engine, the optimizer and the
// simulator. Contents and SBSs are 0-based everywhere in the library; the
// scenario file format is 1-based and converts on load.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hcache {

/// Absolute tolerance on the per-SBS probability sum.
inline constexpr double kProbabilitySumTolerance = 1e-9;

/// Thrown when an instance exceeds the bounds of an exhaustive routine.
class InstanceTooLarge : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Network topology and capacities. Loads are reported in units of
/// `content_bits`; the size only scales bit counts.
struct SystemConfig {
  int sbs_count = 1;           // K
  int content_count = 1;       // N
  int cache_capacity = 0;      // M, whole contents per SBS
  std::vector<int> users;      // Z_c, one entry per SBS
  double content_bits = 1.0;   // F

  int max_users() const;       // Z_max, also the bound on coded steps
  long total_users() const;

  /// Violations of the basic invariants; empty when well-formed.
  std::vector<std::string> check() const;
};

/// Request probabilities p(n, c): N contents by K SBSs.
class PopularityMatrix {
public:
  PopularityMatrix() = default;

  /// One column per SBS, each of length N. Throws std::invalid_argument on
  /// entries outside [0, 1], ragged columns, or sums off by more than 1e-9.
  static PopularityMatrix from_columns(std::vector<std::vector<double>> columns);

  /// The same distribution replicated across `sbs_count` columns.
  static PopularityMatrix replicated(std::vector<double> column, int sbs_count);

  int content_count() const { return content_count_; }
  int sbs_count() const { return sbs_count_; }

  double prob(int content, int sbs) const {
    return data_[static_cast<std::size_t>(sbs) * content_count_ + content];
  }
  std::span<const double> column(int sbs) const;

  /// True iff every column is identical.
  bool homogeneous() const { return homogeneous_; }

  /// Contents by non-increasing popularity of column 0, ties by index.
  std::span<const int> sorted_order() const { return order_; }
  /// Position of `content` in sorted_order().
  int rank_of(int content) const { return rank_[content]; }
  /// Column 0 in sorted order (p_1 >= p_2 >= ...).
  std::span<const double> sorted_probs() const { return sorted_; }

private:
  void finish();

  int content_count_ = 0;
  int sbs_count_ = 0;
  std::vector<double> data_;  // column-major
  bool homogeneous_ = true;
  std::vector<int> order_;
  std::vector<int> rank_;
  std::vector<double> sorted_;
};

/// p_n proportional to n^-alpha, identical for every SBS.
PopularityMatrix zipf_popularity(int content_count, double alpha, int sbs_count);

/// Three-group placement over the sorted view: ranks [0, full) cached whole
/// at every SBS, ranks [full, cached) coded, the rest not cached.
struct HybridPlacement {
  int full = 0;    // M1
  int cached = 0;  // N1

  /// K(M - M1)/(N1 - M1) when it is a positive integer and the coded part
  /// holds more contents than the cache (N1 > M).
  std::optional<int> replication(const SystemConfig& config) const;
  bool pure_uncoded(const SystemConfig& config) const {
    return cached == config.cache_capacity;
  }

  friend bool operator==(const HybridPlacement&, const HybridPlacement&) = default;
};

/// One coded-delivery cluster of the SBS-dependent scheme.
struct SbsGroup {
  std::vector<int> members;   // sorted SBS indices, at least two
  int capacity = 1;           // M_g, reserved at every member
  std::vector<int> contents;  // sorted, X(n, g) = 1

  int size() const { return static_cast<int>(members.size()); }
  int library() const { return static_cast<int>(contents.size()); }
  bool contains_sbs(int sbs) const;
  bool contains_content(int content) const;
  /// K_g M_g / N_g when it is a positive integer.
  std::optional<int> replication() const;

  friend bool operator==(const SbsGroup&, const SbsGroup&) = default;
};

/// Placement of the SBS-dependent scheme. An empty group list is the
/// all-uncoded degenerate, in which case every SBS fills its cache uncoded.
struct HeteroPlacement {
  std::vector<SbsGroup> groups;
  std::vector<std::vector<int>> uncoded;  // per SBS, Y(n, c) = 1

  int uncoded_capacity(int sbs) const {
    return static_cast<int>(uncoded[sbs].size());
  }
  bool cached_uncoded(int content, int sbs) const;
  /// Cache held by groups at `sbs`: sum of M_g over groups containing it.
  int coded_capacity(int sbs) const;
  /// Compact text form, e.g. "G{1,2,3,4|M=1|W1,W2};Y1{W3};..." (1-based).
  std::string describe() const;

  friend bool operator==(const HeteroPlacement&, const HeteroPlacement&) = default;
};

using Placement = std::variant<HybridPlacement, HeteroPlacement>;

/// Requested contents per SBS; duplicates allowed.
struct DemandMatrix {
  std::vector<std::vector<int>> per_sbs;
};

/// Every constraint the placement violates. Empty iff valid.
std::vector<std::string> validate(const SystemConfig& config,
                                  const PopularityMatrix& pop,
                                  const HybridPlacement& placement);
std::vector<std::string> validate(const SystemConfig& config,
                                  const PopularityMatrix& pop,
                                  const HeteroPlacement& placement);
std::vector<std::string> validate(const SystemConfig& config,
                                  const PopularityMatrix& pop,
                                  const Placement& placement);

/// The hybrid placement expressed as a single all-SBS group over the
/// popularity-sorted contents.
HeteroPlacement to_hetero(const SystemConfig& config, const PopularityMatrix& pop,
                          const HybridPlacement& placement);

/// Sample standard deviation of the user counts.
double users_stddev(const SystemConfig& config);

}  // namespace hcache
