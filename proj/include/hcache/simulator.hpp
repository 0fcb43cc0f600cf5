#pragma once

// Monte Carlo delivery phase. Each slot draws Z_c i.i.d. requests per SBS,
// classifies them against the placement, and counts the shared-link load the
// server actually needs: coded steps over the deduplicated per-SBS queues
// plus one broadcast per distinct uncached content.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hcache/analysis.hpp"
#include "hcache/model.hpp"

namespace hcache {

enum class Execution { serial, parallel };

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Independent seed for slot `slot` of a run seeded with `seed`; the first
/// slots of a run do not change when the slot count grows.
std::uint64_t slot_seed(std::uint64_t seed, std::uint64_t slot);

/// Placement flattened into a per-(content, SBS) routing table.
class DeliveryPlan {
public:
  static constexpr int kLocal = -1;
  static constexpr int kUncoded = -2;

  DeliveryPlan(const SystemConfig& config, const PopularityMatrix& pop,
               const HybridPlacement& placement);
  DeliveryPlan(const SystemConfig& config, const PopularityMatrix& pop,
               const HeteroPlacement& placement);
  DeliveryPlan(const SystemConfig& config, const PopularityMatrix& pop,
               const Placement& placement);

  struct Cluster {
    std::vector<int> members;
    int replication = 0;
    int library = 0;
    int cache = 0;
  };

  /// kLocal, kUncoded, or the index of the coded cluster serving it. A
  /// content coded in several of the SBS's groups goes to the lowest index.
  int route(int content, int sbs) const {
    return routes_[static_cast<std::size_t>(sbs) * content_count_ + content];
  }
  const std::vector<Cluster>& clusters() const { return clusters_; }
  int sbs_count() const { return sbs_count_; }
  int content_count() const { return content_count_; }

private:
  void init(const SystemConfig& config, const HeteroPlacement& placement);

  int sbs_count_ = 0;
  int content_count_ = 0;
  std::vector<int> routes_;
  std::vector<Cluster> clusters_;
};

struct SlotOutcome {
  /// Distinct coded requests per cluster member, in cluster member order.
  std::vector<std::vector<int>> queue_lengths;
  /// Non-empty queues at each coded step, per cluster.
  std::vector<std::vector<int>> step_occupancy;
  int steps = 0;  // coded steps of the longest cluster
  double coded_load = 0.0;
  int uncoded_broadcasts = 0;
  int local_hits = 0;
  /// Request counts routed to the coded queues and to the uncoded queue.
  int coded_requests = 0;
  int uncoded_requests = 0;

  double total() const { return coded_load + uncoded_broadcasts; }
};

/// Z_c requests per SBS drawn from its popularity column.
DemandMatrix sample_demands(const PopularityMatrix& pop, const SystemConfig& config,
                            std::uint64_t seed);

SlotOutcome run_slot(const DemandMatrix& demands, const DeliveryPlan& plan);

struct SimulationOptions {
  std::size_t slots = 2000;
  std::uint64_t seed = 1;
  bool keep_trace = false;
  Execution execution = Execution::parallel;
};

struct SlotRecord {
  double r1 = 0.0;
  double r2 = 0.0;
  int steps = 0;
  int local_hits = 0;
  double r() const { return r1 + r2; }
};

struct SimulationReport {
  std::size_t slots = 0;
  double mean_r1 = 0.0, se_r1 = 0.0;
  double mean_r2 = 0.0, se_r2 = 0.0;
  double mean_r = 0.0, se_r = 0.0;
  std::vector<SlotRecord> trace;  // filled when keep_trace is set

  /// One row per slot: slot,r1,r2,r,steps,local_hits.
  std::string trace_csv() const;
};

/// Averages `slots` independent slots. Serial and parallel execution give
/// bit-identical reports.
SimulationReport simulate(const SystemConfig& config, const PopularityMatrix& pop,
                          const Placement& placement, const SimulationOptions& options);

/// One requesting SBS and its content for codec_verify.
struct CodecRequest {
  int sbs = 0;
  int content = 0;
};

struct CodecReport {
  bool decoded = false;     // every requester rebuilt its content bit-exactly
  int requesters = 0;       // k
  long messages = 0;        // XOR multicasts sent
  long expected_messages = 0;  // C(K,T+1) - C(K-k,T+1)
  std::size_t subfile_bytes = 0;
  double load = 0.0;        // messages / C(K,T), units of F
};

/// Materializes the subfile placement on K SBSs with replication T over
/// random contents, multicasts one XOR per (T+1)-subset with at least one
/// requester, and decodes at every requester. Requests must name distinct
/// contents, at most one per SBS; throws std::invalid_argument otherwise.
CodecReport codec_verify(int sbs_count, int replication, const std::vector<CodecRequest>& requests,
                         std::size_t subfile_bytes = 8, std::uint64_t seed = 7);

}  // namespace hcache
