#include <gtest/gtest.h>

#include <cmath>

#include "hcache/binomial.hpp"
#include "hcache/simulator.hpp"

using namespace hcache;

namespace {

SystemConfig walkthrough_config() { return {3, 26, 5, {8, 4, 6}}; }

DemandMatrix letters(std::vector<std::string> rows) {
  DemandMatrix d;
  for (const auto& r : rows) {
    d.per_sbs.emplace_back();
    for (char ch : r) d.per_sbs.back().push_back(ch - 'A');
  }
  return d;
}

}  // namespace

TEST(Seeds, SlotSeedsDifferAndAreStable) {
  EXPECT_NE(slot_seed(1, 0), slot_seed(1, 1));
  EXPECT_NE(slot_seed(1, 0), slot_seed(2, 0));
  EXPECT_EQ(slot_seed(9, 4), slot_seed(9, 4));
}

TEST(Sampling, ReplayIsIdentical) {
  SystemConfig cfg{3, 50, 5, {4, 7, 2}};
  auto pop = zipf_popularity(50, 0.9, 3);
  EXPECT_EQ(sample_demands(pop, cfg, 42).per_sbs, sample_demands(pop, cfg, 42).per_sbs);
  EXPECT_NE(sample_demands(pop, cfg, 42).per_sbs, sample_demands(pop, cfg, 43).per_sbs);
}

TEST(Sampling, PointMassColumn) {
  SystemConfig cfg{2, 3, 1, {5, 5}};
  auto pop = PopularityMatrix::replicated({1.0, 0.0, 0.0}, 2);
  for (const auto& row : sample_demands(pop, cfg, 7).per_sbs)
    for (int n : row) EXPECT_EQ(n, 0);
}

TEST(Sampling, FrequencyOfMostPopularContent) {
  SystemConfig cfg{1, 1000, 0, {100000}};
  auto pop = zipf_popularity(1000, 1.0, 1);
  auto d = sample_demands(pop, cfg, 2024);
  const double p1 = pop.prob(0, 0);
  double hits = 0;
  for (int n : d.per_sbs[0]) hits += n == 0;
  const double se = std::sqrt(p1 * (1 - p1) / 1e5);
  EXPECT_NEAR(hits / 1e5, p1, 3 * se);
}

TEST(RunSlot, WalkthroughQueues) {
  auto cfg = walkthrough_config();
  auto pop = zipf_popularity(26, 1.0, 3);
  DeliveryPlan plan(cfg, pop, HybridPlacement{3, 9});
  auto o = run_slot(letters({"ADEFJBDK", "CGHJ", "AIZAIL"}), plan);
  ASSERT_EQ(o.step_occupancy.size(), 1u);
  EXPECT_EQ(o.step_occupancy[0], (std::vector<int>{3, 2, 1}));
  EXPECT_EQ(o.queue_lengths[0], (std::vector<int>{3, 2, 1}));
  EXPECT_EQ(o.steps, 3);
  EXPECT_EQ(o.local_hits, 5);
  EXPECT_EQ(o.uncoded_broadcasts, 4);
  EXPECT_EQ(o.coded_requests + o.uncoded_requests + o.local_hits, 18);
  EXPECT_NEAR(o.coded_load, 1.0 + 1.0 + 2.0 / 3.0, 1e-12);
}

TEST(RunSlot, AllLocal) {
  auto cfg = walkthrough_config();
  auto pop = zipf_popularity(26, 1.0, 3);
  DeliveryPlan plan(cfg, pop, HybridPlacement{3, 9});
  auto o = run_slot(letters({"AAAAAAAA", "BBBB", "CCCCCC"}), plan);
  EXPECT_EQ(o.total(), 0.0);
  EXPECT_EQ(o.steps, 0);
}

TEST(RunSlot, DuplicatesCollapse) {
  auto cfg = walkthrough_config();
  auto pop = zipf_popularity(26, 1.0, 3);
  DeliveryPlan plan(cfg, pop, HybridPlacement{3, 9});
  auto o = run_slot(letters({"EEEEEEEE", "", "ZZZZZZ"}), plan);
  EXPECT_EQ(o.queue_lengths[0], (std::vector<int>{1, 0, 0}));
  EXPECT_EQ(o.uncoded_broadcasts, 1);
  EXPECT_NEAR(o.coded_load, 2.0 / 3.0, 1e-12);
}

TEST(RunSlot, HeteroLowestGroupWins) {
  SystemConfig cfg{3, 4, 2, {1, 1, 1}};
  auto pop = zipf_popularity(4, 0.0, 3);
  HeteroPlacement p{{{{0, 1}, 1, {0, 1}}, {{0, 2}, 1, {0, 1}}}, {{}, {2}, {2}}};
  ASSERT_TRUE(validate(cfg, pop, p).empty());
  DeliveryPlan plan(cfg, pop, p);
  EXPECT_EQ(plan.route(0, 0), 0);
  EXPECT_EQ(plan.route(0, 2), 1);
  EXPECT_EQ(plan.route(2, 1), DeliveryPlan::kLocal);
  EXPECT_EQ(plan.route(3, 0), DeliveryPlan::kUncoded);
}

TEST(RunSlot, CodedLoadIsSumOfStepLoads) {
  SystemConfig cfg{4, 40, 6, {5, 3, 6, 2}};
  auto pop = zipf_popularity(40, 0.7, 4);
  HybridPlacement p{2, 10};
  ASSERT_TRUE(validate(cfg, pop, p).empty());
  DeliveryPlan plan(cfg, pop, p);
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto o = run_slot(sample_demands(pop, cfg, s), plan);
    double expect = 0.0;
    for (int k : o.step_occupancy[0]) expect += coded_step_load(4, 2, k, 8, 4);
    EXPECT_NEAR(o.coded_load, expect, 1e-12);
    EXPECT_LE(o.steps, cfg.max_users());
    for (std::size_t c = 0; c < 4; ++c)
      EXPECT_LE(o.queue_lengths[0][c], std::min(cfg.users[c], 8));
  }
}

TEST(Simulate, SerialEqualsParallel) {
  SystemConfig cfg{10, 1000, 100, std::vector<int>(10, 10)};
  auto pop = zipf_popularity(1000, 1.0, 10);
  SimulationOptions a{500, 3, true, Execution::serial};
  SimulationOptions b{500, 3, true, Execution::parallel};
  auto ra = simulate(cfg, pop, HybridPlacement{37, 352}, a);
  auto rb = simulate(cfg, pop, HybridPlacement{37, 352}, b);
  EXPECT_EQ(ra.mean_r, rb.mean_r);
  EXPECT_EQ(ra.se_r, rb.se_r);
  EXPECT_EQ(ra.trace_csv(), rb.trace_csv());
}

TEST(Simulate, TableRowOneWithinFivePercent) {
  SystemConfig cfg{10, 1000, 100, std::vector<int>(10, 10)};
  auto pop = zipf_popularity(1000, 1.0, 10);
  auto sim = simulate(cfg, pop, HybridPlacement{37, 352}, {});
  const double r = total_load(cfg, pop, HybridPlacement{37, 352}).r;
  EXPECT_LT(std::abs(sim.mean_r - r) / r, 0.05);
}

TEST(Simulate, PureUncodedHasNoCodedLoad) {
  SystemConfig cfg{4, 50, 5, {3, 3, 3, 3}};
  auto pop = zipf_popularity(50, 1.0, 4);
  auto sim = simulate(cfg, pop, HybridPlacement{5, 5}, {300, 1, false, Execution::serial});
  EXPECT_EQ(sim.mean_r1, 0.0);
}

TEST(Simulate, EarlierSlotsUnchangedWhenSlotCountGrows) {
  SystemConfig cfg{3, 20, 3, {3, 3, 3}};
  auto pop = zipf_popularity(20, 1.0, 3);
  auto a = simulate(cfg, pop, HybridPlacement{1, 7}, {100, 8, true, Execution::serial});
  auto b = simulate(cfg, pop, HybridPlacement{1, 7}, {200, 8, true, Execution::serial});
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(a.trace[i].r(), b.trace[i].r());
}

TEST(Simulate, StandardErrorShrinksWithSlots) {
  SystemConfig cfg{4, 100, 10, {5, 5, 5, 5}};
  auto pop = zipf_popularity(100, 0.8, 4);
  auto a = simulate(cfg, pop, HybridPlacement{2, 34}, {4000, 1, false, Execution::parallel});
  auto b = simulate(cfg, pop, HybridPlacement{2, 34}, {8000, 1, false, Execution::parallel});
  EXPECT_NEAR(b.se_r / a.se_r, 1.0 / std::sqrt(2.0), 0.08);
}

TEST(Simulate, UniformCodedSetWithinThreeSigma) {
  // Uniform popularity makes the distinct-request recursion exact.
  for (auto [k, z] : {std::pair{3, 4}, {6, 2}, {10, 10}}) {
    SystemConfig cfg{k, 20, 4, std::vector<int>(k, z)};
    auto pop = zipf_popularity(20, 0.0, k);
    HybridPlacement p{2, 2 + 2 * k / 2};
    if (!p.replication(cfg)) p = {0, 4 * k / 2};
    ASSERT_TRUE(validate(cfg, pop, p).empty()) << k;
    auto sim = simulate(cfg, pop, p, {4000, 77, false, Execution::parallel});
    const double r = total_load(cfg, pop, p).r;
    EXPECT_NEAR(sim.mean_r, r, 3 * sim.se_r + 1e-12) << "K=" << k;
  }
}

TEST(Simulate, TraceCsvHeader) {
  SystemConfig cfg{2, 4, 1, {1, 1}};
  auto pop = zipf_popularity(4, 1.0, 2);
  auto sim = simulate(cfg, pop, HybridPlacement{0, 2}, {3, 1, true, Execution::serial});
  auto csv = sim.trace_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "slot,r1,r2,r,steps,local_hits");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_THROW(simulate(cfg, pop, HybridPlacement{0, 2}, {0, 1, false, Execution::serial}),
               std::invalid_argument);
}

TEST(Codec, FourSbsReplicationTwo) {
  auto r = codec_verify(4, 2, {{0, 0}, {1, 1}, {2, 2}, {3, 3}});
  EXPECT_TRUE(r.decoded);
  EXPECT_EQ(r.messages, 4);
  EXPECT_NEAR(r.load, 4.0 / 6.0, 1e-15);
}

TEST(Codec, OneRequester) {
  auto r = codec_verify(3, 1, {{1, 5}});
  EXPECT_TRUE(r.decoded);
  EXPECT_EQ(r.messages, 2);
  EXPECT_EQ(r.expected_messages, 2);
}

TEST(Codec, NoRequesters) {
  auto r = codec_verify(5, 2, {});
  EXPECT_TRUE(r.decoded);
  EXPECT_EQ(r.messages, 0);
}

TEST(Codec, RejectsTwoContentsAtOneSbs) {
  EXPECT_THROW(codec_verify(3, 1, {{0, 1}, {0, 2}}), std::invalid_argument);
  EXPECT_THROW(codec_verify(3, 4, {}), std::invalid_argument);
}

TEST(Codec, AgreesWithStepLoad) {
  for (int k = 2; k <= 6; ++k)
    for (int t = 1; t < k; ++t)
      for (int req = 0; req <= k; ++req) {
        std::vector<CodecRequest> r;
        for (int c = 0; c < req; ++c) r.push_back({c, c});
        auto rep = codec_verify(k, t, r);
        EXPECT_NEAR(rep.load, coded_step_load(k, t, req, 1 << 20, 0), 1e-12);
      }
}
