#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hcache/oracle.hpp"
#include "hcache/simulator.hpp"

using namespace hcache;
using namespace hcache::oracle;

TEST(ExactDistinct, TwoUniformContents) {
  std::vector<double> p{0.5, 0.5};
  auto d = exact_distinct_distribution(p, 2);
  EXPECT_DOUBLE_EQ(d.probs[1], 0.5);
  EXPECT_DOUBLE_EQ(d.probs[2], 0.5);
}

TEST(ExactDistinct, Trivial) {
  std::vector<double> p{0.3, 0.2};
  EXPECT_EQ(exact_distinct_distribution(p, 0).probs, (std::vector<double>{1.0}));
  std::vector<double> one{1.0};
  auto d = exact_distinct_distribution(one, 5);
  EXPECT_DOUBLE_EQ(d.probs[1], 1.0);
}

TEST(ExactDistinct, RefusesLargeInstances) {
  std::vector<double> p(9, 0.1);
  EXPECT_THROW(exact_distinct_distribution(p, 8), InstanceTooLarge);
}

TEST(ExactQueue, Examples) {
  std::vector<double> ones(5, 1.0);
  EXPECT_DOUBLE_EQ(exact_queue_distribution(ones).probs[5], 1.0);
  std::vector<double> half(3, 0.5);
  auto q = exact_queue_distribution(half);
  for (int k = 0; k <= 3; ++k)
    EXPECT_NEAR(q.probs[k], std::tgamma(4) / std::tgamma(k + 1) / std::tgamma(4 - k) / 8, 1e-15);
  std::vector<double> mixed{1.0, 0.0};
  EXPECT_DOUBLE_EQ(exact_queue_distribution(mixed).probs[1], 1.0);
  std::vector<double> big(21, 0.5);
  EXPECT_THROW(exact_queue_distribution(big), InstanceTooLarge);
}

TEST(ExactLoad, DeterministicDemandsEqualRunSlot) {
  SystemConfig cfg{3, 26, 5, {2, 1, 2}};
  std::vector<double> col(26, 0.0);
  col[4] = 1.0;
  auto pop = PopularityMatrix::from_columns({col, col, col});
  std::vector<double> col2(26, 0.0);
  col2[20] = 1.0;
  auto pop2 = PopularityMatrix::from_columns({col, col2, col});
  HeteroPlacement p{{{{0, 1, 2}, 1, {0, 1, 2}}}, {{3, 4, 5, 6}, {3, 4, 5, 6}, {3, 4, 5, 6}}};
  for (const auto* m : {&pop, &pop2}) {
    auto exact = exact_expected_load(cfg, *m, p);
    EXPECT_EQ(exact.outcomes, 1);
    DemandMatrix d{{{4, 4}, {m == &pop ? 4 : 20}, {4, 4}}};
    auto o = run_slot(d, DeliveryPlan(cfg, *m, p));
    EXPECT_DOUBLE_EQ(exact.r, o.total());
  }
}

TEST(ExactLoad, FullCacheIsZero) {
  SystemConfig cfg{2, 3, 3, {2, 2}};
  auto pop = zipf_popularity(3, 1.0, 2);
  EXPECT_EQ(exact_expected_load(cfg, pop, HybridPlacement{3, 3}).r, 0.0);
}

TEST(ExactLoad, RefusesLargeInstances) {
  SystemConfig cfg{10, 1000, 100, std::vector<int>(10, 10)};
  auto pop = zipf_popularity(1000, 1.0, 10);
  EXPECT_THROW(exact_expected_load(cfg, pop, HybridPlacement{37, 352}), InstanceTooLarge);
}

TEST(ExactLoad, MatchesAnalysisWhenCodedSetIsUniform) {
  // Uniform popularity: both the distinct-request and queue recursions are exact.
  SystemConfig cfg{3, 6, 2, {2, 1, 3}};
  auto pop = zipf_popularity(6, 0.0, 3);
  for (HybridPlacement p : {HybridPlacement{0, 3}, {1, 4}, {0, 6}, {2, 2}}) {
    ASSERT_TRUE(validate(cfg, pop, p).empty());
    EXPECT_NEAR(exact_expected_load(cfg, pop, p).r, total_load(cfg, pop, p).r, 1e-12);
  }
}

TEST(ExactLoad, UncodedTermIsExactForAnyPopularity) {
  SystemConfig cfg{4, 4, 2, {1, 1, 1, 1}};
  auto pop = PopularityMatrix::from_columns(
      {{.3, .2, .5, 0}, {.2, .3, .5, 0}, {.3, .2, 0, .5}, {.2, .3, 0, .5}});
  HeteroPlacement unc{{}, {{0, 2}, {0, 2}, {0, 3}, {0, 3}}};
  auto e = exact_expected_load(cfg, pop, unc);
  EXPECT_NEAR(e.r, 0.6864, 1e-12);
  EXPECT_EQ(e.r1, 0.0);
}

TEST(ExactLoad, SimulationWithinThreeStandardErrors) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    SystemConfig cfg{3, 5, 2, {}};
    for (int c = 0; c < 3; ++c) cfg.users.push_back(1 + static_cast<int>(rng() % 3));
    auto pop = zipf_popularity(5, 0.3 * trial, 3);
    HybridPlacement p = trial % 2 ? HybridPlacement{1, 4} : HybridPlacement{0, 3};
    ASSERT_TRUE(validate(cfg, pop, p).empty());
    const double exact = exact_expected_load(cfg, pop, p).r;
    auto sim = simulate(cfg, pop, p, {20000, 100u + trial, false, Execution::parallel});
    EXPECT_NEAR(sim.mean_r, exact, 3 * sim.se_r + 1e-12) << "trial " << trial;
  }
}
