#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hcache/model.hpp"

using namespace hcache;

namespace {

bool has(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

PopularityMatrix four_by_four() {
  return PopularityMatrix::from_columns(
      {{.3, .2, .5, 0}, {.2, .3, .5, 0}, {.3, .2, 0, .5}, {.2, .3, 0, .5}});
}

}  // namespace

TEST(Zipf, UniformAtAlphaZero) {
  auto p = zipf_popularity(2, 0.0, 3);
  EXPECT_DOUBLE_EQ(p.prob(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(p.prob(1, 2), 0.5);
  EXPECT_TRUE(p.homogeneous());
}

TEST(Zipf, AlphaOneTwoContents) {
  auto p = zipf_popularity(2, 1.0, 1);
  EXPECT_NEAR(p.prob(0, 0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(p.prob(1, 0), 1.0 / 3.0, 1e-15);
}

TEST(Zipf, ColumnsSumToOne) {
  for (double alpha : {0.0, 0.5, 1.0, 1.6, 2.2, 3.0})
    for (int n : {1, 7, 1000, 10000}) {
      auto p = zipf_popularity(n, alpha, 2);
      for (int c = 0; c < 2; ++c) {
        double s = 0.0;
        for (double v : p.column(c)) s += v;
        EXPECT_NEAR(s, 1.0, 1e-9) << "alpha=" << alpha << " N=" << n;
      }
    }
}

TEST(Zipf, RejectsBadArguments) {
  EXPECT_THROW(zipf_popularity(0, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(zipf_popularity(5, -0.1, 1), std::invalid_argument);
}

TEST(Popularity, SortedViewIsNonIncreasingAndTiesByIndex) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> col(12);
    double sum = 0.0;
    for (auto& v : col) sum += v = static_cast<double>(rng() % 4);
    if (sum == 0.0) continue;
    for (auto& v : col) v /= sum;
    auto p = PopularityMatrix::replicated(col, 2);
    auto sorted = p.sorted_probs();
    auto order = p.sorted_order();
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      EXPECT_GE(sorted[i - 1], sorted[i]);
      if (sorted[i - 1] == sorted[i]) {
        EXPECT_LT(order[i - 1], order[i]);
      }
    }
    for (int n = 0; n < 12; ++n) EXPECT_EQ(order[p.rank_of(n)], n);
  }
}

TEST(Popularity, RejectsMalformedColumns) {
  EXPECT_THROW(PopularityMatrix::from_columns({{0.5, 0.4}}), std::invalid_argument);
  EXPECT_THROW(PopularityMatrix::from_columns({{1.2, -0.2}}), std::invalid_argument);
  EXPECT_THROW(PopularityMatrix::from_columns({{0.5, 0.5}, {1.0}}), std::invalid_argument);
  EXPECT_THROW(PopularityMatrix::from_columns({}), std::invalid_argument);
  EXPECT_NO_THROW(PopularityMatrix::from_columns({{0.5, 0.5 + 5e-10}}));
}

TEST(Popularity, HomogeneousFlag) {
  EXPECT_FALSE(four_by_four().homogeneous());
  EXPECT_TRUE(PopularityMatrix::from_columns({{.6, .4}, {.6, .4}}).homogeneous());
}

TEST(Config, Checks) {
  SystemConfig ok{3, 5, 2, {1, 2, 3}};
  EXPECT_TRUE(ok.check().empty());
  EXPECT_EQ(ok.max_users(), 3);
  EXPECT_EQ(ok.total_users(), 6);
  SystemConfig bad{3, 5, 6, {1, -1}};
  auto v = bad.check();
  EXPECT_TRUE(has(v, "0 <= M <= N"));
  EXPECT_TRUE(has(v, "length K"));
  bad.content_bits = 0.0;
  EXPECT_TRUE(has(bad.check(), "F > 0"));
}

TEST(Config, UsersStddevIsSampleStddev) {
  SystemConfig cfg{10, 1000, 100, {1, 1, 1, 1, 1, 5, 15, 20, 25, 30}};
  EXPECT_NEAR(users_stddev(cfg), 11.4504, 1e-4);
  cfg.users.assign(10, 10);
  EXPECT_EQ(users_stddev(cfg), 0.0);
}

TEST(ValidateHybrid, TableRowOneIsValid) {
  SystemConfig cfg{10, 1000, 100, std::vector<int>(10, 10)};
  auto pop = zipf_popularity(1000, 1.0, 10);
  HybridPlacement p{37, 352};
  EXPECT_TRUE(validate(cfg, pop, p).empty());
  EXPECT_EQ(p.replication(cfg), 2);
}

TEST(ValidateHybrid, DegenerateNeedsFullCache) {
  SystemConfig cfg{10, 1000, 100, std::vector<int>(10, 10)};
  auto pop = zipf_popularity(1000, 1.0, 10);
  EXPECT_TRUE(has(validate(cfg, pop, HybridPlacement{0, 100}), "N1=M requires M1=M"));
  EXPECT_TRUE(validate(cfg, pop, HybridPlacement{100, 100}).empty());
}

TEST(ValidateHybrid, NonIntegerReplicationAndOrdering) {
  SystemConfig cfg{3, 10, 2, {1, 1, 1}};
  auto pop = zipf_popularity(10, 1.0, 3);
  EXPECT_TRUE(has(validate(cfg, pop, HybridPlacement{0, 4}), "positive integer"));
  EXPECT_TRUE(has(validate(cfg, pop, HybridPlacement{3, 6}), "0 <= M1 <= M <= N1 <= N"));
  EXPECT_TRUE(has(validate(cfg, pop, HybridPlacement{0, 11}), "0 <= M1 <= M <= N1 <= N"));
  EXPECT_TRUE(validate(cfg, pop, HybridPlacement{0, 6}).empty());
}

TEST(ValidateHybrid, RequiresHomogeneousPopularity) {
  SystemConfig cfg{4, 4, 2, {1, 1, 1, 1}};
  EXPECT_TRUE(has(validate(cfg, four_by_four(), HybridPlacement{2, 2}), "SBS-independent"));
}

TEST(ValidateHybrid, IsPure) {
  SystemConfig cfg{3, 10, 2, {1, 1, 1}};
  auto pop = zipf_popularity(10, 1.0, 3);
  EXPECT_EQ(validate(cfg, pop, HybridPlacement{0, 4}), validate(cfg, pop, HybridPlacement{0, 4}));
}

TEST(ValidateHetero, PaperPlacementIsValid) {
  SystemConfig cfg{4, 4, 2, {1, 1, 1, 1}};
  HeteroPlacement p{{{{0, 1, 2, 3}, 1, {0, 1}}}, {{2}, {2}, {3}, {3}}};
  EXPECT_TRUE(validate(cfg, four_by_four(), p).empty());
  EXPECT_EQ(p.describe(), "G{1,2,3,4|M=1|W1,W2};Y{W3|W3|W4|W4}");
  EXPECT_EQ(p.coded_capacity(0), 1);
  EXPECT_TRUE(p.cached_uncoded(3, 2));
  EXPECT_FALSE(p.cached_uncoded(3, 0));
}

TEST(ValidateHetero, CacheBudget) {
  SystemConfig cfg{4, 4, 2, {1, 1, 1, 1}};
  HeteroPlacement p{{{{0, 1, 2, 3}, 1, {0, 1}}}, {{2}, {2, 3}, {3}, {3}}};
  EXPECT_TRUE(has(validate(cfg, four_by_four(), p), "cache budget"));
}

TEST(ValidateHetero, GroupConstraints) {
  SystemConfig cfg{4, 4, 2, {1, 1, 1, 1}};
  const auto pop = four_by_four();
  HeteroPlacement single{{{{0}, 1, {0, 1}}}, {{0}, {0}, {0}, {0}}};
  EXPECT_TRUE(has(validate(cfg, pop, single), "at least two SBSs"));
  HeteroPlacement equal{{{{0, 1, 2, 3}, 2, {0, 1}}}, {{}, {}, {}, {}}};
  EXPECT_TRUE(has(validate(cfg, pop, equal), "M_g < N_g"));
  HeteroPlacement frac{{{{0, 1, 2, 3}, 1, {0, 1, 2}}}, {{2}, {2}, {3}, {3}}};
  EXPECT_TRUE(has(validate(cfg, pop, frac), "T_g"));
  HeteroPlacement partial{{{{0, 1}, 1, {0, 1}}}, {{2}, {2}, {2, 3}, {2, 3}}};
  EXPECT_TRUE(has(validate(cfg, pop, partial), "cover"));
}

TEST(ValidateHetero, AllUncodedDegenerate) {
  SystemConfig cfg{4, 4, 2, {1, 1, 1, 1}};
  HeteroPlacement p{{}, {{0, 2}, {0, 2}, {0, 3}, {0, 3}}};
  EXPECT_TRUE(validate(cfg, four_by_four(), p).empty());
}

TEST(ToHetero, SingleGroupOverSortedContents) {
  SystemConfig cfg{3, 6, 2, {2, 2, 2}};
  auto pop = PopularityMatrix::replicated({0.1, 0.3, 0.2, 0.15, 0.15, 0.1}, 3);
  auto h = to_hetero(cfg, pop, {1, 4});
  ASSERT_EQ(h.groups.size(), 1u);
  EXPECT_EQ(h.groups[0].members, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(h.groups[0].capacity, 1);
  EXPECT_EQ(h.groups[0].contents, (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(h.uncoded[0], (std::vector<int>{1}));
  EXPECT_TRUE(validate(cfg, pop, h).empty());
}
