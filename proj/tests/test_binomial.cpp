#include <gtest/gtest.h>

#include <cmath>

#include "hcache/binomial.hpp"

using namespace hcache;

TEST(Binomial, SmallValues) {
  EXPECT_EQ(binomial_exact(5, 2), 10u);
  EXPECT_EQ(binomial_exact(10, 0), 1u);
  EXPECT_EQ(binomial_exact(10, 10), 1u);
  EXPECT_EQ(binomial_exact(2, 3), 0u);
  EXPECT_EQ(binomial_exact(3, -1), 0u);
  EXPECT_EQ(binomial_exact(62, 31), 465428353255261088ull);
}

TEST(Binomial, OverflowIsReported) {
  EXPECT_FALSE(binomial_exact(70, 35).has_value());
  EXPECT_TRUE(binomial_exact(70, 2).has_value());
}

TEST(Binomial, PascalIdentity) {
  for (int n = 1; n <= 60; ++n)
    for (int k = 1; k < n; ++k)
      EXPECT_EQ(*binomial_exact(n, k), *binomial_exact(n - 1, k - 1) + *binomial_exact(n - 1, k));
}

TEST(Binomial, LogMatchesExact) {
  for (int n = 0; n <= 60; n += 3)
    for (int k = 0; k <= n; k += 2)
      EXPECT_NEAR(log_binomial(n, k), std::log(static_cast<double>(*binomial_exact(n, k))), 1e-9);
}

TEST(Binomial, RatioExactAndLarge) {
  EXPECT_DOUBLE_EQ(binomial_ratio(2, 2, 3, 1), 1.0 / 3.0);
  EXPECT_EQ(binomial_ratio(1, 2, 3, 1), 0.0);
  // Past 64-bit range the log-gamma path must still agree with products of
  // small ratios: C(99,50)/C(100,49) = (99!/(50!49!)) / (100!/(49!51!)) = 51/100.
  EXPECT_NEAR(binomial_ratio(99, 50, 100, 49), 0.51, 1e-10);
  const double full = binomial_ratio(120, 61, 120, 60);
  EXPECT_NEAR(full, 60.0 / 61.0, 1e-10);
}
