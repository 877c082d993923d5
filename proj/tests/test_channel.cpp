#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace cbcast;

TEST(UnicastRate, DegenerateRegions) { EXPECT_DOUBLE_EQ(unicast_rate({2.4, 2.4, 0.37}), 2.4); }

TEST(UnicastRate, ReferenceParameters) {
  const RateModel m{2.4, 2.4 * (1.0 - 0.45), prob_high_from_area_ratio(9.0)};
  EXPECT_NEAR(m.prob_high, 0.1, 1e-15);
  EXPECT_NEAR(unicast_rate(m), 1.428, 1e-12);
}

TEST(UnicastRate, AllHigh) { EXPECT_DOUBLE_EQ(unicast_rate({2.0, 1.0, 1.0}), 2.0); }

TEST(BroadcastRate, SingleUserIsUnicast) {
  const RateModel m{2.4, 1.32, 0.1};
  EXPECT_DOUBLE_EQ(broadcast_rate(m, 1), unicast_rate(m));
}

TEST(BroadcastRate, ThreeUsers) { EXPECT_NEAR(broadcast_rate({2.4, 1.32, 0.1}, 3), 1.32108, 1e-12); }

TEST(BroadcastRate, LargeAudienceLimit) {
  const RateModel m{2.4, 1.32, 0.1};
  EXPECT_NEAR(broadcast_rate(m, 1000000), 1.32, 1e-12);
  EXPECT_DOUBLE_EQ(broadcast_rate_limit(m), 1.32);
}

TEST(BroadcastRate, NegativeCount) { EXPECT_THROW(broadcast_rate({2.4, 1.32, 0.1}, -1), InvalidParameter); }

TEST(RateModel, Validation) {
  EXPECT_THROW(unicast_rate({1.0, 2.0, 0.5}), InvalidParameter);
  EXPECT_THROW(unicast_rate({1.0, 0.0, 0.5}), InvalidParameter);
  EXPECT_THROW(unicast_rate({2.0, 1.0, 1.5}), InvalidParameter);
  EXPECT_THROW(prob_high_from_area_ratio(-1.0), InvalidParameter);
}

TEST(SampleUserRate, Degenerate) {
  Engine e{1};
  for (int k = 0; k < 100; ++k) {
    EXPECT_EQ(sample_user_rate({2.0, 1.0, 1.0}, e), 2.0);
    EXPECT_EQ(sample_user_rate({2.0, 1.0, 0.0}, e), 1.0);
  }
}

TEST(SampleUserRate, Frequency) {
  const RateModel m{2.4, 1.32, 0.1};
  Engine e{31};
  const int draws = 1000000;
  int high = 0;
  for (int k = 0; k < draws; ++k)
    high += sample_user_rate(m, e) == 2.4;
  EXPECT_NEAR(high, 0.1 * draws, 3.0 * oracle::binomial_sigma(draws, 0.1));
}

TEST(SampleUserRate, Seeded) {
  const RateModel m{2.4, 1.32, 0.5};
  for (std::uint64_t s = 0; s < 20; ++s)
    EXPECT_EQ(sample_user_rate(m, s), sample_user_rate(m, s));
}

TEST(RateModel, Scaled) {
  const auto m = RateModel{2.4, 1.32, 0.1}.scaled(0.5);
  EXPECT_DOUBLE_EQ(m.high, 1.2);
  EXPECT_DOUBLE_EQ(m.low, 0.66);
  EXPECT_DOUBLE_EQ(m.prob_high, 0.1);
}
