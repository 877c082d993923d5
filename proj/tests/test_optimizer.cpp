#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace cbcast;

namespace {

FileCatalog single_file(double f, double theta) {
  return FileCatalog::from_parts({{f, {1e-9, 1e-9}}}, {1.0}, {theta});
}

// r_u = r_b = 1.
CellConfig unit_cell(double w, double t, std::size_t n, double pu, double beta = 1.0) {
  return CellConfig{w, t, n, pu, {1.0, 1.0, 0.5}, beta};
}

} // namespace

TEST(LowerBound, HandExample) {
  const auto cat = single_file(0.5, 2.0);
  const auto cell = unit_cell(4.0, 3.0, 10, 1.0);
  const auto s = make_schedule({0}, cat.sizes());
  EXPECT_DOUBLE_EQ(lower_bound_revenue(cat, cell, 0.5, 2.0, s), 7.5625);
}

TEST(LowerBound, ZeroPrice) {
  const auto cat = single_file(0.5, 2.0);
  const auto cell = unit_cell(4.0, 3.0, 10, 1.0);
  const auto s = make_schedule({0}, cat.sizes());
  EXPECT_DOUBLE_EQ(lower_bound_revenue(cat, cell, 0.0, 1.5, s), 1.0 * (4.0 - 1.5) * 3.0);
}

TEST(LowerBound, HypothesisViolation) {
  const auto cat = single_file(0.6, 2.0);
  const auto cell = unit_cell(4.0, 3.0, 10, 3.0);
  const auto s = make_schedule({0}, cat.sizes());
  EXPECT_THROW(lower_bound_revenue(cat, cell, 1.0, 2.0, s), PreconditionViolation);
  EXPECT_THROW(lower_bound_revenue(cat, cell, 2.5, 0.0, s), InvalidParameter);
}

TEST(LowerBound, MatchesDirectFormula) {
  std::mt19937_64 rng(55);
  for (int k = 0; k < 200; ++k) {
    const auto x = oracle::random_instance(rng, 1 + k % 8);
    const auto cat = oracle::to_catalog(x);
    const auto cell = oracle::to_cell(x);
    const auto s = suboptimal_schedule(cat, x.pu);
    const double wb = 0.1 + 0.8 * x.w * static_cast<double>(k % 10) / 10.0;
    EXPECT_NEAR(lower_bound_revenue(cat, cell, x.pb, wb, s), oracle::bound(x, s.completion, x.pb, wb),
                1e-9 * std::abs(oracle::bound(x, s.completion, x.pb, wb)) + 1e-9);
  }
}

TEST(ClosedFormBandwidth, Examples) {
  const auto cat = single_file(0.5, 1.0);
  EXPECT_NEAR(closed_form_bandwidth(cat, unit_cell(1e9, 120.0, 100, 2.6)), 50.0 / 1248.0, 1e-15);
  EXPECT_NEAR(50.0 / 1248.0, 0.040064, 1e-6);
  EXPECT_EQ(closed_form_bandwidth(cat, unit_cell(10.0, 120.0, 0, 2.6)), 0.0);
  EXPECT_DOUBLE_EQ(closed_form_bandwidth(cat, unit_cell(10.0, 1.0, 100000, 2.6, 0.6)), 6.0);
}

TEST(ClosedFormPrice, Examples) {
  const auto cat = single_file(0.5, 1.0);
  CellConfig cell{10.0, 120.0, 10, 2.6, {1.0 + 0.428 / 0.1, 1.0, 0.1}, 1.0};
  ASSERT_NEAR(cell.unicast_rate(), 1.428, 1e-12);
  EXPECT_NEAR(closed_form_price(cat, cell, 0.01), 0.5 * (2.5 / (4 * 2.6 * 120 * 1.428 * 0.01) + 2.6), 1e-12);
  EXPECT_NEAR(closed_form_price(cat, cell, 0.01), 1.37015, 2e-5);
  cell.users = 0;
  EXPECT_DOUBLE_EQ(closed_form_price(cat, cell, 0.01), 1.3);
  EXPECT_THROW(closed_form_price(cat, cell, 0.0), InvalidParameter);
}

TEST(ClosedFormPrice, ClampAtUnicastPrice) {
  const auto cat = single_file(0.5, 1.0);
  // N r_b F^2 = 4 P_u^2 T r_u S* puts the unclamped value exactly at P_u.
  const double pu = 2.0, t = 5.0, mass = 0.25;
  const double n = 4.0 * pu * pu * t * mass / 0.25;
  const auto cell = unit_cell(10.0, t, static_cast<std::size_t>(n), pu);
  EXPECT_DOUBLE_EQ(closed_form_price(cat, cell, mass), pu);
  const auto more = unit_cell(10.0, t, static_cast<std::size_t>(4 * n), pu);
  EXPECT_DOUBLE_EQ(closed_form_price(cat, more, mass), pu);
}

TEST(ExactBandwidth, Examples) {
  const auto cat = single_file(1.0, 4.0);
  const auto s = make_schedule({0}, cat.sizes());
  EXPECT_DOUBLE_EQ(exact_bandwidth_given_price(cat, unit_cell(10.0, 1.0, 1, 1.0), 0.0, s), 0.0);
  // N = P_b = P_u = T = rho = 1, sum s theta f p = 4.
  EXPECT_DOUBLE_EQ(exact_bandwidth_given_price(cat, unit_cell(10.0, 1.0, 1, 1.0), 1.0, s), 2.0);
  EXPECT_DOUBLE_EQ(exact_bandwidth_given_price(cat, unit_cell(10.0, 1.0, 1, 1.0, 0.1), 1.0, s), 1.0);
  EXPECT_THROW(exact_bandwidth_given_price(cat, unit_cell(10.0, 1.0, 1, 1.0), -1.0, s), InvalidParameter);
}

TEST(ExactBandwidth, MatchesGridOracle) {
  std::mt19937_64 rng(909);
  for (int k = 0; k < 100; ++k) {
    const auto x = oracle::random_instance(rng, 1 + k % 8);
    const auto cat = oracle::to_catalog(x);
    const auto cell = oracle::to_cell(x);
    const auto s = smith_schedule(cat, x.pu, x.pb);
    const double w = exact_bandwidth_given_price(cat, cell, x.pb, s);
    const double step = x.w / 9999.0;
    const double g = oracle::grid_argmax([&](double wb) { return oracle::bound(x, s.completion, x.pb, wb); }, step,
                                         x.w, 9999);
    EXPECT_NEAR(w, g, 1.01 * step) << "instance " << k;
  }
}

TEST(ExactPrice, Examples) {
  const auto cat = single_file(0.5, 2.0);
  const auto s = make_schedule({0}, cat.sizes());
  const auto cell = unit_cell(10.0, 1.0, 10, 1.0);
  // W_b F / rho = sum s theta f p  ->  correction 0.
  const double mass = 0.5 * 2.0 * 0.5;
  EXPECT_DOUBLE_EQ(exact_price_given_bandwidth(cat, cell, mass / 0.5, s), 0.5);
  EXPECT_DOUBLE_EQ(exact_price_given_bandwidth(cat, cell, 9.0, s), 1.0);
  EXPECT_DOUBLE_EQ(exact_price_given_bandwidth(cat, cell, 0.0, s, 0.3), 0.3);
}

TEST(ExactPrice, MatchesGridOracle) {
  std::mt19937_64 rng(4242);
  for (int k = 0; k < 100; ++k) {
    const auto x = oracle::random_instance(rng, 1 + k % 8);
    const auto cat = oracle::to_catalog(x);
    const auto cell = oracle::to_cell(x);
    const auto s = suboptimal_schedule(cat, x.pu);
    const double wb = x.w * (0.05 + 0.9 * static_cast<double>(k % 10) / 10.0);
    const double p = exact_price_given_bandwidth(cat, cell, wb, s);
    const double step = x.pu / 9999.0;
    const double g =
        oracle::grid_argmax([&](double pb) { return oracle::bound(x, s.completion, pb, wb); }, 0.0, x.pu, 10000);
    EXPECT_NEAR(p, g, 1.01 * step) << "instance " << k;
  }
}

TEST(JointOptimize, NoUsers) {
  const auto cat = single_file(0.5, 2.0);
  const auto cell = unit_cell(4.0, 3.0, 0, 1.0);
  const auto r = joint_optimize(cat, cell);
  EXPECT_EQ(r.broadcast_bandwidth, 0.0);
  EXPECT_EQ(r.broadcast_price, 0.5);
  EXPECT_DOUBLE_EQ(r.lower_bound, 12.0);
  EXPECT_EQ(r.gain, 1.0);
}

TEST(JointOptimize, SingleFileMatchesGrid) {
  const auto cat = single_file(0.4, 3.0);
  const auto cell = CellConfig{20.0, 4.0, 400, 2.0, {1.5, 1.0, 0.4}, 1.0};
  const auto r = joint_optimize(cat, cell);
  ASSERT_EQ(r.schedule.order, std::vector<std::size_t>{0});
  ASSERT_GT(r.broadcast_bandwidth, 0.0);
  const auto [w, p] = oracle::zoom_argmax(
      [&](double wb, double pb) { return bound_value(cat, cell, pb, wb, r.schedule); }, 1e-6, 20.0, 0.0, 2.0);
  EXPECT_NEAR(r.broadcast_bandwidth, w, 1e-6);
  EXPECT_NEAR(r.broadcast_price, p, 1e-6);
}

TEST(JointOptimize, FixedPointAndMonotoneTrace) {
  std::mt19937_64 rng(2718);
  for (int k = 0; k < 100; ++k) {
    const auto x = oracle::random_instance(rng, 1 + k % 8);
    const auto cat = oracle::to_catalog(x);
    const auto cell = oracle::to_cell(x);
    const auto r = joint_optimize(cat, cell);
    for (std::size_t i = 1; i < r.trace.size(); ++i)
      EXPECT_GE(r.trace[i].bound, r.trace[i - 1].bound - 1e-9 * std::abs(r.trace[i - 1].bound));
    if (r.broadcast_bandwidth > 0.0) {
      EXPECT_NEAR(exact_bandwidth_given_price(cat, cell, r.broadcast_price, r.schedule), r.broadcast_bandwidth, 1e-9);
      EXPECT_NEAR(exact_price_given_bandwidth(cat, cell, r.broadcast_bandwidth, r.schedule,
                                              bound_price_floor(cat, cell)),
                  r.broadcast_price, 1e-9);
      EXPECT_EQ(smith_schedule(cat, x.pu, r.broadcast_price).order, r.schedule.order);
    }
    EXPECT_GE(r.lower_bound, r.closed_form_bound - 1e-9 * std::abs(r.closed_form_bound)) << "instance " << k;
  }
}

TEST(JointOptimize, ConvergenceErrorCarriesTrace) {
  const auto cat = single_file(0.4, 3.0);
  const auto cell = CellConfig{20.0, 4.0, 400, 2.0, {1.5, 1.0, 0.4}, 1.0};
  try {
    joint_optimize(cat, cell, {1e-9, 0, true});
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.trace().size(), 1u);
  }
}

TEST(JointOptimize, NoBroadcastWhenUnprofitable) {
  // Huge delay penalty: every interior point is worse than P_u W T.
  const auto cat = single_file(0.4, 1e6);
  const auto cell = CellConfig{4.0, 16.0, 10, 2.0, {1.5, 1.0, 0.4}, 0.6};
  const auto r = joint_optimize(cat, cell);
  EXPECT_EQ(r.broadcast_bandwidth, 0.0);
  EXPECT_DOUBLE_EQ(r.lower_bound, cell.unicast_only_revenue());
}

TEST(RevenueGain, Examples) {
  const auto cat = single_file(0.5, 2.0);
  const auto s = make_schedule({0}, cat.sizes());
  const double mass = bound_moments(cat, s).delay_mass;
  EXPECT_EQ(revenue_gain(cat, unit_cell(4.0, 3.0, 0, 1.0), mass, s), 1.0);
  // G = 0.5 + 1/f = 2.5 = P_u, demand term saturated.
  EXPECT_DOUBLE_EQ(gain_offset(cat, s, mass), 2.5);
  const auto cell = unit_cell(4.0, 3.0, 100000, 2.5);
  EXPECT_DOUBLE_EQ(revenue_gain(cat, cell, mass, s), 1.0 + 100000 * 0.5 / (2.0 * 4.0 * 3.0));
  EXPECT_THROW(revenue_gain(cat, cell, 0.0, s), InvalidParameter);
}
