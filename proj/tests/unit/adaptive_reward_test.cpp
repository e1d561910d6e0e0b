#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "adazero/common/error.hpp"
#include "adazero/envs/gridworld.hpp"
#include "adazero/intrinsic/adaptive_reward.hpp"

using namespace adazero;
using namespace adazero::intrinsic;

namespace {

StateAutoencoder binary_identity(int pixels) {
  nn::Network net(nn::Shape{1, pixels, 1});
  net.dense(pixels).sigmoid();
  net.layers()[0].weights = 2000.0 * nn::Matrix::Identity(pixels, pixels);
  net.layers()[0].bias = nn::RowVector::Constant(pixels, -1000.0);
  return StateAutoencoder(std::move(net), nn::AdamConfig{});
}

}  // namespace

TEST(Combine, FullMasteryDropsIntrinsic) {
  const RewardBreakdown b = combine(0.7, 0.4, 1.0);
  EXPECT_EQ(b.r_total, 0.7);
  EXPECT_EQ(b.r_ext, 0.7);
  EXPECT_EQ(b.r_int_raw, 0.4);
  EXPECT_EQ(b.alpha, 1.0);
}

TEST(Combine, NoMasteryKeepsFullIntrinsic) { EXPECT_NEAR(combine(0.7, 0.4, 0.0).r_total, 1.1, 1e-15); }

TEST(Combine, HalfMastery) { EXPECT_NEAR(combine(1.0, 0.4, 0.5).r_total, 1.2, 1e-15); }

TEST(Combine, RejectsOutOfRangeInputs) {
  EXPECT_THROW(combine(0.0, 0.1, -0.01), ContractViolation);
  EXPECT_THROW(combine(0.0, 0.1, 1.01), ContractViolation);
  EXPECT_THROW(combine(0.0, 0.1, std::nan("")), ContractViolation);
  EXPECT_THROW(combine(-0.1, 0.1, 0.5), ContractViolation);
  EXPECT_THROW(combine(0.1, -0.1, 0.5), ContractViolation);
}

TEST(Combine, RandomTriplesSatisfyFormulaBoundsAndMonotonicity) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> reward(0.0, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double r_ext = reward(rng);
    const double r_int = reward(rng);
    const double a = unit(rng);
    const double b = unit(rng);
    const RewardBreakdown x = combine(r_ext, r_int, a);
    ASSERT_EQ(x.r_total, r_ext + (1.0 - a) * r_int);
    ASSERT_GE(x.r_total, r_ext);
    ASSERT_LE(x.r_total, r_ext + r_int);
    const RewardBreakdown y = combine(r_ext, r_int, b);
    if (a <= b) {
      ASSERT_GE(x.r_total, y.r_total);
    } else {
      ASSERT_LE(x.r_total, y.r_total);
    }
    ASSERT_EQ(combine(r_ext, r_int, 1.0).r_total, r_ext);
  }
}

TEST(Pipeline, PerfectReconstructionLeavesExtrinsicOnly) {
  const StateAutoencoder ae = binary_identity(6);
  const std::vector<double> obs{0, 1, 0, 0, 1, 1};
  for (double alpha : {0.0, 0.3, 1.0}) {
    const RewardBreakdown b = per_step_pipeline(obs, 0.25, ae, constant_alpha(alpha));
    EXPECT_EQ(b.r_int_raw, 0.0);
    EXPECT_EQ(b.r_total, 0.25);
  }
}

TEST(Pipeline, EvaluatorSeesReconstructionNotRawState) {
  // Autoencoder that outputs all zeros; an alpha function that reports the
  // pixel sum shows which image it was handed.
  nn::Network net(nn::Shape{1, 4, 1});
  net.dense(4).sigmoid();
  net.layers()[0].weights.setZero();
  net.layers()[0].bias = nn::RowVector::Constant(4, -1000.0);
  const StateAutoencoder ae(std::move(net), nn::AdamConfig{});
  std::vector<double> seen;
  const AlphaFn spy = [&](std::span<const double> x) {
    seen.assign(x.begin(), x.end());
    return 0.0;
  };
  const RewardBreakdown b = per_step_pipeline(std::vector<double>{1, 1, 0, 0}, 0.0, ae, spy);
  EXPECT_EQ(seen, (std::vector<double>{0, 0, 0, 0}));
  EXPECT_EQ(b.r_int_raw, 1.0);
}

TEST(Pipeline, DarkChamberTotalIsScaledIntrinsic) {
  const nn::Shape shape{50, 50, 1};
  const StateAutoencoder ae(shape, large_grid_arch(), nn::AdamConfig{}, 1);
  const MasteryEvaluator ev(shape, large_grid_arch(), nn::AdamConfig{}, 2);
  envs::GridWorld env(envs::dark_chamber_spec());
  env.reset(0);
  std::mt19937_64 rng(0);
  for (int i = 0; i < 20; ++i) {
    const auto step = env.step(envs::action_from_index(static_cast<int>(rng() % 4)));
    const RewardBreakdown b = per_step_pipeline(step.obs.pixels, step.r_ext, ae, ev);
    EXPECT_EQ(b.r_ext, 0.0);
    EXPECT_EQ(b.r_total, (1.0 - b.alpha) * b.r_int_raw);
    EXPECT_GE(b.r_total, 0.0);
    EXPECT_EQ(b, per_step_pipeline(step.obs.pixels, step.r_ext, ae, ev));
  }
}
