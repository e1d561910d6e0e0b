#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "adazero/common/error.hpp"
#include "adazero/common/stats.hpp"
#include "adazero/envs/gridworld.hpp"
#include "adazero/intrinsic/autoencoder.hpp"
#include "adazero/intrinsic/evaluator.hpp"
#include "adazero/nn/losses.hpp"

using namespace adazero;
using namespace adazero::intrinsic;
using adazero::nn::Matrix;

namespace {

std::vector<double> four_rooms_frame(envs::Cell agent) {
  envs::GridSpec spec = envs::four_rooms_spec();
  spec.start = agent;
  envs::GridWorld env(spec);
  return env.reset(0).pixels;
}

std::vector<envs::Cell> free_cells() {
  const envs::GridSpec spec = envs::four_rooms_spec();
  std::vector<envs::Cell> cells;
  for (int r = 0; r < spec.height; ++r) {
    for (int c = 0; c < spec.width; ++c) {
      const envs::Cell cell{r, c};
      if (!spec.is_wall(cell) && cell != spec.goal) cells.push_back(cell);
    }
  }
  return cells;
}

// Disjoint "seen" and "unseen" frames drawn from the free cells of four rooms.
struct StateSplit {
  Matrix seen;
  Matrix unseen;
};

StateSplit split_states(std::uint64_t seed, int seen_count, int unseen_count) {
  std::vector<envs::Cell> cells = free_cells();
  std::mt19937_64 rng(seed);
  std::shuffle(cells.begin(), cells.end(), rng);
  const int cols = 13 * 13;
  StateSplit split{Matrix(seen_count, cols), Matrix(unseen_count, cols)};
  for (int i = 0; i < seen_count; ++i) {
    const auto f = four_rooms_frame(cells[i]);
    split.seen.row(i) = Eigen::Map<const nn::RowVector>(f.data(), cols);
  }
  for (int i = 0; i < unseen_count; ++i) {
    const auto f = four_rooms_frame(cells[seen_count + i]);
    split.unseen.row(i) = Eigen::Map<const nn::RowVector>(f.data(), cols);
  }
  return split;
}

std::vector<double> row(const Matrix& m, Eigen::Index i) { return std::vector<double>(m.row(i).begin(), m.row(i).end()); }

const nn::Shape kRooms{13, 13, 1};

nn::AdamConfig adam_lr(double lr) {
  nn::AdamConfig a;
  a.learning_rate = lr;
  return a;
}

std::vector<double> all_parameters(const nn::Network& net) {
  std::vector<double> out;
  for (const auto& l : net.layers()) {
    out.insert(out.end(), l.weights.data(), l.weights.data() + l.weights.size());
    out.insert(out.end(), l.bias.data(), l.bias.data() + l.bias.size());
  }
  return out;
}

}  // namespace

TEST(Reconstruct, IdentityAutoencoderOnBinaryImageGivesZero) {
  nn::Network net(nn::Shape{2, 2, 1});
  net.dense(4).sigmoid();
  auto& layer = net.layers()[0];
  layer.weights = 2000.0 * Matrix::Identity(4, 4);
  layer.bias = nn::RowVector::Constant(4, -1000.0);
  const StateAutoencoder ae(std::move(net), nn::AdamConfig{});
  const std::vector<double> obs{0.0, 1.0, 1.0, 0.0};
  const Reconstruction rec = ae.reconstruct(obs);
  EXPECT_EQ(rec.obs_hat, obs);
  EXPECT_EQ(rec.r_int, 0.0);
}

TEST(Reconstruct, ZeroOutputDecoderGivesHalfSumOfSquares) {
  nn::Network net(nn::Shape{3, 3, 1});
  net.dense(9).sigmoid();
  net.layers()[0].weights = Matrix::Zero(9, 9);
  net.layers()[0].bias = nn::RowVector::Constant(9, -1000.0);
  const StateAutoencoder ae(std::move(net), nn::AdamConfig{});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> obs(9);
  double q = 0.0;
  for (double& p : obs) {
    p = u(rng);
    q += p * p;
  }
  EXPECT_NEAR(ae.reconstruct(obs).r_int, q / 2.0, 1e-12);
}

TEST(Reconstruct, MatchesFormulaAndStaysInUnitRange) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const StateAutoencoder ae(kRooms, small_grid_arch(), nn::AdamConfig{}, seed);
    const auto obs = four_rooms_frame(envs::Cell{3, 4});
    const Reconstruction a = ae.reconstruct(obs);
    const Reconstruction b = ae.reconstruct(obs);
    EXPECT_EQ(a.obs_hat, b.obs_hat);
    EXPECT_EQ(a.r_int, b.r_int);
    double expected = 0.0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      EXPECT_GE(a.obs_hat[i], 0.0);
      EXPECT_LE(a.obs_hat[i], 1.0);
      expected += 0.5 * (obs[i] - a.obs_hat[i]) * (obs[i] - a.obs_hat[i]);
    }
    EXPECT_NEAR(a.r_int, expected, 1e-12);
    EXPECT_GT(a.r_int, 0.0);
  }
}

TEST(Reconstruct, ShapeMismatchIsContractViolation) {
  const StateAutoencoder ae(kRooms, small_grid_arch(), nn::AdamConfig{}, 0);
  const std::vector<double> wrong(10, 0.0);
  EXPECT_THROW(ae.reconstruct(wrong), ContractViolation);
}

TEST(Reconstruct, BatchRewardsMatchSingleCalls) {
  const StateAutoencoder ae(kRooms, small_grid_arch(), nn::AdamConfig{}, 2);
  const StateSplit s = split_states(2, 6, 0);
  const auto rewards = ae.intrinsic_rewards(s.seen);
  for (Eigen::Index i = 0; i < s.seen.rows(); ++i) {
    EXPECT_NEAR(rewards[i], ae.reconstruct(row(s.seen, i)).r_int, 1e-10);
  }
}

TEST(Reconstruct, SeenStatesScoreLowerThanUnseen) {
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const StateSplit s = split_states(100 + seed, 10, 20);
    StateAutoencoder ae(kRooms, small_grid_arch(), adam_lr(1e-3), seed);
    for (int step = 0; step < 1000; ++step) ae.train_step(s.seen);
    const auto seen = ae.intrinsic_rewards(s.seen);
    const auto unseen = ae.intrinsic_rewards(s.unseen);
    if (median(seen) < median(unseen)) ++wins;
  }
  EXPECT_GE(wins, 19);
}

TEST(TrainStep, SingleObservationLossDecreases) {
  int monotone = 0;
  const auto obs = four_rooms_frame(envs::Cell{8, 8});
  const Matrix batch = Eigen::Map<const Matrix>(obs.data(), 1, static_cast<Eigen::Index>(obs.size()));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    StateAutoencoder ae(kRooms, small_grid_arch(), nn::AdamConfig{}, seed);
    double previous = std::numeric_limits<double>::infinity();
    bool strictly = true;
    for (int step = 0; step < 100; ++step) {
      const double loss = ae.train_step(batch);
      if (!(loss < previous)) strictly = false;
      previous = loss;
    }
    if (strictly) ++monotone;
  }
  EXPECT_GE(monotone, 18);
}

TEST(TrainStep, IdenticalBatchGivesSameGradientAsSingleImage) {
  StateAutoencoder ae(kRooms, small_grid_arch(), nn::AdamConfig{}, 7);
  const auto obs = four_rooms_frame(envs::Cell{2, 2});
  const Matrix one = Eigen::Map<const Matrix>(obs.data(), 1, static_cast<Eigen::Index>(obs.size()));
  const Matrix four = one.replicate(4, 1);
  auto grads_for = [&](const Matrix& batch) {
    nn::Network& net = ae.network();
    const Matrix out = net.forward(batch);
    return net.backward(nn::half_squared_error(out, batch).grad);
  };
  const nn::Gradients g1 = grads_for(one);
  const nn::Gradients g4 = grads_for(four);
  for (std::size_t l = 0; l < g1.size(); ++l) {
    if (g1[l].weights.size() == 0) continue;
    EXPECT_LT((g1[l].weights - g4[l].weights).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((g1[l].bias - g4[l].bias).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(TrainStep, ZeroLearningRateLeavesParametersAndLossUnchanged) {
  StateAutoencoder ae(kRooms, small_grid_arch(), adam_lr(0.0), 1);
  const StateSplit s = split_states(1, 4, 0);
  const auto before = all_parameters(ae.network());
  const double first = ae.train_step(s.seen);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(ae.train_step(s.seen), first);
  EXPECT_EQ(all_parameters(ae.network()), before);
}

TEST(TrainStep, NonFiniteLossHalts) {
  StateAutoencoder ae(kRooms, small_grid_arch(), nn::AdamConfig{}, 1);
  ae.network().layers()[0].weights(0, 0) = std::numeric_limits<double>::quiet_NaN();
  const StateSplit s = split_states(1, 2, 0);
  EXPECT_THROW(ae.train_step(s.seen), TrainingHalted);
  EXPECT_THROW(ae.train_step(Matrix(0, 169)), ContractViolation);
}

TEST(TrainStep, TrainingSetRewardFallsBelowTenPercent) {
  const StateSplit s = split_states(11, 10, 0);
  StateAutoencoder ae(kRooms, small_grid_arch(), adam_lr(1e-3), 11);
  const double initial = median(ae.intrinsic_rewards(s.seen));
  for (int step = 0; step < 5000; ++step) ae.train_step(s.seen);
  const double final_median = median(ae.intrinsic_rewards(s.seen));
  EXPECT_LT(final_median, 0.1 * initial);
}

TEST(Normalizer, DividesByDecayingRms) {
  IntrinsicNormalizer norm(0.5);
  EXPECT_EQ(norm.normalize(3.0), 3.0);
  norm.observe(2.0);
  EXPECT_NEAR(norm.normalize(3.0), 1.5, 1e-6);
  norm.observe(4.0);
  EXPECT_NEAR(norm.scale(), std::sqrt(0.5 * 4.0 + 0.5 * 16.0), 1e-6);
  for (int i = 0; i < 200; ++i) norm.observe(0.01);
  EXPECT_NEAR(norm.normalize(0.01), 1.0, 1e-6);
  EXPECT_THROW(IntrinsicNormalizer(1.0), ContractViolation);
}

TEST(Score, ZeroFinalLayerGivesOneHalf) {
  MasteryEvaluator ev(kRooms, small_grid_arch(), nn::AdamConfig{}, 5);
  ev.zero_output_layer();
  for (const auto& cell : {envs::Cell{1, 1}, envs::Cell{5, 9}}) {
    EXPECT_EQ(ev.score(four_rooms_frame(cell)), 0.5);
  }
}

TEST(Score, DeterministicInUnitIntervalAndChecksShape) {
  MasteryEvaluator ev(kRooms, small_grid_arch(), adam_lr(1e-2), 6);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const StateSplit s = split_states(6, 8, 0);
  const Matrix noise = Matrix::NullaryExpr(8, 169, [&] { return u(rng); });
  for (int i = 0; i < 200; ++i) ev.train_step(s.seen, noise);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(169);
    for (double& p : x) p = (trial % 2 == 0) ? u(rng) : 50.0 * (u(rng) - 0.5);
    const double a = ev.score(x);
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
    EXPECT_EQ(a, ev.score(x));
  }
  EXPECT_THROW(ev.score(std::vector<double>(5)), ContractViolation);
}

TEST(EvaluatorTrain, SeparableBatchesLossDecreasesMonotonically) {
  int monotone = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const StateSplit s = split_states(seed, 8, 0);
    const Matrix fake = Matrix::Constant(8, 169, 0.5);
    MasteryEvaluator ev(kRooms, small_grid_arch(), nn::AdamConfig{}, seed);
    double previous = std::numeric_limits<double>::infinity();
    bool strictly = true;
    for (int step = 0; step < 50; ++step) {
      const double loss = ev.train_step(s.seen, fake);
      if (!(loss < previous)) strictly = false;
      previous = loss;
    }
    if (strictly) ++monotone;
  }
  EXPECT_GE(monotone, 18);
}

TEST(EvaluatorTrain, IndistinguishableClassesStayAtChance) {
  const StateSplit s = split_states(3, 8, 0);
  MasteryEvaluator ev(kRooms, small_grid_arch(), adam_lr(1e-3), 3);
  for (int step = 0; step < 300; ++step) {
    EXPECT_GE(ev.train_step(s.seen, s.seen), std::log(2.0) - 1e-12);
  }
  for (Eigen::Index i = 0; i < s.seen.rows(); ++i) EXPECT_NEAR(ev.score(row(s.seen, i)), 0.5, 0.02);
}

TEST(EvaluatorTrain, ZeroLearningRateLeavesParametersUnchanged) {
  MasteryEvaluator ev(kRooms, small_grid_arch(), adam_lr(0.0), 4);
  const StateSplit s = split_states(4, 3, 3);
  const auto before = all_parameters(ev.network());
  for (int i = 0; i < 3; ++i) ev.train_step(s.seen, s.unseen);
  EXPECT_EQ(all_parameters(ev.network()), before);
}

TEST(EvaluatorTrain, NonFiniteLossHaltsAndEmptyBatchRejected) {
  MasteryEvaluator ev(kRooms, small_grid_arch(), nn::AdamConfig{}, 4);
  const StateSplit s = split_states(4, 3, 3);
  EXPECT_THROW(ev.train_step(s.seen, Matrix(0, 169)), ContractViolation);
  ev.network().layers()[0].bias(0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(ev.train_step(s.seen, s.unseen), TrainingHalted);
}

TEST(EvaluatorTrain, ConvergedEvaluatorRatesNearPerfectReconstructionHigh) {
  const StateSplit s = split_states(21, 10, 0);
  StateAutoencoder early(kRooms, small_grid_arch(), adam_lr(1e-3), 21);
  for (int step = 0; step < 50; ++step) early.train_step(s.seen);
  Matrix blurry;
  early.intrinsic_rewards(s.seen, &blurry);

  MasteryEvaluator ev(kRooms, small_grid_arch(), adam_lr(1e-3), 21);
  for (int step = 0; step < 500; ++step) ev.train_step(s.seen, blurry);

  StateAutoencoder trained(kRooms, small_grid_arch(), adam_lr(1e-3), 22);
  for (int step = 0; step < 3000; ++step) trained.train_step(s.seen);
  Matrix sharp;
  trained.intrinsic_rewards(s.seen, &sharp);
  for (Eigen::Index i = 0; i < sharp.rows(); ++i) {
    EXPECT_GE(ev.score(row(sharp, i)), 0.9);
    EXPECT_LT(ev.score(row(blurry, i)), 0.1);
  }
}

// Measured while the autoencoder is converging on the seen set. Once its
// reconstructions are indistinguishable the evaluator sits near chance and the
// ranking it produces no longer carries signal.
TEST(Coupling, MasteryTracksReconstructionQualityAfterJointTraining) {
  int positive = 0;
  std::vector<double> rhos;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const StateSplit s = split_states(40 + seed, 10, 20);
    StateAutoencoder ae(kRooms, small_grid_arch(), adam_lr(1e-3), seed);
    MasteryEvaluator ev(kRooms, small_grid_arch(), adam_lr(1e-3), seed + 1000);
    Matrix recon;
    for (int step = 0; step < 600; ++step) {
      ae.train_step(s.seen);
      ae.intrinsic_rewards(s.seen, &recon);
      ev.train_step(s.seen, recon);
    }
    Matrix probe(s.seen.rows() + s.unseen.rows(), 169);
    probe << s.seen, s.unseen;
    const auto r_int = ae.intrinsic_rewards(probe, &recon);
    std::vector<double> neg_r_int;
    for (double r : r_int) neg_r_int.push_back(-r);
    const double rho = spearman(neg_r_int, ev.score_batch(recon));
    rhos.push_back(rho);
    if (rho > 0.0) ++positive;
  }
  EXPECT_GE(positive, 10);
  EXPECT_GT(median(rhos), 0.0);
}

TEST(Stats, SpearmanAndMedian) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{2, 4, 6, 8, 100};
  const std::vector<double> z{5, 4, 3, 2, 1};
  EXPECT_NEAR(spearman(x, y), 1.0, 1e-12);
  EXPECT_NEAR(spearman(x, z), -1.0, 1e-12);
  EXPECT_EQ(average_ranks(std::vector<double>{3, 1, 3}), (std::vector<double>{2.5, 1.0, 2.5}));
  EXPECT_EQ(median(std::vector<double>{5, 1, 3}), 3.0);
  EXPECT_EQ(median(std::vector<double>{4, 1, 3, 2}), 2.5);
}
