#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "adazero/common/error.hpp"
#include "adazero/envs/density.hpp"
#include "adazero/envs/grid_config.hpp"
#include "adazero/envs/gridworld.hpp"

using namespace adazero;
using namespace adazero::envs;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("adazero_envs_" + name);
}

int count_value(const Observation& obs, double value) {
  return static_cast<int>(std::count(obs.pixels.begin(), obs.pixels.end(), value));
}

}  // namespace

TEST(Reset, DarkChamberStartsBottomLeft) {
  GridWorld env(dark_chamber_spec());
  const Observation obs = env.reset(0);
  EXPECT_EQ(env.position(), (Cell{49, 0}));
  EXPECT_EQ(obs.pixels[49 * 50 + 0], kAgentLevel);
}

TEST(Reset, FourRoomsStartsTopRight) {
  GridWorld env(four_rooms_spec());
  env.reset(0);
  const Cell start = env.position();
  EXPECT_EQ(start, (Cell{1, 11}));
  // top-right interior cell: nothing free above it or to its right
  EXPECT_TRUE(env.spec().is_wall(Cell{0, 11}));
  EXPECT_TRUE(env.spec().is_wall(Cell{1, 12}));
  EXPECT_EQ(env.spec().goal, (Cell{11, 1}));
}

TEST(Reset, SameSeedGivesIdenticalObservation) {
  GridWorld env(four_rooms_spec());
  const Observation first = env.reset(42);
  env.step(Action::Down);
  const Observation second = env.reset(42);
  EXPECT_EQ(first, second);
}

TEST(Step, DarkChamberNeverPaysExtrinsicReward) {
  GridWorld env(dark_chamber_spec());
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> pick(0, kNumActions - 1);
  env.reset(1);
  double total = 0.0;
  for (int i = 0; i < 5000; ++i) {
    if (!env.episode_active()) env.reset(1);
    const StepResult r = env.step(action_from_index(pick(rng)));
    EXPECT_EQ(r.r_ext, 0.0);
    total += r.r_ext;
  }
  EXPECT_EQ(total, 0.0);
}

TEST(Step, MoveIntoWallLeavesPositionUnchanged) {
  GridWorld env(four_rooms_spec());
  env.reset(0);
  StepResult r = env.step(Action::Up);
  EXPECT_EQ(r.position, (Cell{1, 11}));
  EXPECT_EQ(r.r_ext, 0.0);
  EXPECT_FALSE(r.done);
  r = env.step(Action::Right);
  EXPECT_EQ(r.position, (Cell{1, 11}));
  EXPECT_EQ(r.r_ext, 0.0);
}

TEST(Step, EnteringGoalPaysOneAndEndsEpisode) {
  GridWorld env(four_rooms_spec());
  env.reset(0);
  std::vector<Action> path;
  path.insert(path.end(), 2, Action::Down);
  path.insert(path.end(), 9, Action::Left);
  path.insert(path.end(), 8, Action::Down);
  path.push_back(Action::Left);
  StepResult r;
  for (std::size_t i = 0; i < path.size(); ++i) {
    r = env.step(path[i]);
    if (i + 1 < path.size()) {
      EXPECT_EQ(r.r_ext, 0.0);
      EXPECT_FALSE(r.done);
    }
  }
  EXPECT_EQ(r.position, (Cell{11, 1}));
  EXPECT_EQ(r.r_ext, 1.0);
  EXPECT_TRUE(r.done);
  EXPECT_TRUE(r.reached_goal);
  EXPECT_EQ(path.size(), 20u);
  EXPECT_EQ(shortest_path_length(env.spec()), 20);
}

TEST(Step, AfterDoneIsContractViolation) {
  GridSpec spec = grid_from_layout({"SG"});
  GridWorld env(spec);
  env.reset(0);
  EXPECT_TRUE(env.step(Action::Right).done);
  EXPECT_THROW(env.step(Action::Left), ContractViolation);
  GridWorld fresh(spec);
  EXPECT_THROW(fresh.step(Action::Left), ContractViolation);
}

TEST(Step, EpisodeCapTruncates) {
  GridSpec spec = dark_chamber_spec();
  spec.max_episode_steps = 3;
  GridWorld env(spec);
  env.reset(0);
  EXPECT_FALSE(env.step(Action::Up).done);
  EXPECT_FALSE(env.step(Action::Up).done);
  const StepResult last = env.step(Action::Up);
  EXPECT_TRUE(last.done);
  EXPECT_TRUE(last.truncated);
  EXPECT_FALSE(last.reached_goal);
}

TEST(Render, EmptyGridHasExactlyOneAgentPixel) {
  GridSpec spec;
  spec.height = 2;
  spec.width = 2;
  spec.start = Cell{0, 0};
  GridWorld env(spec);
  const Observation obs = env.reset(0);
  EXPECT_EQ(count_value(obs, kAgentLevel), 1);
  EXPECT_EQ(obs.pixels[0], kAgentLevel);
  EXPECT_EQ(count_value(obs, kEmptyLevel), 3);
}

TEST(Render, IsDeterministicAndShapedLikeTheGrid) {
  GridWorld env(dark_chamber_spec());
  env.reset(0);
  const Observation a = env.render_observation();
  const Observation b = env.render_observation();
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.shape, (nn::Shape{50, 50, 1}));
  EXPECT_EQ(a.pixels.size(), 2500u);
}

TEST(Render, FourRoomsUsesDistinctGrayLevels) {
  GridWorld env(four_rooms_spec());
  const Observation obs = env.reset(0);
  EXPECT_EQ(count_value(obs, kAgentLevel), 1);
  EXPECT_EQ(count_value(obs, kGoalLevel), 1);
  EXPECT_EQ(count_value(obs, kWallLevel), static_cast<int>(env.spec().walls.size()));
  for (double p : obs.pixels) {
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
}

TEST(Invariants, RandomWalksRespectWallsReturnsAndCoverage) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    GridWorld env(four_rooms_spec());
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, kNumActions - 1);
    VisitDensity density(13, 13);
    std::size_t coverage = 0;
    double episode_return = 0.0;
    env.reset(seed);
    for (int i = 0; i < 20000; ++i) {
      const StepResult r = env.step(action_from_index(pick(rng)));
      EXPECT_FALSE(env.spec().is_wall(r.position));
      EXPECT_GE(r.r_ext, 0.0);
      density.add(r.position);
      EXPECT_GE(density.coverage(), coverage);
      coverage = density.coverage();
      episode_return += r.r_ext;
      if (r.done) {
        EXPECT_TRUE(episode_return == 0.0 || episode_return == 1.0);
        episode_return = 0.0;
        env.reset(seed);
      }
    }
  }
}

TEST(Invariants, SameActionsGiveSameTrajectory) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> pick(0, kNumActions - 1);
  std::vector<Action> actions;
  for (int i = 0; i < 300; ++i) actions.push_back(action_from_index(pick(rng)));
  auto run = [&] {
    GridWorld env(four_rooms_spec());
    env.reset(5);
    std::vector<Cell> cells;
    for (Action a : actions) {
      if (!env.episode_active()) env.reset(5);
      cells.push_back(env.step(a).position);
    }
    return cells;
  };
  EXPECT_EQ(run(), run());
}

TEST(Density, SingleVisit) {
  const VisitDensity d = accumulate_density(VisitDensity(3, 4), Cell{0, 0});
  EXPECT_EQ(d.at(Cell{0, 0}), 1u);
  EXPECT_EQ(d.total_steps, 1u);
  EXPECT_EQ(d.coverage(), 1u);
}

TEST(Density, RepeatedVisitsToOneCell) {
  VisitDensity d(3, 3);
  for (int i = 0; i < 17; ++i) d = accumulate_density(d, Cell{2, 1});
  EXPECT_EQ(d.at(Cell{2, 1}), 17u);
  EXPECT_EQ(d.total_steps, 17u);
}

TEST(Density, RandomWalkCountsMatchStepLog) {
  GridWorld env(dark_chamber_spec());
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> pick(0, kNumActions - 1);
  VisitDensity d(50, 50);
  std::vector<Cell> log;
  env.reset(0);
  for (int i = 0; i < 1000; ++i) {
    if (!env.episode_active()) env.reset(0);
    const StepResult r = env.step(action_from_index(pick(rng)));
    d.add(r.position);
    log.push_back(r.position);
  }
  std::uint64_t sum = 0;
  for (auto c : d.counts) sum += c;
  EXPECT_EQ(sum, 1000u);
  EXPECT_EQ(d.total_steps, 1000u);
  for (const Cell& c : log) {
    EXPECT_EQ(d.at(c), static_cast<std::uint64_t>(std::count(log.begin(), log.end(), c)));
  }
}

TEST(Density, OutOfBoundsIsContractViolation) {
  VisitDensity d(2, 2);
  EXPECT_THROW(d.add(Cell{2, 0}), ContractViolation);
  EXPECT_THROW(accumulate_density(d, Cell{0, -1}), ContractViolation);
}

TEST(Density, CsvAndHeatmapExports) {
  VisitDensity d(3, 5);
  d.add(Cell{1, 2});
  d.add(Cell{1, 2});
  d.add(Cell{0, 4});
  const auto csv = temp_path("density.csv");
  write_density_csv(d, csv);
  EXPECT_EQ(read_density_csv(csv), d);

  const auto pixels = density_heatmap(d);
  EXPECT_EQ(pixels[1 * 5 + 2], 255);
  EXPECT_GT(pixels[4], 0);
  EXPECT_LT(pixels[4], 255);
  EXPECT_EQ(std::count(pixels.begin(), pixels.end(), 0), 13);

  const auto pgm = temp_path("density.pgm");
  write_pgm(pgm, 3, 5, pixels);
  const GrayImage image = read_pgm(pgm);
  EXPECT_EQ(image.height, 3);
  EXPECT_EQ(image.width, 5);
  EXPECT_EQ(image.pixels, pixels);
}

TEST(GridConfig, LoadsLayoutFromIni) {
  const auto path = temp_path("grid.ini");
  {
    std::ofstream out(path);
    out << "# comment line\n[grid]\nlayout = #####/#S..#/#.#G#/#####\nmax_episode_steps = 40\ngoal_reward = 1.0\n";
  }
  const GridSpec spec = load_grid_spec(path);
  EXPECT_EQ(spec.height, 4);
  EXPECT_EQ(spec.width, 5);
  EXPECT_EQ(spec.start, (Cell{1, 1}));
  EXPECT_EQ(spec.goal, (Cell{2, 3}));
  EXPECT_TRUE(spec.is_wall(Cell{2, 2}));
  EXPECT_EQ(spec.max_episode_steps, 40);
  EXPECT_EQ(shortest_path_length(spec), 3);
}

TEST(GridConfig, ExplicitFieldsAndPresetOverrides) {
  const auto path = temp_path("grid2.ini");
  {
    std::ofstream out(path);
    out << "[grid]\npreset = dark_chamber\nheight = 10\nwidth = 8\nstart = 9,0\nwalls = 5,5 5,6\n"
           "max_episode_steps = 77\n";
  }
  const GridSpec spec = load_grid_spec(path);
  EXPECT_EQ(spec.height, 10);
  EXPECT_EQ(spec.width, 8);
  EXPECT_EQ(spec.start, (Cell{9, 0}));
  EXPECT_EQ(spec.walls.size(), 2u);
  EXPECT_FALSE(spec.goal.has_value());
  EXPECT_EQ(spec.max_episode_steps, 77);
}

TEST(GridConfig, RejectsUnknownKeysAndInvalidGrids) {
  const auto path = temp_path("grid3.ini");
  {
    std::ofstream out(path);
    out << "[grid]\npreset = four_rooms\nmax_epsiode_steps = 10\n";
  }
  EXPECT_THROW(load_grid_spec(path), std::invalid_argument);
  {
    std::ofstream out(path);
    out << "[grid]\npreset = four_rooms\nstart = 0,0\n";
  }
  EXPECT_THROW(load_grid_spec(path), ContractViolation);
  EXPECT_THROW(parse_cell("3;4"), std::invalid_argument);
}
