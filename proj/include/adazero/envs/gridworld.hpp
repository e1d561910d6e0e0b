#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adazero/nn/tensor.hpp"

namespace adazero::envs {

struct Cell {
  int row{0};
  int col{0};

  auto operator<=>(const Cell&) const = default;
};

std::string to_string(Cell cell);

enum class Action : int { Up = 0, Down = 1, Left = 2, Right = 3 };
inline constexpr int kNumActions = 4;

Action action_from_index(int index);

// Gray levels used when rendering a grid to an observation.
inline constexpr double kEmptyLevel = 0.0;
inline constexpr double kWallLevel = 0.33;
inline constexpr double kGoalLevel = 0.66;
inline constexpr double kAgentLevel = 1.0;

struct GridSpec {
  std::string name{"custom"};
  int height{1};
  int width{1};
  std::set<Cell> walls;
  Cell start;
  std::optional<Cell> goal;
  double goal_reward{1.0};
  int max_episode_steps{100};

  bool in_bounds(Cell c) const { return c.row >= 0 && c.row < height && c.col >= 0 && c.col < width; }
  bool is_wall(Cell c) const { return walls.contains(c); }

  /// Throws ContractViolation when the spec breaks its invariants.
  void validate() const;
};

/// 50x50 reward-free room, start in the bottom-left corner.
GridSpec dark_chamber_spec();

/// Classic 13x13 four-rooms layout; start top-right, goal bottom-left.
GridSpec four_rooms_spec();

/// Builds a spec from text rows: '#' wall, '.' or ' ' empty, 'S' start, 'G' goal.
GridSpec grid_from_layout(const std::vector<std::string>& rows, const std::string& name = "custom");

/// Observation: H x W x C image with values in [0,1].
struct Observation {
  nn::Shape shape;
  std::vector<double> pixels;

  bool operator==(const Observation&) const = default;
};

struct StepResult {
  Observation obs;
  double r_ext{0.0};
  bool done{false};
  bool truncated{false};
  bool reached_goal{false};
  Cell position;
};

/// Deterministic gridworld. Moves one cell per step unless the target is a
/// wall or outside the grid, in which case the agent stays put.
class GridWorld {
 public:
  explicit GridWorld(GridSpec spec);

  /// Starts a new episode. Dynamics are deterministic, so the seed only
  /// identifies the episode; identical seeds give identical observations.
  Observation reset(std::uint64_t seed = 0);
  StepResult step(Action action);

  Observation render_observation() const;

  const GridSpec& spec() const { return spec_; }
  nn::Shape observation_shape() const { return nn::Shape{spec_.height, spec_.width, 1}; }
  Cell position() const { return position_; }
  bool episode_active() const { return active_; }
  int episode_steps() const { return episode_steps_; }
  std::uint64_t seed() const { return seed_; }

 private:
  GridSpec spec_;
  std::vector<std::uint8_t> wall_mask_;
  Cell position_;
  bool active_{false};
  int episode_steps_{0};
  std::uint64_t seed_{0};
};

/// Length of the shortest 4-connected path from start to goal, or nullopt
/// when the goal is missing or unreachable.
std::optional<int> shortest_path_length(const GridSpec& spec);

}  // namespace adazero::envs
