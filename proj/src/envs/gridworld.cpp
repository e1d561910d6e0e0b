#include "adazero/envs/gridworld.hpp"

#include <deque>

#include "adazero/common/error.hpp"

namespace adazero::envs {

std::string to_string(Cell cell) { return std::to_string(cell.row) + "," + std::to_string(cell.col); }

Action action_from_index(int index) {
  require(index >= 0 && index < kNumActions, "action index out of range");
  return static_cast<Action>(index);
}

void GridSpec::validate() const {
  require(height > 0 && width > 0, "grid dimensions must be positive");
  require(max_episode_steps > 0, "max_episode_steps must be positive");
  require(goal_reward >= 0.0, "goal_reward must be non-negative");
  for (const Cell& w : walls) require(in_bounds(w), "wall cell " + to_string(w) + " outside the grid");
  require(in_bounds(start), "start cell outside the grid");
  require(!is_wall(start), "start cell is a wall");
  if (goal) {
    require(in_bounds(*goal), "goal cell outside the grid");
    require(!is_wall(*goal), "goal cell is a wall");
    require(*goal != start, "goal coincides with start");
  }
}

GridSpec dark_chamber_spec() {
  GridSpec spec;
  spec.name = "dark_chamber";
  spec.height = 50;
  spec.width = 50;
  spec.start = Cell{49, 0};
  spec.goal = std::nullopt;
  spec.goal_reward = 0.0;
  spec.max_episode_steps = 500;
  return spec;
}

GridSpec four_rooms_spec() {
  GridSpec spec = grid_from_layout(
      {
          "#############",
          "#.....#....S#",
          "#.....#.....#",
          "#...........#",
          "#.....#.....#",
          "#.....#.....#",
          "##.####.....#",
          "#.....###.###",
          "#.....#.....#",
          "#.....#.....#",
          "#...........#",
          "#G....#.....#",
          "#############",
      },
      "four_rooms");
  spec.goal_reward = 1.0;
  spec.max_episode_steps = 300;
  return spec;
}

GridSpec grid_from_layout(const std::vector<std::string>& rows, const std::string& name) {
  require(!rows.empty(), "layout has no rows");
  GridSpec spec;
  spec.name = name;
  spec.height = static_cast<int>(rows.size());
  spec.width = static_cast<int>(rows.front().size());
  bool have_start = false;
  for (int r = 0; r < spec.height; ++r) {
    require(static_cast<int>(rows[r].size()) == spec.width, "layout rows must have equal width");
    for (int c = 0; c < spec.width; ++c) {
      switch (rows[r][c]) {
        case '#': spec.walls.insert(Cell{r, c}); break;
        case '.':
        case ' ': break;
        case 'S':
          require(!have_start, "layout has more than one start");
          spec.start = Cell{r, c};
          have_start = true;
          break;
        case 'G':
          require(!spec.goal.has_value(), "layout has more than one goal");
          spec.goal = Cell{r, c};
          break;
        default:
          throw ContractViolation(std::string("unknown layout character '") + rows[r][c] + "'");
      }
    }
  }
  require(have_start, "layout has no start cell");
  return spec;
}

GridWorld::GridWorld(GridSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  wall_mask_.assign(static_cast<std::size_t>(spec_.height) * spec_.width, 0);
  for (const Cell& w : spec_.walls) wall_mask_[static_cast<std::size_t>(w.row) * spec_.width + w.col] = 1;
  position_ = spec_.start;
}

Observation GridWorld::reset(std::uint64_t seed) {
  seed_ = seed;
  position_ = spec_.start;
  episode_steps_ = 0;
  active_ = true;
  return render_observation();
}

StepResult GridWorld::step(Action action) {
  require(active_, "step called on a finished episode; call reset first");
  Cell next = position_;
  switch (action) {
    case Action::Up: --next.row; break;
    case Action::Down: ++next.row; break;
    case Action::Left: --next.col; break;
    case Action::Right: ++next.col; break;
    default: throw ContractViolation("invalid action");
  }
  if (spec_.in_bounds(next) && wall_mask_[static_cast<std::size_t>(next.row) * spec_.width + next.col] == 0) {
    position_ = next;
  }
  ++episode_steps_;

  StepResult result;
  result.position = position_;
  if (spec_.goal && position_ == *spec_.goal) {
    result.reached_goal = true;
    result.r_ext = spec_.goal_reward;
    result.done = true;
  } else if (episode_steps_ >= spec_.max_episode_steps) {
    result.truncated = true;
    result.done = true;
  }
  active_ = !result.done;
  result.obs = render_observation();
  return result;
}

Observation GridWorld::render_observation() const {
  Observation obs;
  obs.shape = observation_shape();
  obs.pixels.resize(obs.shape.size());
  for (std::size_t i = 0; i < wall_mask_.size(); ++i) obs.pixels[i] = wall_mask_[i] ? kWallLevel : kEmptyLevel;
  if (spec_.goal) obs.pixels[static_cast<std::size_t>(spec_.goal->row) * spec_.width + spec_.goal->col] = kGoalLevel;
  obs.pixels[static_cast<std::size_t>(position_.row) * spec_.width + position_.col] = kAgentLevel;
  return obs;
}

std::optional<int> shortest_path_length(const GridSpec& spec) {
  if (!spec.goal) return std::nullopt;
  std::vector<int> dist(static_cast<std::size_t>(spec.height) * spec.width, -1);
  auto index = [&](Cell c) { return static_cast<std::size_t>(c.row) * spec.width + c.col; };
  std::deque<Cell> frontier{spec.start};
  dist[index(spec.start)] = 0;
  const Cell moves[] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};
  while (!frontier.empty()) {
    const Cell cur = frontier.front();
    frontier.pop_front();
    if (cur == *spec.goal) return dist[index(cur)];
    for (const Cell& m : moves) {
      const Cell next{cur.row + m.row, cur.col + m.col};
      if (!spec.in_bounds(next) || spec.is_wall(next) || dist[index(next)] >= 0) continue;
      dist[index(next)] = dist[index(cur)] + 1;
      frontier.push_back(next);
    }
  }
  return std::nullopt;
}

}  // namespace adazero::envs
