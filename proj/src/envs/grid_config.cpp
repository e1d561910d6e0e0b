#include "adazero/envs/grid_config.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>

namespace adazero::envs {

GridSpec preset_grid(const std::string& name) {
  if (name == "dark_chamber") return dark_chamber_spec();
  if (name == "four_rooms") return four_rooms_spec();
  throw std::invalid_argument("unknown environment preset '" + name + "'");
}

Cell parse_cell(const std::string& text) {
  Cell cell;
  char comma = 0;
  std::istringstream in(text);
  if (!(in >> cell.row >> comma >> cell.col) || comma != ',' || !(in >> std::ws).eof()) {
    throw std::invalid_argument("expected a cell as 'row,col', got '" + text + "'");
  }
  return cell;
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

}  // namespace

GridSpec apply_grid_section(GridSpec spec, const boost::property_tree::ptree& section) {
  static const std::set<std::string> known{"preset", "height", "width", "layout", "walls",
                                           "start", "goal", "goal_reward", "max_episode_steps"};
  for (const auto& [key, _] : section) {
    if (!known.contains(key)) throw std::invalid_argument("unknown [grid] key '" + key + "'");
  }
  if (auto preset = section.get_optional<std::string>("preset")) spec = preset_grid(*preset);
  if (auto layout = section.get_optional<std::string>("layout")) {
    const std::string name = spec.name;
    const int cap = spec.max_episode_steps;
    const double reward = spec.goal_reward;
    spec = grid_from_layout(split(*layout, '/'), name);
    spec.max_episode_steps = cap;
    spec.goal_reward = reward;
  }
  if (auto v = section.get_optional<int>("height")) spec.height = *v;
  if (auto v = section.get_optional<int>("width")) spec.width = *v;
  if (auto walls = section.get_optional<std::string>("walls")) {
    spec.walls.clear();
    std::istringstream in(*walls);
    std::string token;
    while (in >> token) spec.walls.insert(parse_cell(token));
  }
  if (auto v = section.get_optional<std::string>("start")) spec.start = parse_cell(*v);
  if (auto v = section.get_optional<std::string>("goal")) {
    spec.goal = (*v == "none") ? std::nullopt : std::optional<Cell>(parse_cell(*v));
  }
  if (auto v = section.get_optional<double>("goal_reward")) spec.goal_reward = *v;
  if (auto v = section.get_optional<int>("max_episode_steps")) spec.max_episode_steps = *v;
  spec.validate();
  return spec;
}

GridSpec load_grid_spec(const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  boost::property_tree::ini_parser::read_ini(path.string(), tree);
  const auto section = tree.get_child_optional("grid");
  if (!section) throw std::invalid_argument(path.string() + " has no [grid] section");
  return apply_grid_section(GridSpec{}, *section);
}

}  // namespace adazero::envs
