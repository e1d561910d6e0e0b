#pragma once

#include <filesystem>
#include <string>

#include <boost/property_tree/ptree.hpp>

#include "adazero/envs/gridworld.hpp"

namespace adazero::envs {

/// Resolves an environment name (dark_chamber, four_rooms) to its preset.
GridSpec preset_grid(const std::string& name);

/// Applies the keys of a [grid] section on top of `base`. Recognised keys:
/// preset, height, width, layout, walls, start, goal, goal_reward,
/// max_episode_steps. Unknown keys are rejected with std::invalid_argument.
///
/// layout  rows separated by '/', e.g. "#####/#S.G#/#####"
/// walls   space-separated "row,col" pairs
/// start   "row,col"; goal "row,col" or "none"
GridSpec apply_grid_section(GridSpec base, const boost::property_tree::ptree& section);

/// Reads a structured-text (INI) file whose [grid] section describes a grid.
GridSpec load_grid_spec(const std::filesystem::path& path);

Cell parse_cell(const std::string& text);

}  // namespace adazero::envs
