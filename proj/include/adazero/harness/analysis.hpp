#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "adazero/nn/grad_check.hpp"
#include "adazero/nn/tensor.hpp"

namespace adazero::harness {

struct DensityPlot {
  std::filesystem::path image;
  std::size_t coverage{0};
  std::uint64_t total_steps{0};
};

/// Renders density.csv (a run directory or the file itself) as a log-scaled
/// grayscale PGM. Throws std::runtime_error when nothing was visited.
DensityPlot plot_density(const std::filesystem::path& run_or_csv, const std::filesystem::path& image = {});

/// metrics.csv plus the identifying fields of summary.json.
struct RunLog {
  std::filesystem::path dir;
  std::string variant;
  std::uint64_t seed{0};
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json summary;
};

/// Reads a run directory. Throws std::runtime_error on a missing or empty
/// metrics file.
RunLog load_run_log(const std::filesystem::path& dir);

struct Comparison {
  std::vector<std::string> variants;  // in first-seen order
  std::vector<std::string> columns;   // header of the aligned table
  std::vector<std::vector<double>> rows;
  // Median over seeds of each summary scalar, per variant.
  std::map<std::string, std::map<std::string, double>> summary_medians;
};

/// Aligns the logs row by row (up to the shortest), takes per-variant medians
/// across seeds of every metric, and adds "<variant>-<first variant>"
/// difference columns. Needs at least two logs with identical columns.
Comparison compare_runs(const std::vector<RunLog>& logs);

void write_comparison_csv(const Comparison& comparison, const std::filesystem::path& path);
nlohmann::json to_json(const Comparison& comparison);

struct NetworkGradCheck {
  std::string name;
  nn::GradientReport report;
};

/// Finite-difference checks of the autoencoder, evaluator and policy
/// networks at random initialisation on an observation of `shape`.
/// `max_per_block` limits how many parameters of each block are perturbed
/// (0 = all).
std::vector<NetworkGradCheck> grad_check_networks(nn::Shape shape, std::uint64_t seed, std::size_t max_per_block,
                                                  double step = 1e-6);

}  // namespace adazero::harness
