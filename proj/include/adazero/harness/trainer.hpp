#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adazero/envs/density.hpp"
#include "adazero/harness/config.hpp"
#include "adazero/intrinsic/adaptive_reward.hpp"
#include "adazero/policy/rollout.hpp"

namespace adazero::harness {

/// One row of metrics.csv, written after every policy update.
struct MetricsRow {
  std::int64_t step{0};
  int update{0};
  int episodes{0};                 // episodes finished in this rollout
  double episode_return_ext{0.0};  // their mean extrinsic return (NaN if none)
  double success_rate{0.0};        // over the last 100 finished episodes
  double mean_entropy{0.0};
  double mean_alpha{0.0};
  double mean_r_int{0.0};        // intrinsic reward fed to the mixer
  double mean_recon_error{0.0};  // raw reconstruction error before normalisation
  double mean_r_total{0.0};
  double policy_loss{0.0};
  double value_loss{0.0};
  double approx_kl{0.0};
  double clip_fraction{0.0};
  double ae_loss{0.0};
  double ev_loss{0.0};
  std::size_t coverage{0};
};

const std::vector<std::string>& metrics_columns();

struct GreedyPath {
  std::vector<envs::Cell> cells;  // positions after each step, start excluded
  bool reached_goal{false};
  std::optional<int> optimal_length;  // shortest path by BFS
};

/// Follows argmax actions from the start cell until the episode ends.
GreedyPath greedy_path(const policy::ActorCritic& policy, const envs::GridSpec& spec);

struct RunResult {
  std::filesystem::path run_dir;
  std::uint64_t seed{0};
  std::int64_t steps{0};
  int updates{0};
  bool stopped_early{false};
  std::vector<MetricsRow> metrics;
  std::vector<policy::EntropyRecord> entropy_records;
  envs::VisitDensity density;
  std::size_t episodes{0};
  double success_rate_last100{0.0};
  GreedyPath greedy;
  std::uint64_t metrics_hash{0};
  std::uint64_t config_hash{0};
  double seconds{0.0};
};

struct TrainOptions {
  // Replaces the variant's mastery source (used to check that the variants
  // differ only in alpha).
  std::optional<intrinsic::AlphaFn> alpha_override;
  bool write_files{true};
  bool quiet{true};
};

/// Runs one seed of the configured experiment and writes its artifacts to
/// `run_dir`: config.ini, metrics.csv, rewards.csv, density.csv/.pgm,
/// greedy_path.csv/.pgm, checkpoints/, summary.json.
RunResult train(const RunConfig& config, std::uint64_t seed, const std::filesystem::path& run_dir,
                const TrainOptions& options = {});

/// <output_dir>/<env>_<variant>_seed<seed>
std::filesystem::path default_run_dir(const RunConfig& config, std::uint64_t seed);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::uint64_t fnv1a_file(const std::filesystem::path& path);

/// Deterministic, well-mixed seed for an independent stream of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace adazero::harness
