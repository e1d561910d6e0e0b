#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adazero/envs/gridworld.hpp"
#include "adazero/intrinsic/arch.hpp"
#include "adazero/nn/adam.hpp"
#include "adazero/policy/ppo.hpp"

namespace adazero::harness {

/// adazero: alpha from the evaluator. no_adaptive: alpha forced to 0.
/// no_intrinsic: alpha forced to 1.
enum class Variant { AdaZero, NoAdaptive, NoIntrinsic };

const char* to_string(Variant v);
Variant parse_variant(const std::string& name);

struct RunConfig {
  std::string env{"dark_chamber"};
  envs::GridSpec grid{envs::dark_chamber_spec()};
  Variant variant{Variant::AdaZero};
  std::int64_t total_steps{50000};
  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path output_dir{"runs"};
  int checkpoint_every{50};  // policy updates between checkpoints; 0 disables
  bool log_rewards{true};
  bool normalize_intrinsic{false};
  // Stop once the last 100 finished episodes reach this success rate; 0 disables.
  double stop_at_success_rate{0.0};

  policy::PpoConfig ppo;
  nn::AdamConfig policy_adam;
  intrinsic::EncoderArch policy_arch;

  nn::AdamConfig ae_adam;
  intrinsic::EncoderArch ae_arch;
  int ae_steps_per_update{32};
  int ae_batch{64};

  nn::AdamConfig ev_adam;
  intrinsic::EncoderArch ev_arch;

  /// Throws std::invalid_argument on inconsistent values.
  void validate() const;
};

/// Defaults for a named environment; architectures follow the grid size.
RunConfig default_run_config(const std::string& env);

/// Reads an INI file with sections [run], [grid], [ppo], [policy],
/// [autoencoder], [evaluator]. Unknown sections or keys are rejected.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const std::string& ini_text);

/// INI text that parse_run_config turns back into the same configuration.
std::string config_echo(const RunConfig& config);

/// "8:3:1 16:2:2" = channels:kernel:stride per conv layer; "none" for no convs.
std::vector<intrinsic::ConvSpec> parse_convs(const std::string& text);
std::string format_convs(const std::vector<intrinsic::ConvSpec>& convs);

}  // namespace adazero::harness
