#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "adazero/envs/density.hpp"
#include "adazero/envs/gridworld.hpp"
#include "adazero/intrinsic/adaptive_reward.hpp"
#include "adazero/policy/actor_critic.hpp"

namespace adazero::policy {

struct Transition {
  std::vector<double> obs;  // state the action was taken in
  int action{0};
  double logprob{0.0};
  double value_estimate{0.0};
  intrinsic::RewardBreakdown breakdown;  // scored on the state the action led to
  bool done{false};                      // episode ended after this step
  bool truncated{false};                 // ended by the step cap rather than a terminal state
  double truncation_value{0.0};          // V(next state) when truncated
  double entropy{0.0};
};

struct EpisodeSummary {
  double return_ext{0.0};
  int length{0};
  bool reached_goal{false};
};

struct EntropyRecord {
  std::int64_t step{0};
  double mean_policy_entropy{0.0};
  double mean_alpha{0.0};
  double mean_r_int{0.0};
};

struct RolloutBatch {
  std::vector<Transition> transitions;
  double bootstrap_value{0.0};  // V(s) after the last transition, 0 if it ended an episode
  std::vector<double> advantages;
  std::vector<double> returns;
  std::vector<EpisodeSummary> episodes;  // episodes that finished inside this batch
  EntropyRecord record;
};

/// Environment plus the bookkeeping that persists across rollouts.
struct EnvCursor {
  envs::GridWorld env;
  envs::Observation obs;
  envs::VisitDensity density;
  std::uint64_t base_seed{0};
  std::uint64_t episodes_started{0};
  std::int64_t total_steps{0};
  double episode_return_ext{0.0};
  int episode_length{0};

  EnvCursor(envs::GridSpec spec, std::uint64_t seed);
  void start_episode();
};

/// Turns (next observation, extrinsic reward) into the training reward.
using RewardFn = std::function<intrinsic::RewardBreakdown(std::span<const double> next_obs, double r_ext)>;

/// Steps the cursor's environment `horizon` times under `policy`, recording
/// transitions, visit counts and finished episodes. Advantages are left empty;
/// see compute_gae.
RolloutBatch collect_rollout(const RolloutPolicy& policy, EnvCursor& cursor, const RewardFn& reward, int horizon,
                             std::mt19937_64& rng);

/// Generalized advantage estimation on r_total. Terminal steps do not
/// bootstrap; truncated steps bootstrap from truncation_value; the last step
/// of an unfinished batch bootstraps from bootstrap_value.
void compute_gae(RolloutBatch& batch, double gamma, double lambda);

}  // namespace adazero::policy
