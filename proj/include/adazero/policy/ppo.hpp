#pragma once

#include <random>
#include <vector>

#include "adazero/policy/actor_critic.hpp"
#include "adazero/policy/rollout.hpp"

namespace adazero::policy {

struct PpoConfig {
  double gamma{0.99};
  double lambda{0.95};
  double clip{0.2};  // may be +infinity: plain importance-weighted surrogate
  int epochs{4};
  int minibatch{64};
  int horizon{2048};
  double value_coef{0.5};
  double entropy_coef{0.0};
  double max_grad_norm{0.0};  // 0 disables clipping
  bool normalize_advantages{true};
};

struct PpoMinibatch {
  nn::Matrix obs;
  std::vector<int> actions;
  std::vector<double> old_logprobs;
  std::vector<double> advantages;
  std::vector<double> returns;
};

struct PpoLoss {
  double total{0.0};
  double policy{0.0};
  double value{0.0};
  double entropy{0.0};
  double approx_kl{0.0};
  double clip_fraction{0.0};
  nn::Matrix grad;  // d total / d network output
};

/// Clipped surrogate + value_coef * 1/2 mean (V - R)^2 - entropy_coef * mean H,
/// evaluated on network outputs (|A| logits then the value, one row per sample).
PpoLoss ppo_loss(const nn::Matrix& outputs, const PpoMinibatch& mb, int num_actions, const PpoConfig& config);

struct PpoStats {
  double policy_loss{0.0};
  double value_loss{0.0};
  double entropy{0.0};
  double approx_kl{0.0};
  double clip_fraction{0.0};
  int gradient_steps{0};
};

/// Advantages shifted to mean 0 and scaled to std 1 (std floored at 1e-8).
/// A single advantage is left as is: its std is undefined.
std::vector<double> normalized_advantages(const std::vector<double>& advantages);

/// Runs `epochs` passes of shuffled minibatch Adam steps over the batch.
/// Requires compute_gae to have filled advantages and returns.
PpoStats ppo_update(ActorCritic& policy, const RolloutBatch& batch, const PpoConfig& config, std::mt19937_64& rng);

}  // namespace adazero::policy
