#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "adazero/intrinsic/arch.hpp"
#include "adazero/nn/adam.hpp"
#include "adazero/nn/distribution.hpp"
#include "adazero/nn/network.hpp"

namespace adazero::policy {

struct ActionChoice {
  int action{0};
  double logprob{0.0};
  double value{0.0};
  double entropy{0.0};
};

/// Anything that can drive a rollout: samples actions and estimates values.
class RolloutPolicy {
 public:
  virtual ~RolloutPolicy() = default;
  virtual ActionChoice act(std::span<const double> obs, std::mt19937_64& rng) const = 0;
  virtual double value(std::span<const double> obs) const = 0;
};

/// Shared trunk with one output row of |A| logits followed by a value.
class ActorCritic : public RolloutPolicy {
 public:
  ActorCritic(nn::Shape input, const intrinsic::EncoderArch& trunk, int num_actions, const nn::AdamConfig& adam,
              std::uint64_t seed);
  ActorCritic(nn::Network net, int num_actions, const nn::AdamConfig& adam);

  ActionChoice act(std::span<const double> obs, std::mt19937_64& rng) const override;
  double value(std::span<const double> obs) const override;

  nn::PolicyDistribution distribution(std::span<const double> obs) const;
  int greedy_action(std::span<const double> obs) const;

  int num_actions() const { return num_actions_; }
  nn::Network& network() { return net_; }
  const nn::Network& network() const { return net_; }
  nn::AdamConfig& adam() { return adam_; }
  const nn::AdamConfig& adam() const { return adam_; }

 private:
  nn::Matrix predict_row(std::span<const double> obs) const;

  nn::Network net_;
  int num_actions_;
  nn::AdamConfig adam_;
};

/// Trunk + dense(|A| + 1). The logit columns of the head start 100x smaller
/// than the value column so the initial policy is close to uniform.
nn::Network build_actor_critic(nn::Shape input, const intrinsic::EncoderArch& trunk, int num_actions);

/// Draws an index from `probs` by inverting the cumulative distribution.
int sample_index(const nn::PolicyDistribution& dist, std::mt19937_64& rng);

/// pi(a|s) = exp Q(s,a) / sum_k exp Q(s,k).
nn::PolicyDistribution softmax_policy_from_q(std::span<const double> q_values);

/// Average entropy over a set of distributions.
double mean_entropy(std::span<const nn::PolicyDistribution> policies);

/// Average entropy of the network's policy over probe states (one per row).
double mean_entropy(const ActorCritic& policy, const nn::Matrix& probe_states);

}  // namespace adazero::policy
