#include "adazero/policy/actor_critic.hpp"

#include <algorithm>

#include "adazero/common/error.hpp"

namespace adazero::policy {

nn::Network build_actor_critic(nn::Shape input, const intrinsic::EncoderArch& trunk, int num_actions) {
  require(num_actions >= 2, "actor-critic needs at least two actions");
  nn::Network net(input);
  intrinsic::append_encoder(net, trunk);
  net.dense(num_actions + 1);
  return net;
}

ActorCritic::ActorCritic(nn::Shape input, const intrinsic::EncoderArch& trunk, int num_actions,
                         const nn::AdamConfig& adam, std::uint64_t seed)
    : net_(build_actor_critic(input, trunk, num_actions)), num_actions_(num_actions), adam_(adam) {
  std::mt19937_64 rng(seed);
  net_.initialize(rng);
  nn::Layer& head = net_.layers().back();
  head.weights.leftCols(num_actions) *= 0.01;
}

ActorCritic::ActorCritic(nn::Network net, int num_actions, const nn::AdamConfig& adam)
    : net_(std::move(net)), num_actions_(num_actions), adam_(adam) {
  require(num_actions >= 2, "actor-critic needs at least two actions");
  require(net_.output_size() == static_cast<std::size_t>(num_actions) + 1,
          "actor-critic network must output |A| logits and one value");
}

nn::Matrix ActorCritic::predict_row(std::span<const double> obs) const {
  require(obs.size() == net_.input_size(), "policy: observation size " + std::to_string(obs.size()) +
                                               " does not match " + net_.input_shape().to_string());
  return net_.predict(Eigen::Map<const nn::Matrix>(obs.data(), 1, static_cast<Eigen::Index>(obs.size())));
}

nn::PolicyDistribution ActorCritic::distribution(std::span<const double> obs) const {
  const nn::Matrix out = predict_row(obs);
  return nn::softmax(std::span<const double>(out.data(), static_cast<std::size_t>(num_actions_)));
}

double ActorCritic::value(std::span<const double> obs) const { return predict_row(obs)(0, num_actions_); }

ActionChoice ActorCritic::act(std::span<const double> obs, std::mt19937_64& rng) const {
  const nn::Matrix out = predict_row(obs);
  const std::span<const double> logits(out.data(), static_cast<std::size_t>(num_actions_));
  const nn::PolicyDistribution dist = nn::softmax(logits);
  const std::vector<double> logp = nn::log_softmax(logits);
  ActionChoice choice;
  choice.action = sample_index(dist, rng);
  choice.logprob = logp[static_cast<std::size_t>(choice.action)];
  choice.value = out(0, num_actions_);
  choice.entropy = nn::entropy(dist);
  return choice;
}

int ActorCritic::greedy_action(std::span<const double> obs) const {
  const nn::PolicyDistribution dist = distribution(obs);
  return static_cast<int>(std::max_element(dist.probs.begin(), dist.probs.end()) - dist.probs.begin());
}

int sample_index(const nn::PolicyDistribution& dist, std::mt19937_64& rng) {
  require(dist.size() > 0, "cannot sample from an empty distribution");
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double cumulative = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    cumulative += dist[i];
    if (u < cumulative) return static_cast<int>(i);
  }
  // Rounding left u above the final partial sum: take the last action with
  // nonzero probability.
  for (std::size_t i = dist.size(); i-- > 0;) {
    if (dist[i] > 0.0) return static_cast<int>(i);
  }
  return 0;
}

nn::PolicyDistribution softmax_policy_from_q(std::span<const double> q_values) { return nn::softmax(q_values); }

double mean_entropy(std::span<const nn::PolicyDistribution> policies) {
  require(!policies.empty(), "mean_entropy: empty probe set");
  double total = 0.0;
  for (const auto& p : policies) total += nn::entropy(p);
  return total / static_cast<double>(policies.size());
}

double mean_entropy(const ActorCritic& policy, const nn::Matrix& probe_states) {
  require(probe_states.rows() > 0, "mean_entropy: empty probe set");
  const nn::Matrix out = policy.network().predict(probe_states);
  const auto a = static_cast<std::size_t>(policy.num_actions());
  double total = 0.0;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    total += nn::entropy(nn::softmax(std::span<const double>(out.row(i).data(), a)));
  }
  return total / static_cast<double>(out.rows());
}

}  // namespace adazero::policy
