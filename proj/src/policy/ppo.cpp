#include "adazero/policy/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "adazero/common/error.hpp"

namespace adazero::policy {

PpoLoss ppo_loss(const nn::Matrix& outputs, const PpoMinibatch& mb, int num_actions, const PpoConfig& config) {
  const Eigen::Index n = outputs.rows();
  require(n > 0 && outputs.cols() == num_actions + 1, "ppo_loss: outputs must have |A| + 1 columns");
  require(mb.actions.size() == static_cast<std::size_t>(n) && mb.old_logprobs.size() == mb.actions.size() &&
              mb.advantages.size() == mb.actions.size() && mb.returns.size() == mb.actions.size(),
          "ppo_loss: minibatch arrays disagree in length");
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto a_count = static_cast<std::size_t>(num_actions);

  PpoLoss loss;
  loss.grad = nn::Matrix::Zero(n, outputs.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const std::span<const double> logits(outputs.row(i).data(), a_count);
    const nn::PolicyDistribution dist = nn::softmax(logits);
    const std::vector<double> logp = nn::log_softmax(logits);
    const int a = mb.actions[idx];
    require(a >= 0 && a < num_actions, "ppo_loss: action out of range");

    const double log_ratio = logp[static_cast<std::size_t>(a)] - mb.old_logprobs[idx];
    const double ratio = std::exp(log_ratio);
    const double adv = mb.advantages[idx];
    const double unclipped = ratio * adv;
    const double clipped = std::clamp(ratio, 1.0 - config.clip, 1.0 + config.clip) * adv;
    loss.policy -= std::min(unclipped, clipped) * inv_n;
    // The clipped branch is flat in the parameters.
    const double d_logp = unclipped <= clipped ? -ratio * adv * inv_n : 0.0;
    if (clipped < unclipped) loss.clip_fraction += inv_n;
    loss.approx_kl += ((ratio - 1.0) - log_ratio) * inv_n;

    const double h = nn::entropy(dist);
    loss.entropy += h * inv_n;
    for (std::size_t j = 0; j < a_count; ++j) {
      const double p = dist[j];
      double g = d_logp * ((static_cast<int>(j) == a ? 1.0 : 0.0) - p);
      // d(-c H)/dz_j = c p_j (log p_j + H)
      if (config.entropy_coef != 0.0 && p > 0.0) g += config.entropy_coef * p * (logp[j] + h) * inv_n;
      loss.grad(i, static_cast<Eigen::Index>(j)) = g;
    }

    const double v_err = outputs(i, num_actions) - mb.returns[idx];
    loss.value += 0.5 * v_err * v_err * inv_n;
    loss.grad(i, num_actions) = config.value_coef * v_err * inv_n;
  }
  loss.total = loss.policy + config.value_coef * loss.value - config.entropy_coef * loss.entropy;
  return loss;
}

std::vector<double> normalized_advantages(const std::vector<double>& advantages) {
  if (advantages.size() < 2) return advantages;
  const double n = static_cast<double>(advantages.size());
  const double mean = std::accumulate(advantages.begin(), advantages.end(), 0.0) / n;
  double var = 0.0;
  for (double a : advantages) var += (a - mean) * (a - mean);
  const double sd = std::max(std::sqrt(var / n), 1e-8);
  std::vector<double> out(advantages.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (advantages[i] - mean) / sd;
  return out;
}

PpoStats ppo_update(ActorCritic& policy, const RolloutBatch& batch, const PpoConfig& config, std::mt19937_64& rng) {
  const std::size_t n = batch.transitions.size();
  require(n > 0, "ppo_update: empty batch");
  require(batch.advantages.size() == n && batch.returns.size() == n, "ppo_update: run compute_gae first");
  require(config.epochs >= 1 && config.minibatch >= 1, "ppo_update: epochs and minibatch must be positive");
  require(config.clip > 0.0, "ppo_update: clip must be positive");

  const std::vector<double> advantages =
      config.normalize_advantages ? normalized_advantages(batch.advantages) : batch.advantages;
  const auto obs_size = static_cast<Eigen::Index>(policy.network().input_size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  PpoStats stats;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(config.minibatch)) {
      const std::size_t end = std::min(n, start + static_cast<std::size_t>(config.minibatch));
      PpoMinibatch mb;
      mb.obs.resize(static_cast<Eigen::Index>(end - start), obs_size);
      for (std::size_t k = start; k < end; ++k) {
        const Transition& tr = batch.transitions[order[k]];
        mb.obs.row(static_cast<Eigen::Index>(k - start)) =
            Eigen::Map<const nn::RowVector>(tr.obs.data(), obs_size);
        mb.actions.push_back(tr.action);
        mb.old_logprobs.push_back(tr.logprob);
        mb.advantages.push_back(advantages[order[k]]);
        mb.returns.push_back(batch.returns[order[k]]);
      }
      nn::Network& net = policy.network();
      const nn::Matrix outputs = net.forward(mb.obs);
      const PpoLoss loss = ppo_loss(outputs, mb, policy.num_actions(), config);
      if (!std::isfinite(loss.total)) {
        net.clear_cache();
        throw TrainingHalted("PPO loss is not finite (" + std::to_string(loss.total) + ")");
      }
      nn::Gradients grads = net.backward(loss.grad);
      if (config.max_grad_norm > 0.0) {
        const double norm = nn::global_norm(grads);
        if (norm > config.max_grad_norm) nn::scale(grads, config.max_grad_norm / norm);
      }
      nn::adam_step(net, grads, policy.adam());
      stats.policy_loss += loss.policy;
      stats.value_loss += loss.value;
      stats.entropy += loss.entropy;
      stats.approx_kl += loss.approx_kl;
      stats.clip_fraction += loss.clip_fraction;
      ++stats.gradient_steps;
    }
  }
  const double steps = static_cast<double>(stats.gradient_steps);
  stats.policy_loss /= steps;
  stats.value_loss /= steps;
  stats.entropy /= steps;
  stats.approx_kl /= steps;
  stats.clip_fraction /= steps;
  return stats;
}

}  // namespace adazero::policy
