#include "adazero/policy/rollout.hpp"

#include "adazero/common/error.hpp"

namespace adazero::policy {

EnvCursor::EnvCursor(envs::GridSpec spec, std::uint64_t seed)
    : env(std::move(spec)), density(env.spec().height, env.spec().width), base_seed(seed) {
  start_episode();
}

void EnvCursor::start_episode() {
  obs = env.reset(base_seed + episodes_started);
  ++episodes_started;
  episode_return_ext = 0.0;
  episode_length = 0;
}

RolloutBatch collect_rollout(const RolloutPolicy& policy, EnvCursor& cursor, const RewardFn& reward, int horizon,
                             std::mt19937_64& rng) {
  require(horizon >= 1, "collect_rollout: horizon must be at least 1");
  RolloutBatch batch;
  batch.transitions.reserve(static_cast<std::size_t>(horizon));
  double entropy_sum = 0.0;
  double alpha_sum = 0.0;
  double r_int_sum = 0.0;

  for (int t = 0; t < horizon; ++t) {
    const ActionChoice choice = policy.act(cursor.obs.pixels, rng);
    const envs::StepResult step = cursor.env.step(envs::action_from_index(choice.action));
    cursor.density.add(step.position);
    ++cursor.total_steps;
    ++cursor.episode_length;
    cursor.episode_return_ext += step.r_ext;

    Transition tr;
    tr.obs = std::move(cursor.obs.pixels);
    tr.action = choice.action;
    tr.logprob = choice.logprob;
    tr.value_estimate = choice.value;
    tr.entropy = choice.entropy;
    tr.breakdown = reward(step.obs.pixels, step.r_ext);
    tr.done = step.done;
    tr.truncated = step.truncated;
    if (step.truncated) tr.truncation_value = policy.value(step.obs.pixels);

    entropy_sum += choice.entropy;
    alpha_sum += tr.breakdown.alpha;
    r_int_sum += tr.breakdown.r_int_raw;
    batch.transitions.push_back(std::move(tr));

    if (step.done) {
      batch.episodes.push_back(EpisodeSummary{cursor.episode_return_ext, cursor.episode_length, step.reached_goal});
      cursor.start_episode();
    } else {
      cursor.obs = step.obs;
    }
  }

  batch.bootstrap_value = batch.transitions.back().done ? 0.0 : policy.value(cursor.obs.pixels);
  const double n = static_cast<double>(horizon);
  batch.record = EntropyRecord{cursor.total_steps, entropy_sum / n, alpha_sum / n, r_int_sum / n};
  return batch;
}

void compute_gae(RolloutBatch& batch, double gamma, double lambda) {
  require(gamma >= 0.0 && gamma < 1.0, "compute_gae: gamma must lie in [0, 1)");
  require(lambda >= 0.0 && lambda <= 1.0, "compute_gae: lambda must lie in [0, 1]");
  const std::size_t n = batch.transitions.size();
  batch.advantages.assign(n, 0.0);
  batch.returns.assign(n, 0.0);
  double running = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const Transition& tr = batch.transitions[i];
    double next_value = 0.0;
    bool continues = false;
    if (tr.done) {
      next_value = tr.truncated ? tr.truncation_value : 0.0;
    } else if (i + 1 < n) {
      next_value = batch.transitions[i + 1].value_estimate;
      continues = true;
    } else {
      next_value = batch.bootstrap_value;
    }
    const double delta = tr.breakdown.r_total + gamma * next_value - tr.value_estimate;
    running = delta + (continues ? gamma * lambda * running : 0.0);
    batch.advantages[i] = running;
    batch.returns[i] = running + tr.value_estimate;
  }
  for (double a : batch.advantages) {
    if (!std::isfinite(a)) throw TrainingHalted("non-finite advantage in rollout batch");
  }
}

}  // namespace adazero::policy
