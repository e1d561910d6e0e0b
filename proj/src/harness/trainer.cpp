#include "adazero/harness/trainer.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "adazero/common/error.hpp"
#include "adazero/intrinsic/autoencoder.hpp"
#include "adazero/intrinsic/evaluator.hpp"
#include "adazero/nn/checkpoint.hpp"
#include "adazero/policy/ppo.hpp"

namespace adazero::harness {

namespace fs = std::filesystem;

const std::vector<std::string>& metrics_columns() {
  static const std::vector<std::string> columns{
      "step",        "update",     "episodes",   "episode_return_ext", "success_rate", "mean_entropy",
      "mean_alpha",  "mean_r_int", "mean_recon_error", "mean_r_total", "policy_loss",      "value_loss",   "approx_kl",
      "clip_fraction", "ae_loss",  "ev_loss",    "coverage"};
  return columns;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return fnv1a(buf.str());
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser over (seed, stream)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

fs::path default_run_dir(const RunConfig& config, std::uint64_t seed) {
  return config.output_dir / (config.env + "_" + to_string(config.variant) + "_seed" + std::to_string(seed));
}

GreedyPath greedy_path(const policy::ActorCritic& policy, const envs::GridSpec& spec) {
  GreedyPath path;
  path.optimal_length = envs::shortest_path_length(spec);
  envs::GridWorld env(spec);
  envs::Observation obs = env.reset(0);
  while (env.episode_active()) {
    const envs::StepResult r = env.step(envs::action_from_index(policy.greedy_action(obs.pixels)));
    path.cells.push_back(r.position);
    path.reached_goal = r.reached_goal;
    obs = r.obs;
  }
  return path;
}

namespace {

enum Stream : std::uint64_t { kPolicyInit, kAeInit, kEvInit, kEnv, kRollout, kPpo, kAeBatch };

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}

void write_metrics_row(std::ostream& out, const MetricsRow& r) {
  out << r.step << ',' << r.update << ',' << r.episodes << ',' << format_double(r.episode_return_ext) << ','
      << format_double(r.success_rate) << ',' << format_double(r.mean_entropy) << ','
      << format_double(r.mean_alpha) << ',' << format_double(r.mean_r_int) << ','
      << format_double(r.mean_recon_error) << ','
      << format_double(r.mean_r_total) << ',' << format_double(r.policy_loss) << ','
      << format_double(r.value_loss) << ',' << format_double(r.approx_kl) << ','
      << format_double(r.clip_fraction) << ',' << format_double(r.ae_loss) << ',' << format_double(r.ev_loss)
      << ',' << r.coverage << '\n';
}

std::vector<std::uint8_t> path_overlay(const envs::GridSpec& spec, const GreedyPath& path) {
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(spec.height) * spec.width, 0);
  auto at = [&](envs::Cell c) -> std::uint8_t& { return pixels[static_cast<std::size_t>(c.row) * spec.width + c.col]; };
  for (const auto& w : spec.walls) at(w) = 80;
  for (const auto& c : path.cells) at(c) = 200;
  if (spec.goal) at(*spec.goal) = 160;
  at(spec.start) = 255;
  return pixels;
}

intrinsic::AlphaFn alpha_for(Variant variant, const intrinsic::MasteryEvaluator& ev) {
  switch (variant) {
    case Variant::AdaZero: return intrinsic::evaluator_alpha(ev);
    case Variant::NoAdaptive: return intrinsic::constant_alpha(0.0);
    case Variant::NoIntrinsic: return intrinsic::constant_alpha(1.0);
  }
  throw ContractViolation("unknown variant");
}

}  // namespace

RunResult train(const RunConfig& config, std::uint64_t seed, const fs::path& run_dir, const TrainOptions& options) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const nn::Shape shape{config.grid.height, config.grid.width, 1};

  RunConfig echo_config = config;
  echo_config.seeds = {seed};
  const std::string echo = config_echo(echo_config);

  std::ofstream metrics_out;
  std::ofstream rewards_out;
  if (options.write_files) {
    fs::create_directories(run_dir / "checkpoints");
    std::ofstream(run_dir / "config.ini") << echo;
    metrics_out.open(run_dir / "metrics.csv");
    for (std::size_t i = 0; i < metrics_columns().size(); ++i) {
      metrics_out << (i ? "," : "") << metrics_columns()[i];
    }
    metrics_out << '\n';
    if (config.log_rewards) {
      rewards_out.open(run_dir / "rewards.csv");
      rewards_out << "step,r_ext,r_int_raw,alpha,r_total\n";
    }
  }

  policy::ActorCritic actor(shape, config.policy_arch, envs::kNumActions, config.policy_adam,
                            derive_seed(seed, kPolicyInit));
  intrinsic::StateAutoencoder ae(shape, config.ae_arch, config.ae_adam, derive_seed(seed, kAeInit));
  intrinsic::MasteryEvaluator ev(shape, config.ev_arch, config.ev_adam, derive_seed(seed, kEvInit));
  policy::EnvCursor cursor(config.grid, derive_seed(seed, kEnv));
  std::mt19937_64 rollout_rng(derive_seed(seed, kRollout));
  std::mt19937_64 ppo_rng(derive_seed(seed, kPpo));
  std::mt19937_64 ae_rng(derive_seed(seed, kAeBatch));

  const intrinsic::AlphaFn alpha = options.alpha_override ? *options.alpha_override : alpha_for(config.variant, ev);
  intrinsic::IntrinsicNormalizer normalizer;
  double recon_error_sum = 0.0;
  const policy::RewardFn reward = [&](std::span<const double> obs, double r_ext) {
    const intrinsic::Reconstruction rec = ae.reconstruct(obs);
    recon_error_sum += rec.r_int;
    double r_int = rec.r_int;
    if (config.normalize_intrinsic) {
      normalizer.observe(r_int);
      r_int = normalizer.normalize(r_int);
    }
    return intrinsic::combine(r_ext, r_int, alpha(rec.obs_hat));
  };

  RunResult result;
  result.run_dir = run_dir;
  result.seed = seed;
  std::deque<bool> recent;
  std::size_t recent_success = 0;

  while (result.steps < config.total_steps) {
    const int horizon = static_cast<int>(std::min<std::int64_t>(config.ppo.horizon, config.total_steps - result.steps));
    try {
      recon_error_sum = 0.0;
      policy::RolloutBatch batch = policy::collect_rollout(actor, cursor, reward, horizon, rollout_rng);
      policy::compute_gae(batch, config.ppo.gamma, config.ppo.lambda);

      MetricsRow row;
      double ae_loss = 0.0;
      double ev_loss = 0.0;
      const auto cols = static_cast<Eigen::Index>(shape.size());
      std::uniform_int_distribution<std::size_t> pick(0, batch.transitions.size() - 1);
      for (int k = 0; k < config.ae_steps_per_update; ++k) {
        nn::Matrix real(config.ae_batch, cols);
        for (int i = 0; i < config.ae_batch; ++i) {
          const auto& obs = batch.transitions[pick(ae_rng)].obs;
          real.row(i) = Eigen::Map<const nn::RowVector>(obs.data(), cols);
        }
        ae_loss += ae.train_step(real);
        nn::Matrix fake;
        ae.intrinsic_rewards(real, &fake);
        ev_loss += ev.train_step(real, fake);
      }
      if (config.ae_steps_per_update > 0) {
        ae_loss /= config.ae_steps_per_update;
        ev_loss /= config.ae_steps_per_update;
      }

      const policy::PpoStats stats = policy::ppo_update(actor, batch, config.ppo, ppo_rng);

      result.steps += horizon;
      ++result.updates;
      double return_sum = 0.0;
      for (const auto& ep : batch.episodes) {
        return_sum += ep.return_ext;
        recent.push_back(ep.reached_goal);
        recent_success += ep.reached_goal ? 1 : 0;
        if (recent.size() > 100) {
          recent_success -= recent.front() ? 1 : 0;
          recent.pop_front();
        }
      }
      result.episodes += batch.episodes.size();

      double r_total_sum = 0.0;
      for (const auto& tr : batch.transitions) r_total_sum += tr.breakdown.r_total;
      row.step = result.steps;
      row.update = result.updates;
      row.episodes = static_cast<int>(batch.episodes.size());
      row.episode_return_ext = batch.episodes.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                      : return_sum / static_cast<double>(batch.episodes.size());
      row.success_rate = recent.empty() ? 0.0 : static_cast<double>(recent_success) / recent.size();
      row.mean_entropy = batch.record.mean_policy_entropy;
      row.mean_alpha = batch.record.mean_alpha;
      row.mean_r_int = batch.record.mean_r_int;
      row.mean_recon_error = recon_error_sum / static_cast<double>(batch.transitions.size());
      row.mean_r_total = r_total_sum / static_cast<double>(batch.transitions.size());
      row.policy_loss = stats.policy_loss;
      row.value_loss = stats.value_loss;
      row.approx_kl = stats.approx_kl;
      row.clip_fraction = stats.clip_fraction;
      row.ae_loss = ae_loss;
      row.ev_loss = ev_loss;
      row.coverage = cursor.density.coverage();
      result.metrics.push_back(row);
      result.entropy_records.push_back(batch.record);

      if (options.write_files) {
        write_metrics_row(metrics_out, row);
        metrics_out.flush();
        if (config.log_rewards) {
          std::int64_t step = result.steps - horizon;
          for (const auto& tr : batch.transitions) {
            const auto& b = tr.breakdown;
            rewards_out << ++step << ',' << format_double(b.r_ext) << ',' << format_double(b.r_int_raw) << ','
                        << format_double(b.alpha) << ',' << format_double(b.r_total) << '\n';
          }
        }
        if (config.checkpoint_every > 0 && result.updates % config.checkpoint_every == 0) {
          const std::string tag = std::to_string(result.updates);
          nn::save_checkpoint(actor.network(), run_dir / "checkpoints" / ("policy_" + tag + ".aznn"));
          nn::save_checkpoint(ae.network(), run_dir / "checkpoints" / ("autoencoder_" + tag + ".aznn"));
          nn::save_checkpoint(ev.network(), run_dir / "checkpoints" / ("evaluator_" + tag + ".aznn"));
        }
      }
      if (!options.quiet) {
        std::cerr << run_dir.filename().string() << " step " << row.step << " cover " << row.coverage
                  << " success " << row.success_rate << " H " << row.mean_entropy << " alpha " << row.mean_alpha
                  << " r_int " << row.mean_r_int << '\n';
      }
    } catch (const std::exception& e) {
      throw TrainingHalted("training halted at step " + std::to_string(result.steps) + " (update " +
                           std::to_string(result.updates + 1) + ") of " + run_dir.string() + ": " + e.what() +
                           "\nconfig:\n" + echo);
    }
    if (config.stop_at_success_rate > 0.0 && recent.size() >= 100 &&
        static_cast<double>(recent_success) / recent.size() >= config.stop_at_success_rate) {
      result.stopped_early = result.steps < config.total_steps;
      break;
    }
  }

  result.density = cursor.density;
  result.success_rate_last100 = recent.empty() ? 0.0 : static_cast<double>(recent_success) / recent.size();
  result.greedy = greedy_path(actor, config.grid);
  result.config_hash = fnv1a(echo);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  if (options.write_files) {
    metrics_out.close();
    rewards_out.close();
    result.metrics_hash = fnv1a_file(run_dir / "metrics.csv");
    envs::write_density_csv(result.density, run_dir / "density.csv");
    if (result.density.total_steps > 0) {
      envs::write_pgm(run_dir / "density.pgm", result.density.height, result.density.width,
                      envs::density_heatmap(result.density));
    }
    {
      std::ofstream path_out(run_dir / "greedy_path.csv");
      path_out << "step,row,col\n";
      for (std::size_t i = 0; i < result.greedy.cells.size(); ++i) {
        path_out << i + 1 << ',' << result.greedy.cells[i].row << ',' << result.greedy.cells[i].col << '\n';
      }
    }
    envs::write_pgm(run_dir / "greedy_path.pgm", config.grid.height, config.grid.width,
                    path_overlay(config.grid, result.greedy));
    nn::save_checkpoint(actor.network(), run_dir / "checkpoints" / "policy_final.aznn");
    nn::save_checkpoint(ae.network(), run_dir / "checkpoints" / "autoencoder_final.aznn");
    nn::save_checkpoint(ev.network(), run_dir / "checkpoints" / "evaluator_final.aznn");

    std::size_t free_cells = static_cast<std::size_t>(config.grid.height) * config.grid.width - config.grid.walls.size();
    nlohmann::json summary{
        {"env", config.env},
        {"variant", to_string(config.variant)},
        {"seed", seed},
        {"steps", result.steps},
        {"updates", result.updates},
        {"stopped_early", result.stopped_early},
        {"coverage", result.density.coverage()},
        {"coverage_fraction", static_cast<double>(result.density.coverage()) / static_cast<double>(free_cells)},
        {"episodes", result.episodes},
        {"success_rate_last100", result.success_rate_last100},
        {"greedy_path",
         {{"reached_goal", result.greedy.reached_goal},
          {"length", result.greedy.reached_goal ? nlohmann::json(result.greedy.cells.size()) : nlohmann::json()},
          {"optimal_length", result.greedy.optimal_length ? nlohmann::json(*result.greedy.optimal_length)
                                                          : nlohmann::json()}}},
        {"metrics_hash", result.metrics_hash},
        {"config_hash", result.config_hash},
        {"seconds", result.seconds}};
    std::ofstream(run_dir / "summary.json") << summary.dump(2) << '\n';
  }
  return result;
}

}  // namespace adazero::harness
