#include "adazero/harness/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

#include "adazero/common/stats.hpp"
#include "adazero/envs/density.hpp"
#include "adazero/intrinsic/autoencoder.hpp"
#include "adazero/intrinsic/evaluator.hpp"
#include "adazero/nn/losses.hpp"
#include "adazero/policy/actor_critic.hpp"
#include "adazero/policy/ppo.hpp"

namespace adazero::harness {

namespace fs = std::filesystem;

DensityPlot plot_density(const fs::path& run_or_csv, const fs::path& image) {
  const fs::path csv = fs::is_directory(run_or_csv) ? run_or_csv / "density.csv" : run_or_csv;
  const envs::VisitDensity density = envs::read_density_csv(csv);
  if (density.total_steps == 0) throw std::runtime_error(csv.string() + " records no visits");
  DensityPlot plot;
  plot.image = image.empty() ? csv.parent_path() / "density.pgm" : image;
  plot.coverage = density.coverage();
  plot.total_steps = density.total_steps;
  envs::write_pgm(plot.image, density.height, density.width, envs::density_heatmap(density));
  return plot;
}

RunLog load_run_log(const fs::path& dir) {
  RunLog log;
  log.dir = dir;
  std::ifstream in(dir / "metrics.csv");
  if (!in) throw std::runtime_error("no metrics.csv in " + dir.string());
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw std::runtime_error(dir.string() + ": empty metrics log");
  {
    std::istringstream header(line);
    std::string col;
    while (std::getline(header, col, ',')) log.columns.push_back(col);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) row.push_back(field == "nan" ? std::nan("") : std::stod(field));
    if (row.size() != log.columns.size()) throw std::runtime_error(dir.string() + ": ragged metrics row");
    log.rows.push_back(std::move(row));
  }
  if (log.rows.empty()) throw std::runtime_error(dir.string() + ": empty metrics log");
  std::ifstream summary(dir / "summary.json");
  if (summary) {
    summary >> log.summary;
    log.variant = log.summary.value("variant", "unknown");
    log.seed = log.summary.value("seed", std::uint64_t{0});
  } else {
    log.variant = dir.filename().string();
  }
  return log;
}

namespace {

double median_ignoring_nan(std::vector<double> values) {
  values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return std::isnan(v); }), values.end());
  return values.empty() ? std::nan("") : median(values);
}

std::vector<std::string> summary_scalars(const nlohmann::json& summary) {
  std::vector<std::string> keys;
  for (const auto& [key, value] : summary.items()) {
    if (value.is_number() && key != "seed" && key != "metrics_hash" && key != "config_hash") keys.push_back(key);
  }
  return keys;
}

}  // namespace

Comparison compare_runs(const std::vector<RunLog>& logs) {
  if (logs.size() < 2) throw std::invalid_argument("compare needs at least two run logs");
  for (const RunLog& log : logs) {
    if (log.rows.empty()) throw std::invalid_argument(log.dir.string() + ": empty metrics log");
    if (log.columns != logs.front().columns) {
      throw std::invalid_argument(log.dir.string() + ": metrics columns differ from " + logs.front().dir.string());
    }
  }
  Comparison cmp;
  for (const RunLog& log : logs) {
    if (std::find(cmp.variants.begin(), cmp.variants.end(), log.variant) == cmp.variants.end()) {
      cmp.variants.push_back(log.variant);
    }
  }
  std::size_t length = logs.front().rows.size();
  for (const RunLog& log : logs) length = std::min(length, log.rows.size());

  const std::vector<std::string>& metrics = logs.front().columns;
  cmp.columns.push_back("row");
  for (const auto& v : cmp.variants) {
    for (const auto& m : metrics) cmp.columns.push_back(v + ":" + m);
  }
  for (std::size_t vi = 1; vi < cmp.variants.size(); ++vi) {
    for (const auto& m : metrics) cmp.columns.push_back(cmp.variants[vi] + "-" + cmp.variants[0] + ":" + m);
  }

  for (std::size_t r = 0; r < length; ++r) {
    std::vector<double> out{static_cast<double>(r + 1)};
    std::vector<std::vector<double>> per_variant;
    for (const auto& v : cmp.variants) {
      std::vector<double> medians;
      for (std::size_t c = 0; c < metrics.size(); ++c) {
        std::vector<double> values;
        for (const RunLog& log : logs) {
          if (log.variant == v) values.push_back(log.rows[r][c]);
        }
        medians.push_back(median_ignoring_nan(values));
      }
      out.insert(out.end(), medians.begin(), medians.end());
      per_variant.push_back(std::move(medians));
    }
    for (std::size_t vi = 1; vi < per_variant.size(); ++vi) {
      for (std::size_t c = 0; c < metrics.size(); ++c) out.push_back(per_variant[vi][c] - per_variant[0][c]);
    }
    cmp.rows.push_back(std::move(out));
  }

  for (const auto& v : cmp.variants) {
    std::map<std::string, std::vector<double>> values;
    for (const RunLog& log : logs) {
      if (log.variant != v || !log.summary.is_object()) continue;
      for (const auto& key : summary_scalars(log.summary)) values[key].push_back(log.summary[key].get<double>());
    }
    for (auto& [key, vals] : values) cmp.summary_medians[v][key] = median(vals);
  }
  return cmp;
}

void write_comparison_csv(const Comparison& cmp, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < cmp.columns.size(); ++i) out << (i ? "," : "") << cmp.columns[i];
  out << '\n' << std::setprecision(10);
  for (const auto& row : cmp.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "");
      if (std::isnan(row[i])) {
        out << "nan";
      } else {
        out << row[i];
      }
    }
    out << '\n';
  }
}

nlohmann::json to_json(const Comparison& cmp) {
  nlohmann::json out;
  out["variants"] = cmp.variants;
  out["rows"] = cmp.rows.size();
  out["summary_medians"] = cmp.summary_medians;
  return out;
}

std::vector<NetworkGradCheck> grad_check_networks(nn::Shape shape, std::uint64_t seed, std::size_t max_per_block,
                                                  double step) {
  const intrinsic::EncoderArch arch = intrinsic::default_arch_for(shape);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto cols = static_cast<Eigen::Index>(shape.size());
  const nn::Matrix input = nn::Matrix::NullaryExpr(3, cols, [&] { return u(rng); });
  nn::GradCheckOptions options;
  options.max_per_block = max_per_block;
  options.subset_seed = seed;
  options.step = step;
  options.loss_relative_floor = 1e-5;

  std::vector<NetworkGradCheck> out;
  {
    intrinsic::StateAutoencoder ae(shape, arch, nn::AdamConfig{}, seed + 1);
    const nn::OutputLoss loss = [&](const nn::Matrix& y) { return nn::half_squared_error(y, input); };
    out.push_back({"autoencoder", nn::grad_check(ae.network(), input, loss, options)});
  }
  {
    intrinsic::MasteryEvaluator ev(shape, arch, nn::AdamConfig{}, seed + 2);
    nn::Matrix labels(3, 1);
    labels << 1.0, 0.0, 1.0;
    const nn::OutputLoss loss = [&](const nn::Matrix& y) { return nn::binary_cross_entropy(y, labels); };
    out.push_back({"evaluator", nn::grad_check(ev.network(), input, loss, options)});
  }
  {
    policy::ActorCritic actor(shape, arch, 4, nn::AdamConfig{}, seed + 3);
    const nn::Matrix outputs = actor.network().predict(input);
    policy::PpoMinibatch mb;
    for (int i = 0; i < 3; ++i) {
      const auto logp = nn::log_softmax(std::span<const double>(outputs.row(i).data(), 4));
      mb.actions.push_back(i % 4);
      mb.old_logprobs.push_back(logp[static_cast<std::size_t>(i % 4)] - 0.05 * i);
      mb.advantages.push_back(u(rng) - 0.5);
      mb.returns.push_back(u(rng));
    }
    policy::PpoConfig config;
    config.entropy_coef = 0.01;
    const nn::OutputLoss loss = [&](const nn::Matrix& y) {
      const policy::PpoLoss l = policy::ppo_loss(y, mb, 4, config);
      return nn::LossResult{l.total, l.grad};
    };
    out.push_back({"policy", nn::grad_check(actor.network(), input, loss, options)});
  }
  return out;
}

}  // namespace adazero::harness
