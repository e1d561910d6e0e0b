#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <iostream>

#include "adazero/envs/grid_config.hpp"
#include "adazero/harness/analysis.hpp"
#include "adazero/harness/config.hpp"
#include "adazero/harness/trainer.hpp"
#include "adazero/theory/theory.hpp"

using namespace adazero;

namespace {

int run_train(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& variant,
              std::optional<std::int64_t> steps, bool verbose) {
  harness::RunConfig config = harness::load_run_config(config_path);
  if (!variant.empty()) config.variant = harness::parse_variant(variant);
  if (steps) config.total_steps = *steps;
  if (seed) config.seeds = {*seed};
  config.validate();
  harness::TrainOptions options;
  options.quiet = !verbose;
  for (std::uint64_t s : config.seeds) {
    const auto dir = harness::default_run_dir(config, s);
    const harness::RunResult r = harness::train(config, s, dir, options);
    std::cout << dir.string() << " coverage " << r.density.coverage() << " success " << r.success_rate_last100
              << " seconds " << r.seconds << '\n';
  }
  return 0;
}

int run_verify_theory(std::size_t samples, std::uint64_t seed) {
  const theory::Lemma1SweepReport lemma1 = theory::sweep_lemma1(samples, seed);
  const theory::Theorem2SuiteReport theorem2 = theory::theorem2_suite(samples, seed + 1);
  const theory::MonotonicityReport mono = theory::entropy_monotonicity_scan(999);
  nlohmann::json report;
  report["lemma1"] = theory::to_json(lemma1);
  report["theorem2"] = theory::to_json(theorem2);
  report["monotonicity"] = theory::to_json(mono);
  const bool ok = lemma1.passed() && theorem2.passed() && mono.passed();
  report["passed"] = ok;
  std::cout << report.dump(2) << '\n';
  return ok ? 0 : 1;
}

int run_plot_density(const std::string& input, const std::string& output) {
  const harness::DensityPlot plot = harness::plot_density(input, output);
  nlohmann::json out;
  out["image"] = plot.image.string();
  out["coverage"] = plot.coverage;
  out["total_steps"] = plot.total_steps;
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_compare(const std::vector<std::string>& dirs, const std::string& output) {
  std::vector<harness::RunLog> logs;
  for (const auto& d : dirs) logs.push_back(harness::load_run_log(d));
  const harness::Comparison cmp = harness::compare_runs(logs);
  if (!output.empty()) harness::write_comparison_csv(cmp, output);
  std::cout << harness::to_json(cmp).dump(2) << '\n';
  return 0;
}

int run_grad_check(const std::string& env, std::uint64_t seed, std::size_t per_block, double step, double tolerance) {
  const auto start = std::chrono::steady_clock::now();
  const envs::GridSpec grid = envs::preset_grid(env);
  const auto checks = harness::grad_check_networks(nn::Shape{grid.height, grid.width, 1}, seed, per_block, step);
  nlohmann::json out;
  bool ok = true;
  for (const auto& c : checks) {
    const bool pass = c.report.max_relative_error <= tolerance;
    ok = ok && pass;
    out["networks"][c.name] = {{"max_relative_error", c.report.max_relative_error},
                               {"parameters_checked", c.report.parameters_checked},
                               {"passed", pass}};
    for (const auto& b : c.report.blocks) {
      out["networks"][c.name]["blocks"].push_back(
          {{"layer", b.layer}, {"bias", b.bias}, {"checked", b.checked}, {"max_relative_error", b.max_relative_error}});
    }
  }
  out["tolerance"] = tolerance;
  out["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out["passed"] = ok;
  std::cout << out.dump(2) << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AdaZero exploration/exploitation lab"};
  app.require_subcommand(1);

  auto* train = app.add_subcommand("train", "Train one or more seeds from a config file");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string variant_override;
  std::optional<std::int64_t> steps_override;
  bool verbose = false;
  train->add_option("--config", config_path, "INI config")->required()->check(CLI::ExistingFile);
  train->add_option("--seed", seed, "Run only this seed");
  train->add_option("--variant", variant_override, "Override [run] variant");
  train->add_option("--steps", steps_override, "Override [run] total_steps");
  train->add_flag("-v,--verbose", verbose, "Progress line per update on stderr");

  auto* verify = app.add_subcommand("verify-theory", "Check the two-action entropy results numerically");
  std::size_t samples = 100000;
  std::uint64_t theory_seed = 0;
  verify->add_option("--samples", samples, "In-region specs per sweep")->check(CLI::PositiveNumber);
  verify->add_option("--seed", theory_seed, "Sampling seed");

  auto* plot = app.add_subcommand("plot-density", "Render a visit-density heatmap");
  std::string plot_input;
  std::string plot_output;
  plot->add_option("runlog", plot_input, "Run directory or density.csv")->required()->check(CLI::ExistingPath);
  plot->add_option("-o,--output", plot_output, "PGM path (default: density.pgm next to the CSV)");

  auto* compare = app.add_subcommand("compare", "Median metrics per variant across run directories");
  std::vector<std::string> compare_dirs;
  std::string compare_output;
  compare->add_option("runlogs", compare_dirs, "Run directories")->required()->check(CLI::ExistingDirectory);
  compare->add_option("-o,--output", compare_output, "Write the aligned table as CSV");

  auto* grad = app.add_subcommand("grad-check", "Finite-difference check of every network");
  std::string grad_env = "dark_chamber";
  std::uint64_t grad_seed = 0;
  std::size_t per_block = 64;
  double tolerance = 1e-4;
  double fd_step = 1e-6;
  grad->add_option("--env", grad_env, "Preset whose observation shape is used");
  grad->add_option("--seed", grad_seed, "Initialisation seed");
  grad->add_option("--per-block", per_block, "Parameters sampled per weight block (0 = all)");
  grad->add_option("--step", fd_step, "Central-difference step");
  grad->add_option("--tolerance", tolerance, "Maximum relative error");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return run_train(config_path, seed, variant_override, steps_override, verbose);
    if (*verify) return run_verify_theory(samples, theory_seed);
    if (*plot) return run_plot_density(plot_input, plot_output);
    if (*compare) return run_compare(compare_dirs, compare_output);
    if (*grad) return run_grad_check(grad_env, grad_seed, per_block, fd_step, tolerance);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
