#include "adazero/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace adazero::nn {

double relative_error(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

namespace {

std::vector<Eigen::Index> pick_indices(Eigen::Index count, const GradCheckOptions& options,
                                       std::mt19937_64& rng) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(count));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  if (options.max_per_block != 0 && idx.size() > options.max_per_block) {
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(options.max_per_block);
    std::sort(idx.begin(), idx.end());
  }
  return idx;
}

}  // namespace

GradientReport grad_check(Network& net, const Matrix& input, const OutputLoss& loss,
                          const GradCheckOptions& options) {
  GradientReport report;
  const LossResult base = loss(net.forward(input));
  const Gradients analytic = net.backward(base.grad);
  std::mt19937_64 rng(options.subset_seed);
  const double floor = std::max(options.denominator_floor, options.loss_relative_floor * std::abs(base.loss));

  auto numeric_at = [&](double& slot) {
    const double saved = slot;
    slot = saved + options.step;
    const double up = loss(net.predict(input)).loss;
    slot = saved - options.step;
    const double down = loss(net.predict(input)).loss;
    slot = saved;
    return (up - down) / (2.0 * options.step);
  };

  auto layers = net.layers();
  for (std::size_t li = 0; li < layers.size(); ++li) {
    Layer& layer = layers[li];
    if (!layer.has_params()) continue;
    for (bool is_bias : {false, true}) {
      double* params = is_bias ? layer.bias.data() : layer.weights.data();
      const double* grads = is_bias ? analytic[li].bias.data() : analytic[li].weights.data();
      const Eigen::Index count = is_bias ? layer.bias.size() : layer.weights.size();
      BlockError block{li, is_bias, 0, 0.0};
      for (Eigen::Index k : pick_indices(count, options, rng)) {
        const double numeric = numeric_at(params[k]);
        block.max_relative_error =
            std::max(block.max_relative_error, relative_error(grads[k], numeric, floor));
        ++block.checked;
      }
      report.parameters_checked += block.checked;
      report.max_relative_error = std::max(report.max_relative_error, block.max_relative_error);
      report.blocks.push_back(block);
    }
  }
  net.clear_cache();
  return report;
}

}  // namespace adazero::nn
