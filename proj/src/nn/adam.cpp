#include "adazero/nn/adam.hpp"

#include <cmath>
#include <string>

#include "adazero/common/error.hpp"

namespace adazero::nn {

void adam_step(Network& net, const Gradients& grads, const AdamConfig& config) {
  auto layers = net.layers();
  require(grads.size() == layers.size(), "adam_step: gradient blocks do not match the network");
  if (!all_finite(grads)) throw TrainingHalted("adam_step: non-finite gradient");

  const std::int64_t t = net.adam_steps() + 1;
  const double correction1 = 1.0 - std::pow(config.beta1, static_cast<double>(t));
  const double correction2 = 1.0 - std::pow(config.beta2, static_cast<double>(t));

  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = config.beta1 * m + (1.0 - config.beta1) * g;
    v = config.beta2 * v + (1.0 - config.beta2) * g.cwiseProduct(g);
    param.array() -= config.learning_rate * (m.array() / correction1) /
                     ((v.array() / correction2).sqrt() + config.epsilon);
  };

  for (std::size_t i = 0; i < layers.size(); ++i) {
    Layer& layer = layers[i];
    if (!layer.has_params()) continue;
    require(grads[i].weights.rows() == layer.weights.rows() && grads[i].weights.cols() == layer.weights.cols() &&
                grads[i].bias.size() == layer.bias.size(),
            "adam_step: gradient shape mismatch in layer " + std::to_string(i));
    update(layer.weights, layer.weights_m, layer.weights_v, grads[i].weights);
    update(layer.bias, layer.bias_m, layer.bias_v, grads[i].bias);
  }
  net.set_adam_steps(t);
  net.clear_cache();
  if (!net.parameters_finite()) throw TrainingHalted("adam_step: parameters became non-finite");
}

}  // namespace adazero::nn
