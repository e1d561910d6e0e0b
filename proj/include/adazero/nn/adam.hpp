#pragma once

#include "adazero/nn/network.hpp"

namespace adazero::nn {

struct AdamConfig {
  double learning_rate{3e-4};
  double beta1{0.9};
  double beta2{0.999};
  double epsilon{1e-8};
};

/// One bias-corrected Adam update; moments live in the network's layers.
/// Throws TrainingHalted on a non-finite gradient or if an update would
/// leave a non-finite weight.
void adam_step(Network& net, const Gradients& grads, const AdamConfig& config);

}  // namespace adazero::nn
