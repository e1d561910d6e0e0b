#pragma once

#include <span>

#include "adazero/nn/tensor.hpp"

namespace adazero::nn {

struct LossResult {
  double loss{0.0};
  Matrix grad;  // d loss / d prediction, same shape as the prediction
};

/// Per-sample 1/2 * ||prediction - target||^2, averaged over the batch.
LossResult half_squared_error(const Matrix& prediction, const Matrix& target);

/// Mean binary cross-entropy of probabilities against {0,1} labels (one
/// column). Probabilities are clamped away from 0 and 1.
LossResult binary_cross_entropy(const Matrix& probability, const Matrix& labels);

double half_squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace adazero::nn
