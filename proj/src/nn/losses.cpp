#include "adazero/nn/losses.hpp"

#include <algorithm>
#include <cmath>

#include "adazero/common/error.hpp"

namespace adazero::nn {

LossResult half_squared_error(const Matrix& prediction, const Matrix& target) {
  require(prediction.rows() == target.rows() && prediction.cols() == target.cols(),
          "half_squared_error: prediction and target shapes differ");
  require(prediction.rows() > 0, "half_squared_error: empty batch");
  const double batch = static_cast<double>(prediction.rows());
  LossResult result;
  Matrix diff = prediction - target;
  result.loss = 0.5 * diff.squaredNorm() / batch;
  result.grad = diff / batch;
  return result;
}

LossResult binary_cross_entropy(const Matrix& probability, const Matrix& labels) {
  require(probability.cols() == 1 && labels.cols() == 1 && probability.rows() == labels.rows(),
          "binary_cross_entropy expects one probability and one label per row");
  require(probability.rows() > 0, "binary_cross_entropy: empty batch");
  constexpr double kClamp = 1e-12;
  const double batch = static_cast<double>(probability.rows());
  LossResult result;
  result.grad = Matrix::Zero(probability.rows(), 1);
  for (Eigen::Index i = 0; i < probability.rows(); ++i) {
    const double p = std::clamp(probability(i, 0), kClamp, 1.0 - kClamp);
    const double y = labels(i, 0);
    result.loss -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    result.grad(i, 0) = (-y / p + (1.0 - y) / (1.0 - p)) / batch;
  }
  result.loss /= batch;
  return result;
}

double half_squared_distance(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "half_squared_distance: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return 0.5 * sum;
}

}  // namespace adazero::nn
