#include "adazero/nn/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "adazero/common/error.hpp"

namespace adazero::nn {

PolicyDistribution softmax(std::span<const double> logits) {
  require(!logits.empty(), "softmax of an empty vector");
  const double peak = *std::max_element(logits.begin(), logits.end());
  require(std::isfinite(peak), "softmax requires finite logits");
  PolicyDistribution dist;
  dist.probs.resize(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    dist.probs[i] = std::exp(logits[i] - peak);
    total += dist.probs[i];
  }
  for (double& p : dist.probs) p /= total;
  return dist;
}

std::vector<double> log_softmax(std::span<const double> logits) {
  require(!logits.empty(), "log_softmax of an empty vector");
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double z : logits) total += std::exp(z - peak);
  const double log_total = std::log(total);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - peak - log_total;
  return out;
}

double entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double binary_entropy(double p) {
  const double q[2] = {p, 1.0 - p};
  return entropy(q);
}

}  // namespace adazero::nn
