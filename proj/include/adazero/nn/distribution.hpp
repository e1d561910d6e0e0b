#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace adazero::nn {

/// Action probabilities pi(.|s).
struct PolicyDistribution {
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  double operator[](std::size_t i) const { return probs[i]; }
};

/// Max-shifted softmax. Finite logits required.
PolicyDistribution softmax(std::span<const double> logits);

/// log softmax, computed with the same shift.
std::vector<double> log_softmax(std::span<const double> logits);

/// Shannon entropy in nats; 0 * log 0 is taken as 0.
double entropy(std::span<const double> probs);
inline double entropy(const PolicyDistribution& dist) { return entropy(dist.probs); }

/// Binary entropy H(p, 1 - p).
double binary_entropy(double p);

}  // namespace adazero::nn
