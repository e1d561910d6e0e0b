#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adazero/intrinsic/arch.hpp"
#include "adazero/nn/adam.hpp"
#include "adazero/nn/network.hpp"

namespace adazero::intrinsic {

/// Encoder trunk, one dense unit, sigmoid.
nn::Network build_evaluator(nn::Shape input, const EncoderArch& arch);

/// Classifier scoring how real a reconstructed state looks. Its output on a
/// reconstruction is the mastery level alpha in [0, 1].
class MasteryEvaluator {
 public:
  MasteryEvaluator(nn::Shape input, const EncoderArch& arch, const nn::AdamConfig& adam, std::uint64_t seed);

  /// Wraps an existing network; it must produce a single sigmoid output.
  MasteryEvaluator(nn::Network net, const nn::AdamConfig& adam);

  double score(std::span<const double> obs_hat) const;
  std::vector<double> score_batch(const nn::Matrix& batch) const;

  /// One Adam step on binary cross-entropy with real rows labelled 1 and
  /// fake rows labelled 0. Returns the loss before the step.
  double train_step(const nn::Matrix& real, const nn::Matrix& fake);

  /// Zeroes the final dense layer so every input scores exactly 0.5.
  void zero_output_layer();

  nn::Network& network() { return net_; }
  const nn::Network& network() const { return net_; }
  nn::AdamConfig& adam() { return adam_; }

 private:
  nn::Network net_;
  nn::AdamConfig adam_;
};

}  // namespace adazero::intrinsic
