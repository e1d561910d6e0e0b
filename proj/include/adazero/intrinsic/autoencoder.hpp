#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adazero/common/stats.hpp"
#include "adazero/intrinsic/arch.hpp"
#include "adazero/nn/adam.hpp"
#include "adazero/nn/network.hpp"

namespace adazero::intrinsic {

struct Reconstruction {
  std::vector<double> obs_hat;
  double r_int{0.0};  // 1/2 * sum (s - s_hat)^2 over pixels
};

/// Encoder trunk, dense bottleneck, dense decoder back to the input size,
/// final sigmoid.
nn::Network build_autoencoder(nn::Shape input, const EncoderArch& arch);

/// State autoencoder whose reconstruction error is the intrinsic reward.
class StateAutoencoder {
 public:
  StateAutoencoder(nn::Shape input, const EncoderArch& arch, const nn::AdamConfig& adam, std::uint64_t seed);

  /// Wraps an existing network. Its output must match its input size and its
  /// last layer must be a sigmoid.
  StateAutoencoder(nn::Network net, const nn::AdamConfig& adam);

  Reconstruction reconstruct(std::span<const double> obs) const;

  /// Row-wise intrinsic rewards and reconstructions for a batch.
  std::vector<double> intrinsic_rewards(const nn::Matrix& batch, nn::Matrix* reconstructions = nullptr) const;

  /// One Adam step on the mean reconstruction loss. Returns the loss before
  /// the step. Throws TrainingHalted when the loss is not finite.
  double train_step(const nn::Matrix& batch);

  nn::Shape input_shape() const { return net_.input_shape(); }
  nn::Network& network() { return net_; }
  const nn::Network& network() const { return net_; }
  nn::AdamConfig& adam() { return adam_; }

 private:
  nn::Network net_;
  nn::AdamConfig adam_;
};

/// Divides raw intrinsic rewards by an exponentially weighted root mean
/// square, so the scale tracks the autoencoder as it improves.
class IntrinsicNormalizer {
 public:
  explicit IntrinsicNormalizer(double decay = 0.999);
  double normalize(double r_int) const;
  void observe(double r_int);
  double scale() const;

 private:
  double decay_;
  double mean_square_{0.0};
  std::size_t count_{0};
};

}  // namespace adazero::intrinsic
