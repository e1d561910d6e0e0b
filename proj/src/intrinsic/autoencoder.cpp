#include "adazero/intrinsic/autoencoder.hpp"

#include <cmath>
#include <random>

#include "adazero/common/error.hpp"
#include "adazero/nn/losses.hpp"

namespace adazero::intrinsic {

nn::Network build_autoencoder(nn::Shape input, const EncoderArch& arch) {
  nn::Network net(input);
  append_encoder(net, arch);
  net.dense(static_cast<int>(input.size())).sigmoid();
  return net;
}

StateAutoencoder::StateAutoencoder(nn::Shape input, const EncoderArch& arch, const nn::AdamConfig& adam,
                                   std::uint64_t seed)
    : net_(build_autoencoder(input, arch)), adam_(adam) {
  std::mt19937_64 rng(seed);
  net_.initialize(rng);
}

StateAutoencoder::StateAutoencoder(nn::Network net, const nn::AdamConfig& adam) : net_(std::move(net)), adam_(adam) {
  require(net_.output_size() == net_.input_size(), "autoencoder output size must equal its input size");
  require(!net_.layers().empty() && net_.layers().back().kind == nn::LayerKind::Sigmoid,
          "autoencoder must end with a sigmoid");
}

Reconstruction StateAutoencoder::reconstruct(std::span<const double> obs) const {
  require(obs.size() == net_.input_size(), "reconstruct: observation size " + std::to_string(obs.size()) +
                                               " does not match " + net_.input_shape().to_string());
  const nn::Matrix input = Eigen::Map<const nn::Matrix>(obs.data(), 1, static_cast<Eigen::Index>(obs.size()));
  const nn::Matrix output = net_.predict(input);
  Reconstruction result;
  result.obs_hat.assign(output.data(), output.data() + output.size());
  result.r_int = nn::half_squared_distance(obs, result.obs_hat);
  return result;
}

std::vector<double> StateAutoencoder::intrinsic_rewards(const nn::Matrix& batch, nn::Matrix* reconstructions) const {
  const nn::Matrix output = net_.predict(batch);
  std::vector<double> rewards(static_cast<std::size_t>(batch.rows()));
  for (Eigen::Index i = 0; i < batch.rows(); ++i) {
    rewards[static_cast<std::size_t>(i)] = 0.5 * (batch.row(i) - output.row(i)).squaredNorm();
  }
  if (reconstructions) *reconstructions = output;
  return rewards;
}

double StateAutoencoder::train_step(const nn::Matrix& batch) {
  require(batch.rows() > 0, "autoencoder train_step: empty batch");
  const nn::Matrix output = net_.forward(batch);
  const nn::LossResult loss = nn::half_squared_error(output, batch);
  if (!std::isfinite(loss.loss)) {
    net_.clear_cache();
    throw TrainingHalted("autoencoder loss is not finite (" + std::to_string(loss.loss) + ")");
  }
  nn::adam_step(net_, net_.backward(loss.grad), adam_);
  return loss.loss;
}

IntrinsicNormalizer::IntrinsicNormalizer(double decay) : decay_(decay) {
  require(decay >= 0.0 && decay < 1.0, "normalizer decay must lie in [0,1)");
}

double IntrinsicNormalizer::scale() const { return count_ == 0 ? 1.0 : std::sqrt(mean_square_) + 1e-8; }

double IntrinsicNormalizer::normalize(double r_int) const { return r_int / scale(); }

void IntrinsicNormalizer::observe(double r_int) {
  mean_square_ = count_ == 0 ? r_int * r_int : decay_ * mean_square_ + (1.0 - decay_) * r_int * r_int;
  ++count_;
}

}  // namespace adazero::intrinsic
