#include "adazero/intrinsic/evaluator.hpp"

#include <cmath>
#include <random>

#include "adazero/common/error.hpp"
#include "adazero/nn/losses.hpp"

namespace adazero::intrinsic {

nn::Network build_evaluator(nn::Shape input, const EncoderArch& arch) {
  nn::Network net(input);
  append_encoder(net, arch);
  net.dense(1).sigmoid();
  return net;
}

MasteryEvaluator::MasteryEvaluator(nn::Shape input, const EncoderArch& arch, const nn::AdamConfig& adam,
                                   std::uint64_t seed)
    : net_(build_evaluator(input, arch)), adam_(adam) {
  std::mt19937_64 rng(seed);
  net_.initialize(rng);
}

MasteryEvaluator::MasteryEvaluator(nn::Network net, const nn::AdamConfig& adam) : net_(std::move(net)), adam_(adam) {
  require(net_.output_size() == 1, "evaluator must produce one output");
  require(!net_.layers().empty() && net_.layers().back().kind == nn::LayerKind::Sigmoid,
          "evaluator must end with a sigmoid");
}

double MasteryEvaluator::score(std::span<const double> obs_hat) const {
  require(obs_hat.size() == net_.input_size(), "score: input size " + std::to_string(obs_hat.size()) +
                                                   " does not match " + net_.input_shape().to_string());
  const nn::Matrix input = Eigen::Map<const nn::Matrix>(obs_hat.data(), 1, static_cast<Eigen::Index>(obs_hat.size()));
  return net_.predict(input)(0, 0);
}

std::vector<double> MasteryEvaluator::score_batch(const nn::Matrix& batch) const {
  const nn::Matrix out = net_.predict(batch);
  return std::vector<double>(out.data(), out.data() + out.size());
}

double MasteryEvaluator::train_step(const nn::Matrix& real, const nn::Matrix& fake) {
  require(real.rows() > 0 && fake.rows() > 0, "evaluator train_step: both batches must be nonempty");
  require(real.cols() == fake.cols(), "evaluator train_step: real and fake rows differ in size");
  nn::Matrix inputs(real.rows() + fake.rows(), real.cols());
  inputs << real, fake;
  nn::Matrix labels = nn::Matrix::Zero(inputs.rows(), 1);
  labels.topRows(real.rows()).setOnes();

  const nn::Matrix probs = net_.forward(inputs);
  const nn::LossResult loss = nn::binary_cross_entropy(probs, labels);
  if (!std::isfinite(loss.loss)) {
    net_.clear_cache();
    throw TrainingHalted("evaluator loss is not finite (" + std::to_string(loss.loss) + ")");
  }
  nn::adam_step(net_, net_.backward(loss.grad), adam_);
  return loss.loss;
}

void MasteryEvaluator::zero_output_layer() {
  for (auto it = net_.layers().rbegin(); it != net_.layers().rend(); ++it) {
    if (it->kind == nn::LayerKind::Dense) {
      it->weights.setZero();
      it->bias.setZero();
      return;
    }
  }
}

}  // namespace adazero::intrinsic
