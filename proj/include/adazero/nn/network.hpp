#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "adazero/nn/tensor.hpp"

namespace adazero::nn {

enum class LayerKind : std::uint32_t {
  Dense = 0,
  Conv2D = 1,
  ReLU = 2,
  Tanh = 3,
  Sigmoid = 4,
};

const char* layer_kind_name(LayerKind kind);

struct ConvGeometry {
  int kernel{1};
  int stride{1};
  int padding{0};

  bool operator==(const ConvGeometry&) const = default;
};

/// One layer descriptor together with its parameters and Adam moments.
///
/// Dense weights are (inputs x outputs). Conv2D weights are
/// (kernel*kernel*in_channels x out_channels) with the patch flattened in
/// (ky, kx, channel) order, matching the image layout.
struct Layer {
  LayerKind kind{LayerKind::Dense};
  Shape input_shape;
  Shape output_shape;
  ConvGeometry conv;

  Matrix weights;
  RowVector bias;

  Matrix weights_m;
  Matrix weights_v;
  RowVector bias_m;
  RowVector bias_v;

  bool has_params() const { return kind == LayerKind::Dense || kind == LayerKind::Conv2D; }
};

struct LayerGradient {
  Matrix weights;
  RowVector bias;
};

/// Gradients for every layer of a network, in layer order. Activation layers
/// carry empty blocks.
using Gradients = std::vector<LayerGradient>;

Gradients zeros_like(const class Network& net);
void accumulate(Gradients& into, const Gradients& from, double scale = 1.0);
void scale(Gradients& grads, double factor);
double global_norm(const Gradients& grads);
bool all_finite(const Gradients& grads);

/// A feed-forward stack of dense / conv / activation layers (the parameter
/// set of one model). `forward` caches what `backward` needs; `predict` is a
/// const, cache-free path that is safe to call concurrently on a snapshot.
class Network {
 public:
  Network() = default;
  explicit Network(Shape input);

  Network& dense(int units);
  Network& conv2d(int channels, int kernel, int stride, int padding = 0);
  Network& relu();
  Network& tanh();
  Network& sigmoid();

  /// Uniform(+-sqrt(6 / (fan_in + fan_out))) weights, zero biases, fresh
  /// Adam moments.
  void initialize(std::mt19937_64& rng);

  Shape input_shape() const { return input_; }
  Shape output_shape() const;
  std::size_t input_size() const { return input_.size(); }
  std::size_t output_size() const { return output_shape().size(); }

  Matrix forward(const Matrix& input);
  Matrix predict(const Matrix& input) const;
  Gradients backward(const Matrix& output_grad);

  bool has_cache() const { return cached_; }
  void clear_cache();

  std::span<Layer> layers() { return layers_; }
  std::span<const Layer> layers() const { return layers_; }

  std::size_t parameter_count() const;
  bool parameters_finite() const;

  std::int64_t adam_steps() const { return adam_steps_; }
  void set_adam_steps(std::int64_t steps) { adam_steps_ = steps; }

  /// Appends a layer whose shapes were already validated (checkpoint loading).
  void append_layer(Layer layer);

 private:
  void check_input(const Matrix& input) const;

  Shape input_;
  std::vector<Layer> layers_;
  std::int64_t adam_steps_{0};

  bool cached_{false};
  std::vector<Matrix> layer_inputs_;
  std::vector<Matrix> layer_outputs_;
  std::vector<Matrix> patches_;
};

}  // namespace adazero::nn
