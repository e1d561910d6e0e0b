#include "adazero/nn/network.hpp"

#include <cmath>
#include <string>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "adazero/common/error.hpp"

namespace adazero::nn {

namespace {

#if defined(__GLIBC__)
// Batch temporaries sit just above glibc's default mmap threshold, so every
// forward/backward pass would otherwise map and unmap fresh pages.
const bool kAllocatorTuned = [] {
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 512 << 20);
  return true;
}();
#endif

using ConstMatrixMap = Eigen::Map<const Matrix>;
using MatrixMap = Eigen::Map<Matrix>;

double stable_sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

int conv_extent(int in, const ConvGeometry& g) { return (in + 2 * g.padding - g.kernel) / g.stride + 1; }

// Gathers every receptive field of a batch into one row each:
// rows = batch * out_h * out_w, cols = kernel * kernel * in_channels.
Matrix im2col(const Matrix& input, const Layer& layer) {
  const Shape& in = layer.input_shape;
  const Shape& out = layer.output_shape;
  const ConvGeometry& g = layer.conv;
  const Eigen::Index batch = input.rows();
  const int patch = g.kernel * g.kernel * in.channels;
  Matrix patches = Matrix::Zero(batch * out.height * out.width, patch);
  for (Eigen::Index b = 0; b < batch; ++b) {
    const double* src = input.row(b).data();
    for (int oy = 0; oy < out.height; ++oy) {
      for (int ox = 0; ox < out.width; ++ox) {
        double* dst = patches.row((b * out.height + oy) * out.width + ox).data();
        for (int ky = 0; ky < g.kernel; ++ky) {
          const int iy = oy * g.stride - g.padding + ky;
          if (iy < 0 || iy >= in.height) continue;
          for (int kx = 0; kx < g.kernel; ++kx) {
            const int ix = ox * g.stride - g.padding + kx;
            if (ix < 0 || ix >= in.width) continue;
            const double* pixel = src + (static_cast<std::size_t>(iy) * in.width + ix) * in.channels;
            double* slot = dst + (ky * g.kernel + kx) * in.channels;
            for (int c = 0; c < in.channels; ++c) slot[c] = pixel[c];
          }
        }
      }
    }
  }
  return patches;
}

// Scatter-adds patch gradients back onto the input image layout.
Matrix col2im(const Matrix& patch_grad, const Layer& layer, Eigen::Index batch) {
  const Shape& in = layer.input_shape;
  const Shape& out = layer.output_shape;
  const ConvGeometry& g = layer.conv;
  Matrix input_grad = Matrix::Zero(batch, static_cast<Eigen::Index>(in.size()));
  for (Eigen::Index b = 0; b < batch; ++b) {
    double* dst = input_grad.row(b).data();
    for (int oy = 0; oy < out.height; ++oy) {
      for (int ox = 0; ox < out.width; ++ox) {
        const double* src = patch_grad.row((b * out.height + oy) * out.width + ox).data();
        for (int ky = 0; ky < g.kernel; ++ky) {
          const int iy = oy * g.stride - g.padding + ky;
          if (iy < 0 || iy >= in.height) continue;
          for (int kx = 0; kx < g.kernel; ++kx) {
            const int ix = ox * g.stride - g.padding + kx;
            if (ix < 0 || ix >= in.width) continue;
            double* pixel = dst + (static_cast<std::size_t>(iy) * in.width + ix) * in.channels;
            const double* slot = src + (ky * g.kernel + kx) * in.channels;
            for (int c = 0; c < in.channels; ++c) pixel[c] += slot[c];
          }
        }
      }
    }
  }
  return input_grad;
}

Matrix layer_forward(const Layer& layer, const Matrix& input, Matrix* patches_out) {
  switch (layer.kind) {
    case LayerKind::Dense: {
      Matrix out = input * layer.weights;
      out.rowwise() += layer.bias;
      return out;
    }
    case LayerKind::Conv2D: {
      Matrix patches = im2col(input, layer);
      Matrix columns = patches * layer.weights;
      columns.rowwise() += layer.bias;
      if (patches_out != nullptr) *patches_out = std::move(patches);
      return ConstMatrixMap(columns.data(), input.rows(),
                            static_cast<Eigen::Index>(layer.output_shape.size()));
    }
    case LayerKind::ReLU:
      return input.cwiseMax(0.0);
    case LayerKind::Tanh:
      return input.array().tanh().matrix();
    case LayerKind::Sigmoid:
      return input.unaryExpr(&stable_sigmoid);
  }
  throw ContractViolation("unknown layer kind");
}

void add_layer_moments(Layer& layer) {
  layer.weights_m = Matrix::Zero(layer.weights.rows(), layer.weights.cols());
  layer.weights_v = Matrix::Zero(layer.weights.rows(), layer.weights.cols());
  layer.bias_m = RowVector::Zero(layer.bias.size());
  layer.bias_v = RowVector::Zero(layer.bias.size());
}

}  // namespace

const char* layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::Dense: return "dense";
    case LayerKind::Conv2D: return "conv2d";
    case LayerKind::ReLU: return "relu";
    case LayerKind::Tanh: return "tanh";
    case LayerKind::Sigmoid: return "sigmoid";
  }
  return "unknown";
}

Network::Network(Shape input) : input_(input) {
  require(input.height > 0 && input.width > 0 && input.channels > 0, "network input shape must be positive");
}

Shape Network::output_shape() const { return layers_.empty() ? input_ : layers_.back().output_shape; }

Network& Network::dense(int units) {
  require(units > 0, "dense layer needs at least one unit");
  Layer layer;
  layer.kind = LayerKind::Dense;
  layer.input_shape = output_shape();
  layer.output_shape = flat_shape(units);
  layer.weights = Matrix::Zero(static_cast<Eigen::Index>(layer.input_shape.size()), units);
  layer.bias = RowVector::Zero(units);
  add_layer_moments(layer);
  layers_.push_back(std::move(layer));
  return *this;
}

Network& Network::conv2d(int channels, int kernel, int stride, int padding) {
  require(channels > 0 && kernel > 0 && stride > 0 && padding >= 0, "invalid conv2d geometry");
  Layer layer;
  layer.kind = LayerKind::Conv2D;
  layer.input_shape = output_shape();
  layer.conv = ConvGeometry{kernel, stride, padding};
  const int out_h = conv_extent(layer.input_shape.height, layer.conv);
  const int out_w = conv_extent(layer.input_shape.width, layer.conv);
  require(out_h > 0 && out_w > 0,
          "conv2d kernel larger than padded input " + layer.input_shape.to_string());
  layer.output_shape = Shape{out_h, out_w, channels};
  layer.weights = Matrix::Zero(kernel * kernel * layer.input_shape.channels, channels);
  layer.bias = RowVector::Zero(channels);
  add_layer_moments(layer);
  layers_.push_back(std::move(layer));
  return *this;
}

namespace {
Layer activation(LayerKind kind, Shape shape) {
  Layer layer;
  layer.kind = kind;
  layer.input_shape = shape;
  layer.output_shape = shape;
  return layer;
}
}  // namespace

Network& Network::relu() {
  layers_.push_back(activation(LayerKind::ReLU, output_shape()));
  return *this;
}

Network& Network::tanh() {
  layers_.push_back(activation(LayerKind::Tanh, output_shape()));
  return *this;
}

Network& Network::sigmoid() {
  layers_.push_back(activation(LayerKind::Sigmoid, output_shape()));
  return *this;
}

void Network::append_layer(Layer layer) {
  require(layer.input_shape == output_shape(), "layer input shape does not match previous output");
  const auto rows = layer.weights.rows();
  const auto cols = layer.weights.cols();
  switch (layer.kind) {
    case LayerKind::Dense:
      require(rows == static_cast<Eigen::Index>(layer.input_shape.size()) &&
                  cols == static_cast<Eigen::Index>(layer.output_shape.size()),
              "dense layer weights do not match its shapes");
      break;
    case LayerKind::Conv2D:
      require(rows == layer.conv.kernel * layer.conv.kernel * layer.input_shape.channels &&
                  cols == layer.output_shape.channels &&
                  layer.output_shape.height == conv_extent(layer.input_shape.height, layer.conv) &&
                  layer.output_shape.width == conv_extent(layer.input_shape.width, layer.conv),
              "conv2d layer weights do not match its geometry");
      break;
    default:
      require(layer.input_shape == layer.output_shape && layer.weights.size() == 0,
              "activation layer must preserve shape and hold no weights");
      break;
  }
  if (layer.has_params()) {
    require(layer.bias.size() == cols && layer.weights_m.rows() == rows && layer.weights_m.cols() == cols &&
                layer.weights_v.rows() == rows && layer.weights_v.cols() == cols &&
                layer.bias_m.size() == cols && layer.bias_v.size() == cols,
            "layer parameter blocks have inconsistent sizes");
  }
  layers_.push_back(std::move(layer));
  cached_ = false;
}

void Network::initialize(std::mt19937_64& rng) {
  for (Layer& layer : layers_) {
    if (!layer.has_params()) continue;
    double fan_in = static_cast<double>(layer.weights.rows());
    double fan_out = static_cast<double>(layer.weights.cols());
    if (layer.kind == LayerKind::Conv2D) {
      fan_out = static_cast<double>(layer.conv.kernel * layer.conv.kernel) * fan_out;
    }
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index i = 0; i < layer.weights.size(); ++i) layer.weights.data()[i] = dist(rng);
    layer.bias.setZero();
    add_layer_moments(layer);
  }
  adam_steps_ = 0;
  cached_ = false;
}

void Network::check_input(const Matrix& input) const {
  if (input.cols() != static_cast<Eigen::Index>(input_.size()) || input.rows() == 0) {
    throw ContractViolation("network input has " + std::to_string(input.cols()) + " features, expected " +
                            std::to_string(input_.size()) + " (" + input_.to_string() + ")");
  }
}

Matrix Network::forward(const Matrix& input) {
  check_input(input);
  layer_inputs_.resize(layers_.size());
  layer_outputs_.resize(layers_.size());
  patches_.resize(layers_.size());
  Matrix current = input;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    layer_inputs_[i] = current;
    current = layer_forward(layers_[i], current, &patches_[i]);
    if (layers_[i].kind == LayerKind::Tanh || layers_[i].kind == LayerKind::Sigmoid) {
      layer_outputs_[i] = current;
    }
  }
  cached_ = true;
  return current;
}

Matrix Network::predict(const Matrix& input) const {
  check_input(input);
  Matrix current = input;
  for (const Layer& layer : layers_) current = layer_forward(layer, current, nullptr);
  return current;
}

void Network::clear_cache() {
  cached_ = false;
  layer_inputs_.clear();
  layer_outputs_.clear();
  patches_.clear();
}

Gradients Network::backward(const Matrix& output_grad) {
  require(cached_, "backward called without a cached forward pass");
  const Eigen::Index batch = layer_inputs_.empty() ? output_grad.rows() : layer_inputs_.front().rows();
  if (output_grad.rows() != batch || output_grad.cols() != static_cast<Eigen::Index>(output_size())) {
    throw ContractViolation("loss gradient shape does not match the cached forward output");
  }
  Gradients grads(layers_.size());
  Matrix delta = output_grad;
  for (std::size_t idx = layers_.size(); idx-- > 0;) {
    const Layer& layer = layers_[idx];
    switch (layer.kind) {
      case LayerKind::Dense: {
        grads[idx].weights = layer_inputs_[idx].transpose() * delta;
        grads[idx].bias = delta.colwise().sum();
        delta = delta * layer.weights.transpose();
        break;
      }
      case LayerKind::Conv2D: {
        const Eigen::Index rows = batch * layer.output_shape.height * layer.output_shape.width;
        ConstMatrixMap columns(delta.data(), rows, layer.output_shape.channels);
        grads[idx].weights = patches_[idx].transpose() * columns;
        grads[idx].bias = columns.colwise().sum();
        Matrix patch_grad = columns * layer.weights.transpose();
        delta = col2im(patch_grad, layer, batch);
        break;
      }
      case LayerKind::ReLU:
        delta = delta.cwiseProduct((layer_inputs_[idx].array() > 0.0).cast<double>().matrix());
        break;
      case LayerKind::Tanh:
        delta = delta.cwiseProduct((1.0 - layer_outputs_[idx].array().square()).matrix());
        break;
      case LayerKind::Sigmoid: {
        const auto& y = layer_outputs_[idx].array();
        delta = delta.cwiseProduct((y * (1.0 - y)).matrix());
        break;
      }
    }
  }
  return grads;
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& layer : layers_) {
    n += static_cast<std::size_t>(layer.weights.size() + layer.bias.size());
  }
  return n;
}

bool Network::parameters_finite() const {
  for (const Layer& layer : layers_) {
    if (!layer.weights.allFinite() || !layer.bias.allFinite()) return false;
  }
  return true;
}

Gradients zeros_like(const Network& net) {
  Gradients grads(net.layers().size());
  for (std::size_t i = 0; i < grads.size(); ++i) {
    const Layer& layer = net.layers()[i];
    grads[i].weights = Matrix::Zero(layer.weights.rows(), layer.weights.cols());
    grads[i].bias = RowVector::Zero(layer.bias.size());
  }
  return grads;
}

void accumulate(Gradients& into, const Gradients& from, double factor) {
  require(into.size() == from.size(), "gradient block count mismatch");
  for (std::size_t i = 0; i < into.size(); ++i) {
    if (from[i].weights.size() == 0) continue;
    into[i].weights += factor * from[i].weights;
    into[i].bias += factor * from[i].bias;
  }
}

void scale(Gradients& grads, double factor) {
  for (LayerGradient& g : grads) {
    g.weights *= factor;
    g.bias *= factor;
  }
}

double global_norm(const Gradients& grads) {
  double sum = 0.0;
  for (const LayerGradient& g : grads) sum += g.weights.squaredNorm() + g.bias.squaredNorm();
  return std::sqrt(sum);
}

bool all_finite(const Gradients& grads) {
  for (const LayerGradient& g : grads) {
    if (!g.weights.allFinite() || !g.bias.allFinite()) return false;
  }
  return true;
}

}  // namespace adazero::nn
