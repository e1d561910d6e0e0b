#include "adazero/nn/checkpoint.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "adazero/common/error.hpp"

namespace adazero::nn {

namespace {

constexpr std::array<char, 4> kMagic{'A', 'Z', 'N', 'N'};

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("checkpoint truncated");
  return value;
}

void put_shape(std::ostream& out, const Shape& s) {
  put<std::int32_t>(out, s.height);
  put<std::int32_t>(out, s.width);
  put<std::int32_t>(out, s.channels);
}

Shape get_shape(std::istream& in) {
  Shape s;
  s.height = get<std::int32_t>(in);
  s.width = get<std::int32_t>(in);
  s.channels = get<std::int32_t>(in);
  return s;
}

void put_matrix(std::ostream& out, const Matrix& m) {
  put<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
  out.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
}

Matrix get_matrix(std::istream& in) {
  const auto rows = get<std::uint64_t>(in);
  const auto cols = get<std::uint64_t>(in);
  if (rows * cols > (std::uint64_t{1} << 32)) throw std::runtime_error("checkpoint block too large");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
  if (!in) throw std::runtime_error("checkpoint truncated");
  return m;
}

void put_vector(std::ostream& out, const RowVector& v) {
  put<std::uint64_t>(out, static_cast<std::uint64_t>(v.size()));
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

RowVector get_vector(std::istream& in) {
  const auto n = get<std::uint64_t>(in);
  if (n > (std::uint64_t{1} << 32)) throw std::runtime_error("checkpoint block too large");
  RowVector v(static_cast<Eigen::Index>(n));
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!in) throw std::runtime_error("checkpoint truncated");
  return v;
}

}  // namespace

void write_checkpoint(const Network& net, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kCheckpointVersion);
  put_shape(out, net.input_shape());
  put<std::int64_t>(out, net.adam_steps());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(net.layers().size()));
  for (const Layer& layer : net.layers()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(layer.kind));
    put_shape(out, layer.input_shape);
    put_shape(out, layer.output_shape);
    put<std::int32_t>(out, layer.conv.kernel);
    put<std::int32_t>(out, layer.conv.stride);
    put<std::int32_t>(out, layer.conv.padding);
    put_matrix(out, layer.weights);
    put_vector(out, layer.bias);
    put_matrix(out, layer.weights_m);
    put_matrix(out, layer.weights_v);
    put_vector(out, layer.bias_m);
    put_vector(out, layer.bias_v);
  }
  if (!out) throw std::runtime_error("failed writing checkpoint");
}

Network read_checkpoint(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw std::runtime_error("not a network checkpoint (bad magic)");
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  }
  Network net(get_shape(in));
  const auto adam_steps = get<std::int64_t>(in);
  const auto count = get<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < count; ++i) {
    Layer layer;
    const auto kind = get<std::uint32_t>(in);
    if (kind > static_cast<std::uint32_t>(LayerKind::Sigmoid)) throw std::runtime_error("unknown layer kind");
    layer.kind = static_cast<LayerKind>(kind);
    layer.input_shape = get_shape(in);
    layer.output_shape = get_shape(in);
    layer.conv.kernel = get<std::int32_t>(in);
    layer.conv.stride = get<std::int32_t>(in);
    layer.conv.padding = get<std::int32_t>(in);
    layer.weights = get_matrix(in);
    layer.bias = get_vector(in);
    layer.weights_m = get_matrix(in);
    layer.weights_v = get_matrix(in);
    layer.bias_m = get_vector(in);
    layer.bias_v = get_vector(in);
    net.append_layer(std::move(layer));
  }
  net.set_adam_steps(adam_steps);
  return net;
}

void save_checkpoint(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_checkpoint(net, out);
}

Network load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace adazero::nn
