#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <string>

namespace adazero::nn {

// Batches are stored one sample per row; images are flattened in
// height-width-channel order.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic, Eigen::RowMajor>;

struct Shape {
  int height{1};
  int width{1};
  int channels{1};

  std::size_t size() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width) *
           static_cast<std::size_t>(channels);
  }

  bool operator==(const Shape&) const = default;

  std::string to_string() const {
    return std::to_string(height) + "x" + std::to_string(width) + "x" + std::to_string(channels);
  }
};

inline Shape flat_shape(int units) { return Shape{1, 1, units}; }

}  // namespace adazero::nn
