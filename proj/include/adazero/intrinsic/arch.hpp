#pragma once

#include <vector>

#include "adazero/nn/network.hpp"

namespace adazero::intrinsic {

struct ConvSpec {
  int channels{8};
  int kernel{3};
  int stride{1};
};

/// Convolutional trunk followed by one dense hidden layer. Every layer is
/// followed by a ReLU.
struct EncoderArch {
  std::vector<ConvSpec> convs{{8, 3, 1}, {8, 3, 2}};
  int hidden{64};
};

/// Appends the conv trunk and the hidden layer to `net`.
void append_encoder(nn::Network& net, const EncoderArch& arch);

/// Small-grid defaults (13x13 four rooms).
EncoderArch small_grid_arch();

/// Large-grid defaults (50x50 dark chamber): strided first layer so the
/// flattened feature map stays in the hundreds.
EncoderArch large_grid_arch();

/// Picks small_grid_arch or large_grid_arch from the observation size.
EncoderArch default_arch_for(nn::Shape input);

}  // namespace adazero::intrinsic
