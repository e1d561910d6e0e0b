#include "adazero/intrinsic/arch.hpp"

#include <algorithm>

#include "adazero/common/error.hpp"

namespace adazero::intrinsic {

void append_encoder(nn::Network& net, const EncoderArch& arch) {
  require(arch.hidden > 0, "encoder hidden width must be positive");
  for (const ConvSpec& c : arch.convs) {
    net.conv2d(c.channels, c.kernel, c.stride).relu();
  }
  net.dense(arch.hidden).relu();
}

EncoderArch small_grid_arch() { return EncoderArch{{{8, 3, 1}, {8, 3, 2}}, 64}; }

EncoderArch large_grid_arch() { return EncoderArch{{{8, 5, 5}, {16, 2, 2}}, 64}; }

EncoderArch default_arch_for(nn::Shape input) {
  return std::max(input.height, input.width) >= 32 ? large_grid_arch() : small_grid_arch();
}

}  // namespace adazero::intrinsic
