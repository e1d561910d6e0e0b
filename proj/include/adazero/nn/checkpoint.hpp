#pragma once

#include <filesystem>
#include <iosfwd>

#include "adazero/nn/network.hpp"

namespace adazero::nn {

// Binary checkpoint, little-endian host order:
//
//   char[4]  magic "AZNN"
//   u32      format version (1)
//   i32 x3   network input shape (height, width, channels)
//   i64      Adam step count
//   u32      layer count
//   per layer:
//     u32    kind
//     i32 x3 input shape, i32 x3 output shape
//     i32 x3 kernel, stride, padding
//     u64 rows, u64 cols, f64[rows*cols]  weights   (row-major)
//     u64 n, f64[n]                        bias
//     weights_m, weights_v, bias_m, bias_v in the same encodings
//
// Activation layers store empty (0x0 / 0) blocks.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(const Network& net, std::ostream& out);
Network read_checkpoint(std::istream& in);

void save_checkpoint(const Network& net, const std::filesystem::path& path);
Network load_checkpoint(const std::filesystem::path& path);

}  // namespace adazero::nn
