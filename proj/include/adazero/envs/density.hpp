#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "adazero/envs/gridworld.hpp"

namespace adazero::envs {

/// Per-cell visit counts. Invariant: sum(counts) == total_steps.
struct VisitDensity {
  int height{0};
  int width{0};
  std::vector<std::uint64_t> counts;
  std::uint64_t total_steps{0};

  VisitDensity() = default;
  VisitDensity(int h, int w);

  std::uint64_t at(Cell c) const;
  void add(Cell c);

  /// Number of distinct cells visited at least once.
  std::size_t coverage() const;

  bool operator==(const VisitDensity&) const = default;
};

VisitDensity accumulate_density(VisitDensity density, Cell cell);

/// One CSV line per grid row, comma-separated counts.
void write_density_csv(const VisitDensity& density, const std::filesystem::path& path);
VisitDensity read_density_csv(const std::filesystem::path& path);

/// 8-bit gray levels, brightness proportional to log(1 + count) / log(1 + max).
std::vector<std::uint8_t> density_heatmap(const VisitDensity& density);

/// Binary portable graymap (P5).
void write_pgm(const std::filesystem::path& path, int height, int width, const std::vector<std::uint8_t>& pixels);

struct GrayImage {
  int height{0};
  int width{0};
  std::vector<std::uint8_t> pixels;
};
GrayImage read_pgm(const std::filesystem::path& path);

}  // namespace adazero::envs
