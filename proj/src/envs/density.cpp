#include "adazero/envs/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "adazero/common/error.hpp"

namespace adazero::envs {

VisitDensity::VisitDensity(int h, int w) : height(h), width(w) {
  require(h > 0 && w > 0, "density grid must be non-empty");
  counts.assign(static_cast<std::size_t>(h) * w, 0);
}

std::uint64_t VisitDensity::at(Cell c) const {
  require(c.row >= 0 && c.row < height && c.col >= 0 && c.col < width, "density cell out of bounds");
  return counts[static_cast<std::size_t>(c.row) * width + c.col];
}

void VisitDensity::add(Cell c) {
  require(c.row >= 0 && c.row < height && c.col >= 0 && c.col < width,
          "density cell " + to_string(c) + " out of bounds");
  ++counts[static_cast<std::size_t>(c.row) * width + c.col];
  ++total_steps;
}

std::size_t VisitDensity::coverage() const {
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](auto n) { return n > 0; }));
}

VisitDensity accumulate_density(VisitDensity density, Cell cell) {
  density.add(cell);
  return density;
}

void write_density_csv(const VisitDensity& density, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (int r = 0; r < density.height; ++r) {
    for (int c = 0; c < density.width; ++c) {
      if (c > 0) out << ',';
      out << density.counts[static_cast<std::size_t>(r) * density.width + c];
    }
    out << '\n';
  }
}

VisitDensity read_density_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<std::vector<std::uint64_t>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::uint64_t> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) row.push_back(std::stoull(field));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("ragged density csv " + path.string());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("empty density csv " + path.string());
  VisitDensity density(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      density.counts[r * rows[r].size() + c] = rows[r][c];
      density.total_steps += rows[r][c];
    }
  }
  return density;
}

std::vector<std::uint8_t> density_heatmap(const VisitDensity& density) {
  const std::uint64_t peak = density.counts.empty() ? 0 : *std::max_element(density.counts.begin(), density.counts.end());
  require(peak > 0, "density map is empty; nothing to plot");
  const double scale = 255.0 / std::log1p(static_cast<double>(peak));
  std::vector<std::uint8_t> pixels(density.counts.size(), 0);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    if (density.counts[i] == 0) continue;
    const double level = std::round(std::log1p(static_cast<double>(density.counts[i])) * scale);
    pixels[i] = static_cast<std::uint8_t>(std::clamp(level, 1.0, 255.0));
  }
  return pixels;
}

void write_pgm(const std::filesystem::path& path, int height, int width, const std::vector<std::uint8_t>& pixels) {
  require(static_cast<std::size_t>(height) * width == pixels.size(), "pgm pixel count mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string magic;
  int maxval = 0;
  GrayImage image;
  in >> magic >> image.width >> image.height >> maxval;
  if (magic != "P5" || maxval != 255 || image.width <= 0 || image.height <= 0) {
    throw std::runtime_error("unsupported pgm " + path.string());
  }
  in.get();
  image.pixels.resize(static_cast<std::size_t>(image.width) * image.height);
  in.read(reinterpret_cast<char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
  if (!in) throw std::runtime_error("truncated pgm " + path.string());
  return image;
}

}  // namespace adazero::envs
