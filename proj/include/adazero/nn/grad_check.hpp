#pragma once

#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "adazero/nn/losses.hpp"
#include "adazero/nn/network.hpp"

namespace adazero::nn {

struct BlockError {
  std::size_t layer{0};
  bool bias{false};
  std::size_t checked{0};
  double max_relative_error{0.0};
};

struct GradientReport {
  double max_relative_error{0.0};
  std::vector<BlockError> blocks;
  std::size_t parameters_checked{0};
};

using OutputLoss = std::function<LossResult(const Matrix& output)>;

struct GradCheckOptions {
  double step{1e-6};
  // Relative error is |analytic - numeric| / max(|analytic|, |numeric|, floor).
  double denominator_floor{1e-5};
  // The floor is raised to this multiple of |loss|, the scale below which
  // central differences are dominated by roundoff.
  double loss_relative_floor{0.0};
  // 0 checks every parameter; otherwise a seeded random subset per block.
  std::size_t max_per_block{0};
  std::uint64_t subset_seed{0};
};

/// Compares backward() against central finite differences of the loss.
GradientReport grad_check(Network& net, const Matrix& input, const OutputLoss& loss,
                          const GradCheckOptions& options = {});

double relative_error(double analytic, double numeric, double floor);

}  // namespace adazero::nn
