#pragma once

#include <functional>
#include <span>

#include "adazero/intrinsic/autoencoder.hpp"
#include "adazero/intrinsic/evaluator.hpp"

namespace adazero::intrinsic {

struct RewardBreakdown {
  double r_ext{0.0};
  double r_int_raw{0.0};
  double alpha{0.0};
  double r_total{0.0};

  bool operator==(const RewardBreakdown&) const = default;
};

/// r_total = r_ext + (1 - alpha) * r_int_raw. Throws ContractViolation when
/// alpha is outside [0, 1] or either reward is negative or not finite.
RewardBreakdown combine(double r_ext, double r_int_raw, double alpha);

/// Maps a reconstruction to a mastery level.
using AlphaFn = std::function<double(std::span<const double> obs_hat)>;

/// Mastery from the evaluator's score on the reconstruction.
AlphaFn evaluator_alpha(const MasteryEvaluator& evaluator);

/// Mastery pinned to a constant (0 = intrinsic always on, 1 = intrinsic off).
AlphaFn constant_alpha(double alpha);

/// Reconstruct, score the reconstruction, combine.
RewardBreakdown per_step_pipeline(std::span<const double> obs, double r_ext, const StateAutoencoder& ae,
                                  const AlphaFn& alpha);

RewardBreakdown per_step_pipeline(std::span<const double> obs, double r_ext, const StateAutoencoder& ae,
                                  const MasteryEvaluator& evaluator);

}  // namespace adazero::intrinsic
