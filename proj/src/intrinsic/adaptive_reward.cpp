#include "adazero/intrinsic/adaptive_reward.hpp"

#include <cmath>

#include "adazero/common/error.hpp"

namespace adazero::intrinsic {

RewardBreakdown combine(double r_ext, double r_int_raw, double alpha) {
  require(std::isfinite(alpha) && alpha >= 0.0 && alpha <= 1.0,
          "combine: alpha " + std::to_string(alpha) + " outside [0, 1]");
  require(std::isfinite(r_ext) && r_ext >= 0.0, "combine: r_ext must be finite and non-negative");
  require(std::isfinite(r_int_raw) && r_int_raw >= 0.0, "combine: r_int must be finite and non-negative");
  return RewardBreakdown{r_ext, r_int_raw, alpha, r_ext + (1.0 - alpha) * r_int_raw};
}

AlphaFn evaluator_alpha(const MasteryEvaluator& evaluator) {
  return [&evaluator](std::span<const double> obs_hat) { return evaluator.score(obs_hat); };
}

AlphaFn constant_alpha(double alpha) {
  require(alpha >= 0.0 && alpha <= 1.0, "constant_alpha: alpha outside [0, 1]");
  return [alpha](std::span<const double>) { return alpha; };
}

RewardBreakdown per_step_pipeline(std::span<const double> obs, double r_ext, const StateAutoencoder& ae,
                                  const AlphaFn& alpha) {
  const Reconstruction rec = ae.reconstruct(obs);
  return combine(r_ext, rec.r_int, alpha(rec.obs_hat));
}

RewardBreakdown per_step_pipeline(std::span<const double> obs, double r_ext, const StateAutoencoder& ae,
                                  const MasteryEvaluator& evaluator) {
  return per_step_pipeline(obs, r_ext, ae, evaluator_alpha(evaluator));
}

}  // namespace adazero::intrinsic
