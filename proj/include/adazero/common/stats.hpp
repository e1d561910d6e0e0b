#pragma once

#include <span>
#include <vector>

namespace adazero {

double mean(std::span<const double> values);
double median(std::span<const double> values);

/// Ranks starting at 1; ties share the average of their positions.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of the average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

/// Streaming mean and variance (Welford).
class RunningMoments {
 public:
  void add(double x);
  std::size_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const;
  double stddev() const;

 private:
  std::size_t count_{0};
  double mean_{0.0};
  double m2_{0.0};
};

}  // namespace adazero
