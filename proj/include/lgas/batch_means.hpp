#pragma once

#include <cstddef>
#include <span>

namespace lgas {

struct RatioEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t batches = 0;
};

/// Number of batches used for n samples: ceil(sqrt(n)).
std::size_t batch_count(std::size_t n);

/// Ratio estimator sum(num) / sum(den) with a batch-means standard error.
///
/// Consecutive samples are split into ceil(sqrt(n)) contiguous batches whose
/// sizes differ by at most one. The standard error is the usual ratio
/// (delta-method) form over batch totals; it is zero with fewer than two
/// batches. Returns value 0 when sum(den) is 0.
RatioEstimate ratio_batch_means(std::span<const double> num, std::span<const double> den);

/// Plain mean of `samples` with the same batching.
RatioEstimate batch_means(std::span<const double> samples);

}  // namespace lgas
