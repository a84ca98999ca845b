#include "lgas/batch_means.hpp"

#include <cmath>
#include <vector>

#include "lgas/errors.hpp"

namespace lgas {

std::size_t batch_count(std::size_t n) {
  if (n == 0) return 0;
  auto b = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (b * b < n) ++b;
  while (b > 1 && (b - 1) * (b - 1) >= n) --b;
  return b;
}

RatioEstimate ratio_batch_means(std::span<const double> num, std::span<const double> den) {
  if (num.size() != den.size()) throw ContractError("ratio_batch_means: length mismatch");
  const std::size_t n = num.size();
  RatioEstimate out;
  if (n == 0) return out;

  const std::size_t nb = batch_count(n);
  std::vector<double> bnum(nb, 0.0), bden(nb, 0.0);
  for (std::size_t b = 0; b < nb; ++b) {
    const std::size_t lo = b * n / nb;
    const std::size_t hi = (b + 1) * n / nb;
    for (std::size_t i = lo; i < hi; ++i) {
      bnum[b] += num[i];
      bden[b] += den[i];
    }
  }
  double total_num = 0.0, total_den = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    total_num += bnum[b];
    total_den += bden[b];
  }
  out.batches = nb;
  if (total_den == 0.0) return out;
  out.value = total_num / total_den;
  if (nb < 2) return out;

  double ss = 0.0;
  for (std::size_t b = 0; b < nb; ++b) {
    const double r = bnum[b] - out.value * bden[b];
    ss += r * r;
  }
  const double mean_den = total_den / static_cast<double>(nb);
  const auto k = static_cast<double>(nb);
  out.std_error = std::sqrt(ss / (k * (k - 1.0))) / mean_den;
  return out;
}

RatioEstimate batch_means(std::span<const double> samples) {
  std::vector<double> ones(samples.size(), 1.0);
  return ratio_batch_means(samples, ones);
}

}  // namespace lgas
