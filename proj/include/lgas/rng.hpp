#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lgas {

/// Seedable generator with independent numbered streams.
///
/// Stream k of seed s is std::mt19937_64 seeded through
/// std::seed_seq{s_lo, s_hi, k_lo, k_hi}. Both the engine and seed_seq are
/// fully specified by the standard, so trajectories are reproducible across
/// platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform_open() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  /// Exp(rate) by inversion.
  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lgas
