#pragma once

#include <cstdint>
#include <random>

namespace gridstealth {

/// Seed for the `index`-th independent task of a run seeded with `base`.
/// splitmix64(base + golden_gamma * (index + 1)); stable across platforms.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// Reproducible standard-normal stream.
///
/// Engine: std::mt19937_64 seeded with the 64-bit seed (its output sequence is
/// fixed by the C++ standard). Uniforms: u = ((x >> 11) + 0.5) * 2^-53, which
/// lies strictly inside (0, 1). Normals: Box-Muller on consecutive uniform
/// pairs (u1, u2), emitting sqrt(-2 ln u1) cos(2 pi u2) and then
/// sqrt(-2 ln u1) sin(2 pi u2). std::normal_distribution is not used because
/// its algorithm is implementation-defined.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double uniform() noexcept;
  double next() noexcept;

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gridstealth
