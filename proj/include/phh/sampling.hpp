#pragma once

#include <cstdint>
#include <vector>

#include "phh/jet.hpp"

namespace phh {

/// Scrambled Halton points in bases 2, 3, 5, 7. Each base gets a random
/// permutation of its nonzero digits drawn from `seed`; index 0 is skipped.
class HaltonSampler {
 public:
  explicit HaltonSampler(std::uint64_t seed);
  /// Point in [0, 1)^4.
  Vec4 next();

 private:
  std::vector<std::vector<int>> perm_;
  std::uint64_t index_ = 1;
};

/// n points in the box [lo, hi].
std::vector<Vec4> sample_box(const Vec4& lo, const Vec4& hi, int n, std::uint64_t seed);

}  // namespace phh
