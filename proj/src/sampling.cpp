#include "phh/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace phh {

HaltonSampler::HaltonSampler(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int base : {2, 3, 5, 7}) {
    std::vector<int> p(base);
    std::iota(p.begin(), p.end(), 0);
    // Keep 0 fixed so that every index still has finitely many nonzero digits.
    for (int i = base - 1; i > 1; --i) std::swap(p[i], p[1 + rng() % i]);
    perm_.push_back(std::move(p));
  }
}

Vec4 HaltonSampler::next() {
  static constexpr int kBases[4] = {2, 3, 5, 7};
  Vec4 x;
  for (int d = 0; d < 4; ++d) {
    const int b = kBases[d];
    double f = 1.0, r = 0.0;
    for (std::uint64_t i = index_; i > 0; i /= b) {
      f /= b;
      r += f * perm_[d][i % b];
    }
    x(d) = r;
  }
  ++index_;
  return x;
}

std::vector<Vec4> sample_box(const Vec4& lo, const Vec4& hi, int n, std::uint64_t seed) {
  HaltonSampler h(seed);
  std::vector<Vec4> out;
  out.reserve(std::max(n, 0));
  for (int k = 0; k < n; ++k) out.push_back(lo + (hi - lo).cwiseProduct(h.next()));
  return out;
}

}  // namespace phh
