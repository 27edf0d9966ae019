#pragma once

#include <cstdint>

#include "rng.hpp"

namespace gcmp {

// Number of marked items among m1 drawn without replacement from an urn of
// m items of which d are marked.
struct HypergeomMoments {
  double mean;
  double variance;  // 0 flags a cell without information
};

HypergeomMoments hypergeom_moments(std::int64_t m, std::int64_t d, std::int64_t m1);

// Urns up to this size are sampled by cdf inversion, larger ones by drawing
// the m1 items one at a time.
inline constexpr std::int64_t kInversionLimit = 1'000'000;

std::int64_t hypergeom_sample(std::int64_t m, std::int64_t d, std::int64_t m1, Rng& rng);

// Repeated draws for fixed (m, d, m1); the mode probability is computed once.
class HypergeomSampler {
 public:
  HypergeomSampler(std::int64_t m, std::int64_t d, std::int64_t m1);
  std::int64_t operator()(Rng& rng) const;
  std::int64_t min() const { return lo_; }
  std::int64_t max() const { return hi_; }

 private:
  std::int64_t m_, d_, m1_, lo_, hi_, mode_ = 0;
  double f_mode_ = 0.0;
};

}  // namespace gcmp
