#include "hypergeom.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace gcmp {

namespace {

void check_args(std::int64_t m, std::int64_t d, std::int64_t m1) {
  if (m < 0 || d < 0 || d > m || m1 < 0 || m1 > m)
    throw DomainError("hypergeometric parameters need 0 <= d <= m and 0 <= m1 <= m");
}

double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

std::int64_t sample_by_urn(std::int64_t m, std::int64_t d, std::int64_t m1, Rng& rng) {
  std::int64_t marked = d, total = m, hits = 0;
  for (std::int64_t k = 0; k < m1 && marked > 0; ++k, --total) {
    if (rng.uniform() * static_cast<double>(total) < static_cast<double>(marked)) {
      ++hits;
      --marked;
    }
  }
  return hits;
}

}  // namespace

HypergeomMoments hypergeom_moments(std::int64_t m, std::int64_t d, std::int64_t m1) {
  check_args(m, d, m1);
  if (m == 0) return {0.0, 0.0};
  const auto md = static_cast<double>(m);
  const double p = static_cast<double>(d) / md;
  const double mean = static_cast<double>(m1 * d) / md;  // exact when m divides m1 * d
  if (m == 1) return {mean, 0.0};
  const double var = static_cast<double>(m1) * p * (static_cast<double>(m - d) / md) *
                     (static_cast<double>(m - m1) / (md - 1.0));
  return {mean, var};
}

std::int64_t hypergeom_sample(std::int64_t m, std::int64_t d, std::int64_t m1, Rng& rng) {
  return HypergeomSampler(m, d, m1)(rng);
}

HypergeomSampler::HypergeomSampler(std::int64_t m, std::int64_t d, std::int64_t m1)
    : m_(m), d_(d), m1_(m1) {
  check_args(m, d, m1);
  lo_ = std::max<std::int64_t>(0, d - (m - m1));
  hi_ = std::min(d, m1);
  if (lo_ == hi_ || m > kInversionLimit) return;
  const auto md = static_cast<double>(m);
  const auto dd = static_cast<double>(d);
  const auto m1d = static_cast<double>(m1);
  mode_ = static_cast<std::int64_t>(std::floor((m1d + 1.0) * (dd + 1.0) / (md + 2.0)));
  mode_ = std::clamp(mode_, lo_, hi_);
  const auto k0 = static_cast<double>(mode_);
  f_mode_ = std::exp(log_choose(dd, k0) + log_choose(md - dd, m1d - k0) - log_choose(md, m1d));
}

// Inversion that accumulates probability outward from the mode, alternating
// sides; the expected number of pmf evaluations is O(sd).
std::int64_t HypergeomSampler::operator()(Rng& rng) const {
  if (lo_ == hi_) return lo_;
  if (m_ > kInversionLimit) return sample_by_urn(m_, d_, m1_, rng);
  const auto dd = static_cast<double>(d_);
  const auto m1d = static_cast<double>(m1_);
  const double rest = static_cast<double>(m_) - dd - m1d;
  double u = rng.uniform() - f_mode_;
  if (u < 0.0) return mode_;
  std::int64_t up = mode_, down = mode_;
  double f_up = f_mode_, f_down = f_mode_;
  while (up < hi_ || down > lo_) {
    if (up < hi_) {
      const auto k = static_cast<double>(up);
      f_up *= (dd - k) * (m1d - k) / ((k + 1.0) * (rest + k + 1.0));
      ++up;
      u -= f_up;
      if (u < 0.0) return up;
    }
    if (down > lo_) {
      const auto k = static_cast<double>(down);
      f_down *= k * (rest + k) / ((dd - k + 1.0) * (m1d - k + 1.0));
      --down;
      u -= f_down;
      if (u < 0.0) return down;
    }
  }
  return mode_;  // rounding residue
}

}  // namespace gcmp
