#pragma once

// Small statistical reductions shared by the sampler checks, the extremes
// module and the experiment harness.

#include <anf/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>

namespace anf {

/// Neumaier-compensated accumulator; sums are insensitive to term order up to
/// the compensated error.
class CompensatedSum {
 public:
  void add(double term) noexcept {
    const double t = sum_ + term;
    carry_ += std::abs(sum_) >= std::abs(term) ? (sum_ - t) + term : (term - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline double compensated_mean(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

/// Pearson correlation; 0 when either side is constant.
inline double correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty())
    throw Error(ErrorKind::InvalidArgument, "correlation needs equal nonempty samples");
  const double ma = compensated_mean(a);
  const double mb = compensated_mean(b);
  CompensatedSum sab, saa, sbb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab.add((a[i] - ma) * (b[i] - mb));
    saa.add((a[i] - ma) * (a[i] - ma));
    sbb.add((b[i] - mb) * (b[i] - mb));
  }
  if (saa.value() == 0.0 || sbb.value() == 0.0) return 0.0;
  return sab.value() / std::sqrt(saa.value() * sbb.value());
}

struct ProportionInterval {
  double low = 0.0;
  double high = 1.0;
};

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for `successes` out of `trials`; always brackets the
/// point estimate and stays inside [0, 1].
inline ProportionInterval wilson_interval(std::size_t successes, std::size_t trials,
                                          double z = kZ95) {
  if (trials == 0) throw Error(ErrorKind::InvalidArgument, "wilson interval needs trials > 0");
  if (successes > trials) throw Error(ErrorKind::InvalidArgument, "successes exceed trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  ProportionInterval ci{centre - half, centre + half};
  ci.low = std::clamp(ci.low, 0.0, p);
  ci.high = std::clamp(ci.high, p, 1.0);
  return ci;
}

}  // namespace anf
