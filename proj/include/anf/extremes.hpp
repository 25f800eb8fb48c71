#pragma once

// Extreme-value theory of smooth stationary Gaussian processes: the L_T
// centring, the Gumbel limit of the supremum, local-extrema point processes,
// and the closed-form limit probabilities of the percolation certificates.

#include <anf/error.hpp>
#include <anf/kernels.hpp>
#include <anf/stats.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace anf {

struct ExtremeSummary {
  double sup = 0.0;
  double inf = 0.0;
  std::size_t argmax_index = 0;
  std::size_t argmin_index = 0;
  std::vector<std::pair<std::size_t, double>> local_maxima;
  std::vector<std::pair<std::size_t, double>> local_minima;
};

/// Grid-resolution extremes; local extrema are strict in both neighbours and
/// never sit on an endpoint. Ties for argmax/argmin go to the smallest index.
inline ExtremeSummary summarize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptySamples, "empty path");
  ExtremeSummary s;
  s.sup = s.inf = values[0];
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > s.sup) {
      s.sup = values[i];
      s.argmax_index = i;
    }
    if (values[i] < s.inf) {
      s.inf = values[i];
      s.argmin_index = i;
    }
  }
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double v = values[i];
    if (v > values[i - 1] && v > values[i + 1]) s.local_maxima.emplace_back(i, v);
    else if (v < values[i - 1] && v < values[i + 1]) s.local_minima.emplace_back(i, v);
  }
  return s;
}

/// sqrt(2 * variance * log T).
inline double l_T(double T, double variance = 1.0) {
  if (!(T > 1.0)) throw Error(ErrorKind::DomainError, "L_T needs T > 1");
  return std::sqrt(2.0 * variance * std::log(T));
}

/// Standard Gumbel CDF exp(-exp(-x)).
inline double gumbel_cdf(double x) {
  if (x < -40.0) return 0.0;
  if (x > 40.0) return 1.0;
  return std::exp(-std::exp(-x));
}

/// P(G > x), computed without cancellation in the right tail.
inline double gumbel_sf(double x) {
  if (x < -40.0) return 1.0;
  if (x > 40.0) return 0.0;
  return -std::expm1(-std::exp(-x));
}

/// Location shift of the limit law: log sqrt(lambda2) - log(2 pi).
inline double gumbel_shift(double lambda2) {
  if (!(lambda2 > 0.0)) throw Error(ErrorKind::DomainError, "lambda2 must be > 0");
  return 0.5 * std::log(lambda2) - std::log(2.0 * std::numbers::pi);
}

/// L_T * (sup - L_T).
inline double rescaled_sup(const ExtremeSummary& summary, double T, double variance = 1.0) {
  const double L = l_T(T, variance);
  return L * (summary.sup - L);
}

struct Mark {
  double position = 0.0;
  double height = 0.0;
};

/// Rescaled local maxima (m/T, L_T (g(m) - L_T)), positions taken from `grid`.
inline std::vector<Mark> local_maxima_marks(const ExtremeSummary& summary, const Grid1D& grid,
                                            double T, double variance = 1.0) {
  const double L = l_T(T, variance);
  std::vector<Mark> marks;
  marks.reserve(summary.local_maxima.size());
  for (auto [i, v] : summary.local_maxima) marks.push_back({grid.point(i) / T, L * (v - L)});
  return marks;
}

/// Rescaled local minima (n/T, L_T (-g(n) - L_T)).
inline std::vector<Mark> local_minima_marks(const ExtremeSummary& summary, const Grid1D& grid,
                                            double T, double variance = 1.0) {
  const double L = l_T(T, variance);
  std::vector<Mark> marks;
  marks.reserve(summary.local_minima.size());
  for (auto [i, v] : summary.local_minima) marks.push_back({grid.point(i) / T, L * (-v - L)});
  return marks;
}

/// Both point processes of rescaled local extrema.
struct ExtremaMarks {
  std::vector<Mark> maxima;
  std::vector<Mark> minima;
};

inline ExtremaMarks local_extrema_ppp(const ExtremeSummary& summary, const Grid1D& grid, double T,
                                      double variance = 1.0) {
  return {local_maxima_marks(summary, grid, T, variance),
          local_minima_marks(summary, grid, T, variance)};
}

/// Limit intensity of rescaled maxima with height > y, per unit position.
inline double marks_above_intensity(double lambda2, double y = 0.0) {
  return std::sqrt(lambda2) / (2.0 * std::numbers::pi) * std::exp(-y);
}

/// lim P(sup_[-2T,-T] g > L_T, sup_[T,2T] g > L_T, inf_[-2T,2T] g > -L_T).
inline double limit_supinf(double lambda2) {
  const double c = -gumbel_shift(lambda2);
  const double p_sup = gumbel_sf(c);
  return p_sup * p_sup * gumbel_cdf(c - std::log(4.0));
}

/// lim P(A_T): product over both processes of P(G > c_i) P(G < c_i).
inline double limit_at(double lambda2_1, double lambda2_2) {
  const double c1 = -gumbel_shift(lambda2_1);
  const double c2 = -gumbel_shift(lambda2_2);
  return gumbel_sf(c1) * gumbel_cdf(c1) * gumbel_sf(c2) * gumbel_cdf(c2);
}

struct WindowBounds {
  double lower = 0.0;  // liminf bound on P(Cross at level 2h/sqrt(log T))
  double upper = 1.0;  // limsup bound on the same probability
};

inline WindowBounds cw_bounds(double h, double lambda2_1, double lambda2_2) {
  const double c1 = -gumbel_shift(lambda2_1);
  const double c2 = -gumbel_shift(lambda2_2);
  const double shift = std::numbers::sqrt2 * h;
  WindowBounds b;
  b.lower = gumbel_sf(c2 - shift) * gumbel_cdf(c1 + shift);
  b.upper = 1.0 - gumbel_sf(c1 + shift) * gumbel_cdf(c2 - shift);
  return b;
}

struct TailPoint {
  double x = 0.0;
  double frequency = 0.0;        // empirical P(|sup - L_T| > x / L_T)
  double classical_bound = 0.0;  // 2 exp(-(x/L_T)^2 / 2)
};

inline std::vector<TailPoint> tail_decay(std::span<const double> sups, double T,
                                         std::span<const double> xs) {
  if (sups.empty()) throw Error(ErrorKind::EmptySamples, "no suprema");
  const double L = l_T(T);
  std::vector<TailPoint> out;
  for (double x : xs) {
    const double dev = x / L;
    std::size_t hits = 0;
    for (double s : sups) hits += std::abs(s - L) > dev;
    out.push_back({x, static_cast<double>(hits) / static_cast<double>(sups.size()),
                   2.0 * std::exp(-0.5 * dev * dev)});
  }
  return out;
}

/// Var[e^{theta S}] log T / (theta^2 E[e^{2 theta S}]), using max-shifted
/// exponentials; the common factor e^{2 theta max} cancels.
inline double exp_variance_ratio(std::span<const double> sups, double theta, double T) {
  if (sups.empty()) throw Error(ErrorKind::EmptySamples, "no suprema");
  if (theta == 0.0 || !std::isfinite(theta)) throw Error(ErrorKind::DomainError, "theta must be nonzero");
  if (!(T > 1.0)) throw Error(ErrorKind::DomainError, "T must be > 1");
  double top = theta * sups[0];
  for (double s : sups) top = std::max(top, theta * s);
  std::vector<double> w(sups.size());
  for (std::size_t i = 0; i < sups.size(); ++i) w[i] = std::exp(theta * sups[i] - top);
  const double mean = compensated_mean(w);
  CompensatedSum dev2, sq;
  for (double v : w) {
    dev2.add((v - mean) * (v - mean));
    sq.add(v * v);
  }
  const double n = static_cast<double>(w.size());
  const double var = dev2.value() / n;
  const double second = sq.value() / n;
  return var * std::log(T) / (theta * theta * second);
}

/// Two-sided Kolmogorov-Smirnov distance between the samples' empirical CDF
/// and `cdf`.
inline double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error(ErrorKind::EmptySamples, "no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double di = static_cast<double>(i);
    d = std::max({d, (di + 1.0) / n - f, f - di / n});
  }
  return d;
}

}  // namespace anf
