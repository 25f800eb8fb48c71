#include "oracles.hpp"

#include <anf/extremes.hpp>
#include <anf/percolation.hpp>
#include <anf/sampler.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace anf;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Scaling, LTExamplesAndIdentity) {
  EXPECT_DOUBLE_EQ(l_T(std::exp(2.0)), 2.0);
  EXPECT_NEAR(l_T(2.0), 1.177410, 1e-6);
  EXPECT_THROW(l_T(1.0), Error);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> var(0.5, 4.0), t(2.0, 1e4);
  for (int i = 0; i < 1000; ++i) {
    const double k1 = var(rng), k2 = var(rng), T = t(rng);
    const double tau = std::pow(T, k1 / k2);
    ASSERT_NEAR(l_T(T, k1), l_T(tau, k2), 1e-12 * l_T(T, k1));
  }
}

TEST(Gumbel, CdfExamples) {
  EXPECT_NEAR(gumbel_cdf(0.0), 0.36787944117144233, 1e-15);
  EXPECT_NEAR(gumbel_cdf(-std::log(std::log(2.0))), 0.5, 1e-12);
  EXPECT_EQ(gumbel_cdf(41.0), 1.0);
  EXPECT_EQ(gumbel_cdf(-41.0), 0.0);
  double prev = 0.0;
  for (double x = -45.0; x <= 45.0; x += 0.01) {
    const double v = gumbel_cdf(x);
    ASSERT_GE(v, prev);
    ASSERT_NEAR(v + gumbel_sf(x), 1.0, 1e-15);
    prev = v;
  }
}

TEST(Gumbel, ShiftExamples) {
  EXPECT_NEAR(gumbel_shift(4.0 * kPi * kPi), 0.0, 1e-15);
  EXPECT_NEAR(gumbel_shift(2.0), -1.491303, 1e-6);
  EXPECT_NEAR(gumbel_shift(3.0), -1.288571, 1e-6);
  EXPECT_THROW(gumbel_shift(0.0), Error);
}

TEST(Gumbel, RescaledSup) {
  const double T = 4096.0, L = l_T(T);
  ExtremeSummary s;
  s.sup = L;
  EXPECT_DOUBLE_EQ(rescaled_sup(s, T), 0.0);
  s.sup = L + 1.0 / L;
  EXPECT_NEAR(rescaled_sup(s, T), 1.0, 1e-12);
  EXPECT_THROW(rescaled_sup(s, 0.5), Error);
}

TEST(Summary, ExtremaAndTies) {
  const std::vector<double> v{1.0, 3.0, 2.0, 3.0, -1.0, 0.0, -1.0, 4.0};
  const auto s = summarize(v);
  EXPECT_EQ(s.sup, 4.0);
  EXPECT_EQ(s.argmax_index, 7u);
  EXPECT_EQ(s.inf, -1.0);
  EXPECT_EQ(s.argmin_index, 4u);
  ASSERT_EQ(s.local_maxima.size(), 3u);
  EXPECT_EQ(s.local_maxima[0].first, 1u);
  EXPECT_EQ(s.local_maxima[2].first, 5u);
  ASSERT_EQ(s.local_minima.size(), 3u);
  EXPECT_THROW(summarize(std::vector<double>{}), Error);
}

TEST(Summary, ExtremaInterleaveOnSampledPaths) {
  const CirculantSampler sampler(KernelSpec::damped_cosine(1.0, 1.0, 1.0), Grid1D{0.0, 0.25, 4097});
  for (std::uint64_t r = 0; r < 50; ++r) {
    const auto path = sampler.sample(derive_seed(13, r));
    const auto s = summarize(path.values);
    std::vector<std::pair<std::size_t, int>> seq;
    for (auto [i, v] : s.local_maxima) seq.emplace_back(i, +1);
    for (auto [i, v] : s.local_minima) seq.emplace_back(i, -1);
    std::sort(seq.begin(), seq.end());
    for (std::size_t k = 1; k < seq.size(); ++k) ASSERT_NE(seq[k].second, seq[k - 1].second);
  }
}

TEST(Marks, SyntheticPeak) {
  const double T = 64.0, L = l_T(T);
  const Grid1D grid{0.0, 1.0, 65};
  std::vector<double> v(65, 0.0);
  v[32] = L;
  const auto marks = local_extrema_ppp(summarize(v), grid, T);
  ASSERT_EQ(marks.maxima.size(), 1u);
  EXPECT_DOUBLE_EQ(marks.maxima[0].position, 0.5);
  EXPECT_DOUBLE_EQ(marks.maxima[0].height, 0.0);
  EXPECT_TRUE(marks.minima.empty());
  EXPECT_NEAR(marks_above_intensity(2.0), std::sqrt(2.0) / (2.0 * kPi), 1e-15);
  EXPECT_NEAR(marks_above_intensity(2.0), 0.2251, 1e-4);
}

TEST(Limits, ClosedFormExamples) {
  EXPECT_NEAR(limit_supinf(2.0), 0.016510, 5e-6);
  const double e1 = std::exp(-1.0);
  EXPECT_NEAR(limit_supinf(4.0 * kPi * kPi), (1.0 - e1) * (1.0 - e1) * std::exp(-4.0), 1e-15);
  EXPECT_NEAR(limit_supinf(4.0 * kPi * kPi), 0.007319, 1e-6);
  EXPECT_NEAR(limit_at(4.0 * kPi * kPi, 4.0 * kPi * kPi), 0.054077, 5e-7);
  EXPECT_NEAR(limit_at(2.0, 2.0), 0.025897, 5e-6);
  EXPECT_DOUBLE_EQ(limit_at(2.0, 3.0), limit_at(3.0, 2.0));
  EXPECT_NEAR(cw_bounds(0.0, 2.0, 2.0).lower, 0.160926, 5e-6);
  EXPECT_NEAR(cw_bounds(3.0, 2.0, 2.0).lower, 0.9968, 5e-5);
  EXPECT_NEAR(cw_bounds(50.0, 2.0, 2.0).lower, 1.0, 1e-12);
  EXPECT_NEAR(cw_bounds(50.0, 2.0, 2.0).upper, 1.0, 1e-12);
  EXPECT_NEAR(cw_bounds(-50.0, 2.0, 2.0).lower, 0.0, 1e-12);
  for (double h = -3.0; h <= 3.0; h += 0.25) {
    const auto b = cw_bounds(h, 2.0, 3.0);
    EXPECT_LE(b.lower, b.upper);
  }
  EXPECT_THROW(limit_supinf(-1.0), Error);
  EXPECT_THROW(limit_at(2.0, 0.0), Error);
}

TEST(Limits, ContinuousInLambda2) {
  double prev = limit_supinf(1.0);
  for (double l = 1.01; l <= 100.0; l += 0.01) {
    const double v = limit_supinf(l);
    ASSERT_LT(std::abs(v - prev), 0.01);
    prev = v;
  }
}

TEST(Limits, MatchQuadratureOracle) {
  for (double l2 : {2.0, 3.0, 4.0 * kPi * kPi, 0.7}) {
    const double c = -0.5 * std::log(l2) + std::log(2.0 * kPi);
    const double above = oracle::gumbel_above(c);
    EXPECT_NEAR(limit_supinf(l2), above * above * oracle::gumbel_below(c - std::log(4.0)), 1e-8) << l2;
    EXPECT_NEAR(limit_at(l2, l2), std::pow(above * oracle::gumbel_below(c), 2), 1e-8) << l2;
  }
  const double c1 = -0.5 * std::log(2.0) + std::log(2.0 * kPi);
  const double c2 = -0.5 * std::log(3.0) + std::log(2.0 * kPi);
  for (double h : {0.0, 1.0, 2.0, 3.0}) {
    const auto b = cw_bounds(h, 2.0, 3.0);
    const double s = std::sqrt(2.0) * h;
    EXPECT_NEAR(b.lower, oracle::gumbel_above(c2 - s) * oracle::gumbel_below(c1 + s), 1e-8) << h;
    EXPECT_NEAR(b.upper, 1.0 - oracle::gumbel_above(c1 + s) * oracle::gumbel_below(c2 - s), 1e-8) << h;
  }
}

TEST(Limits, SupInfEventMatchesMonteCarlo) {
  const double T = 2048.0, L = l_T(T);
  const CirculantSampler sampler(KernelSpec::gaussian(), Grid1D::covering(-2.0 * T, 2.0 * T, 0.25));
  const std::size_t n = 3000;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const auto g = sampler.sample(derive_seed(71, r));
    hits += interval_extrema(g, -2.0 * T, -T).max > L && interval_extrema(g, T, 2.0 * T).max > L &&
            interval_extrema(g, -2.0 * T, 2.0 * T).min > -L;
  }
  const double freq = static_cast<double>(hits) / n;
  EXPECT_GT(freq, limit_supinf(2.0) / 2.0);
  EXPECT_LT(freq, limit_supinf(2.0) * 2.0);
}

TEST(Tail, Examples) {
  const double T = 1024.0, L = l_T(T);
  const std::vector<double> sups{L + 0.3, L - 0.2, L + 1.0};
  const std::vector<double> zero{0.0};
  EXPECT_EQ(tail_decay(sups, T, zero)[0].frequency, 1.0);
  const std::vector<double> flat(10, L);
  const std::vector<double> xs{0.5, 2.0};
  for (const auto& p : tail_decay(flat, T, xs)) EXPECT_EQ(p.frequency, 0.0);
  const auto p = tail_decay(sups, T, std::vector<double>{1.0})[0];
  EXPECT_NEAR(p.classical_bound, 2.0 * std::exp(-0.5 / (L * L)), 1e-15);
  EXPECT_THROW(tail_decay(std::vector<double>{}, T, xs), Error);
}

TEST(ExpVarianceRatio, ConstantAndShiftInvariance) {
  EXPECT_EQ(exp_variance_ratio(std::vector<double>(20, 3.7), 0.5, 100.0), 0.0);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd(4.0, 0.3);
  std::vector<double> s(5000);
  for (auto& v : s) v = nd(rng);
  const double base = exp_variance_ratio(s, 0.5, 1024.0);
  for (double a : {-50.0, 3.0, 2000.0}) {
    auto shifted = s;
    for (auto& v : shifted) v += a;
    EXPECT_NEAR(exp_variance_ratio(shifted, 0.5, 1024.0), base, 1e-9 * base) << a;
  }
  // Lognormal oracle: Var[e^{tX}] / E[e^{2tX}] = 1 - e^{-t^2 sigma^2}.
  EXPECT_NEAR(base / std::log(1024.0) * 0.25, 1.0 - std::exp(-0.25 * 0.09), 3e-3);
  EXPECT_THROW(exp_variance_ratio(s, 0.0, 1024.0), Error);
  EXPECT_THROW(exp_variance_ratio(std::vector<double>{}, 0.5, 1024.0), Error);
}

TEST(KolmogorovSmirnov, Examples) {
  const std::vector<double> median{-std::log(std::log(2.0))};
  EXPECT_NEAR(ks_distance(median, gumbel_cdf), 0.5, 1e-12);
  const std::vector<double> far(10, -100.0);
  EXPECT_NEAR(ks_distance(far, gumbel_cdf), 1.0, 1e-12);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 100000;
  std::vector<double> x(n);
  for (auto& v : x) v = -std::log(-std::log(u(rng)));
  EXPECT_LE(ks_distance(x, gumbel_cdf), 1.95 / std::sqrt(static_cast<double>(n)));
  EXPECT_THROW(ks_distance(std::vector<double>{}, gumbel_cdf), Error);
}
