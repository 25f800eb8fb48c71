#pragma once

// Replicated Monte Carlo experiments. Each replicate is a pure function of
// its derived seeds; per-replicate outcomes land in fixed slots and are
// aggregated in replicate order, so results do not depend on worker count.

#include <anf/config.hpp>
#include <anf/error.hpp>
#include <anf/extremes.hpp>
#include <anf/field.hpp>
#include <anf/kernels.hpp>
#include <anf/parallel.hpp>
#include <anf/percolation.hpp>
#include <anf/report.hpp>
#include <anf/sampler.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace anf {

/// One row of the extremes table written by the Gumbel study.
struct ExtremesRow {
  double T = 0.0;
  std::size_t replicates = 0;
  double lambda2 = 0.0;
  double shift = 0.0;
  double ks = 0.0;
  double mean_max_marks = 0.0;  // rescaled local maxima with height > 0, per path
  double mean_min_marks = 0.0;
  double marks_reference = 0.0;
  double count_correlation = 0.0;
  double theta = 0.0;
  double exp_variance_ratio = 0.0;
  std::vector<TailPoint> tail;
};

inline constexpr const char* kExtremesHeader =
    "T,replicates,lambda2,gumbel_shift,ks_distance,mean_max_marks,mean_min_marks,marks_reference,"
    "count_correlation,theta,exp_variance_ratio,master_seed";

struct ExperimentOutput {
  std::vector<ResultRow> rows;
  std::vector<ExtremesRow> extremes;
  std::vector<std::pair<std::string, std::string>> files;  // (file name, bytes)
  std::size_t violations = 0;  // certificate-soundness failures
};

inline std::string extremes_csv(const std::vector<ExtremesRow>& rows, std::uint64_t seed) {
  std::string out = std::string(kExtremesHeader) + "\n";
  for (const auto& r : rows) {
    out += format_real(r.T) + ',' + std::to_string(r.replicates) + ',' + format_real(r.lambda2) +
           ',' + format_real(r.shift) + ',' + format_real(r.ks) + ',' +
           format_real(r.mean_max_marks) + ',' + format_real(r.mean_min_marks) + ',' +
           format_real(r.marks_reference) + ',' + format_real(r.count_correlation) + ',' +
           format_real(r.theta) + ',' + format_real(r.exp_variance_ratio) + ',' +
           std::to_string(seed) + "\n";
  }
  return out;
}

namespace detail {

inline void require_sizes(const ExperimentConfig& cfg) {
  if (cfg.sizes.empty()) throw Error(ErrorKind::ConfigError, "experiment.sizes is empty");
}

inline std::size_t count_true(const std::vector<std::uint8_t>& flags) {
  std::size_t n = 0;
  for (auto f : flags) n += f;
  return n;
}

/// Index window [0, width) x [0, rows covering [0, height]].
inline IndexWindow origin_window(const Grid1D& gx, const Grid1D& gy, double width, double height) {
  const auto x = nearest_index(gx, width);
  const auto y = nearest_index(gy, height);
  if (!x || !y) throw Error(ErrorKind::IntervalOutOfRange, "window exceeds sampled grids");
  return {0, 0, *x + 1, *y + 1};
}

}  // namespace detail

// ---------------------------------------------------------------------------

/// Left-right crossing frequencies of {f <= level} on [0,R] x [0,rho R], and
/// optionally on the rescaled window [0,R] x [0, rho R^{K1(0)/K2(0)}]. With
/// K1(0) = K2(0) and rho = 1 the A_T certificate is checked on every replicate.
inline ExperimentOutput run_crossing_scan(const ExperimentConfig& cfg) {
  cfg.validate();
  detail::require_sizes(cfg);
  const double eps = cfg.grid_eps();
  const bool balanced = cfg.kernel1.variance == cfg.kernel2.variance;
  const bool check_A = balanced && cfg.rho == 1.0;
  const double exponent = cfg.kernel1.variance / cfg.kernel2.variance;
  const std::string k1 = describe(cfg.kernel1), k2 = describe(cfg.kernel2);
  const std::size_t nl = cfg.levels.size();
  ExperimentOutput out;

  for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
    const double R = cfg.sizes[si];
    const double h_square = cfg.rho * R;
    const double h_rescaled = cfg.rho * std::pow(R, exponent);
    const double h_needed = std::max(check_A ? R : 0.0,
                                     std::max(h_square, cfg.rescaled ? h_rescaled : 0.0));
    const CirculantSampler s1(cfg.kernel1, Grid1D::covering(0.0, R, eps));
    const CirculantSampler s2(cfg.kernel2, Grid1D::covering(0.0, h_needed, eps));
    const auto square = detail::origin_window(s1.grid(), s2.grid(), R, h_square);
    const auto rescaled = detail::origin_window(s1.grid(), s2.grid(), R, h_rescaled);

    const std::size_t n = cfg.replicates;
    std::vector<std::uint8_t> cross(n * nl, 0), cross_r(n * nl, 0), cert_a(n, 0), bad(n, 0);
    parallel_for(n, cfg.workers, [&](std::size_t r) {
      const std::uint64_t rep = si * n + r;
      AdditiveField field({s1.sample(derive_seed(cfg.master_seed, 2 * rep)),
                           s2.sample(derive_seed(cfg.master_seed, 2 * rep + 1))});
      for (std::size_t li = 0; li < nl; ++li) {
        cross[r * nl + li] = has_crossing(excursion_mask(field, cfg.levels[li], square), Direction::LeftRight);
        if (cfg.rescaled)
          cross_r[r * nl + li] =
              has_crossing(excursion_mask(field, cfg.levels[li], rescaled), Direction::LeftRight);
      }
      if (check_A && certificate_block_AT(field.component(0), field.component(1), R)) {
        cert_a[r] = 1;
        const auto full = detail::origin_window(s1.grid(), s2.grid(), R, R);
        if (has_crossing(excursion_mask(field, 0.0, full), Direction::LeftRight)) bad[r] = 1;
      }
    });

    const double l21 = unit_lambda2(cfg.kernel1), l22 = unit_lambda2(cfg.kernel2);
    for (std::size_t li = 0; li < nl; ++li) {
      const double level = cfg.levels[li];
      std::size_t hits = 0, hits_r = 0;
      for (std::size_t r = 0; r < n; ++r) {
        hits += cross[r * nl + li];
        hits_r += cross_r[r * nl + li];
      }
      std::optional<double> ref;
      if (balanced && level == 0.0) ref = limit_at(l21, l22);
      out.rows.push_back(make_row("cross", k1, k2, R, cfg.rho, level, std::nullopt, hits, n, ref,
                                  cfg.master_seed));
      if (cfg.rescaled)
        out.rows.push_back(make_row("cross_rescaled", k1, k2, R, cfg.rho, level, std::nullopt,
                                    hits_r, n, std::nullopt, cfg.master_seed));
    }
    if (check_A)
      out.rows.push_back(make_row("cert_A", k1, k2, R, cfg.rho, 0.0, std::nullopt,
                                  detail::count_true(cert_a), n, limit_at(l21, l22),
                                  cfg.master_seed));
    out.violations += detail::count_true(bad);
  }
  return out;
}

/// Crossing of {f <= 2h/sqrt(log R)} on [0,R]^2 for each h, with the B_T^h
/// and C_T^h certificates checked on every replicate.
inline ExperimentOutput run_window_scan(const ExperimentConfig& cfg) {
  cfg.validate();
  detail::require_sizes(cfg);
  if (cfg.kernel1.variance != cfg.kernel2.variance)
    throw Error(ErrorKind::ConfigError, "window scan requires K1(0) = K2(0)");
  const double eps = cfg.grid_eps();
  const std::string k1 = describe(cfg.kernel1), k2 = describe(cfg.kernel2);
  const std::size_t nh = cfg.h_values.size();
  const double l21 = unit_lambda2(cfg.kernel1), l22 = unit_lambda2(cfg.kernel2);
  ExperimentOutput out;

  for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
    const double R = cfg.sizes[si];
    const CirculantSampler s1(cfg.kernel1, Grid1D::covering(0.0, R, eps));
    const CirculantSampler s2(cfg.kernel2, Grid1D::covering(0.0, R, eps));
    const auto square = detail::origin_window(s1.grid(), s2.grid(), R, R);
    const double root_log = std::sqrt(std::log(R));

    const std::size_t n = cfg.replicates;
    std::vector<std::uint8_t> cross(n * nh, 0), cert_b(n * nh, 0), cert_c(n * nh, 0), bad(n, 0);
    parallel_for(n, cfg.workers, [&](std::size_t r) {
      const std::uint64_t rep = si * n + r;
      AdditiveField field({s1.sample(derive_seed(cfg.master_seed, 2 * rep)),
                           s2.sample(derive_seed(cfg.master_seed, 2 * rep + 1))});
      const auto& g1 = field.component(0);
      const auto& g2 = field.component(1);
      for (std::size_t hi = 0; hi < nh; ++hi) {
        const double h = cfg.h_values[hi];
        const double level = 2.0 * (h / root_log);
        const bool crosses = has_crossing(excursion_mask(field, level, square), Direction::LeftRight);
        cross[r * nh + hi] = crosses;
        const auto b = certificate_path_BTh(g1, g2, R, h);
        if (b.holds) {
          cert_b[r * nh + hi] = 1;
          if (!has_crossing(superlevel_mask(field, b.guaranteed_level, square), Direction::LeftRight))
            bad[r] = 1;
        }
        const auto c = certificate_path_CTh(g1, g2, R, h);
        if (c.holds) {
          cert_c[r * nh + hi] = 1;
          const bool c_cross = c.guaranteed_level == level
                                   ? crosses
                                   : has_crossing(excursion_mask(field, c.guaranteed_level, square),
                                                  Direction::LeftRight);
          if (c_cross) bad[r] = 1;
        }
      }
    });

    for (std::size_t hi = 0; hi < nh; ++hi) {
      const double h = cfg.h_values[hi];
      const double level = 2.0 * (h / root_log);
      const auto bounds = cw_bounds(h, l21, l22);
      std::size_t hits = 0, hb = 0, hc = 0;
      for (std::size_t r = 0; r < n; ++r) {
        hits += cross[r * nh + hi];
        hb += cert_b[r * nh + hi];
        hc += cert_c[r * nh + hi];
      }
      out.rows.push_back(make_row("window", k1, k2, R, 1.0, level, h, hits, n, bounds.lower,
                                  cfg.master_seed));
      out.rows.push_back(make_row("cert_B", k1, k2, R, 1.0, -level, h, hb, n, bounds.lower,
                                  cfg.master_seed));
      out.rows.push_back(make_row("cert_C", k1, k2, R, 1.0, level, h, hc, n, 1.0 - bounds.upper,
                                  cfg.master_seed));
    }
    out.violations += detail::count_true(bad);
  }
  return out;
}

/// Rescaled suprema of g1 on [0,T] against the Gumbel limit, tail decay,
/// the exp-variance ratio, and counts of rescaled local extrema.
inline ExperimentOutput run_gumbel_study(const ExperimentConfig& cfg) {
  cfg.validate();
  detail::require_sizes(cfg);
  const double eps = cfg.grid_eps();
  const std::string k1 = describe(cfg.kernel1);
  const double sigma = std::sqrt(cfg.kernel1.variance);
  const double l2 = unit_lambda2(cfg.kernel1);
  const double shift = gumbel_shift(l2);
  ExperimentOutput out;

  for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
    const double T = cfg.sizes[si];
    const CirculantSampler sampler(cfg.kernel1, Grid1D::covering(0.0, T, eps));
    const std::size_t n = cfg.replicates;
    std::vector<double> sups(n), rescaled(n), max_marks(n), min_marks(n);
    parallel_for(n, cfg.workers, [&](std::size_t r) {
      const std::uint64_t rep = si * n + r;
      auto path = sampler.sample(derive_seed(cfg.master_seed, 2 * rep));
      for (auto& v : path.values) v /= sigma;
      const auto summary = summarize(path.values);
      sups[r] = summary.sup;
      rescaled[r] = rescaled_sup(summary, T);
      const auto marks = local_extrema_ppp(summary, path.grid, T);
      std::size_t above = 0, below = 0;
      for (const auto& m : marks.maxima) above += m.height > 0.0;
      for (const auto& m : marks.minima) below += m.height > 0.0;
      max_marks[r] = static_cast<double>(above);
      min_marks[r] = static_cast<double>(below);
    });

    ExtremesRow ex;
    ex.T = T;
    ex.replicates = n;
    ex.lambda2 = l2;
    ex.shift = shift;
    ex.ks = ks_distance(rescaled, [shift](double x) { return gumbel_cdf(x - shift); });
    ex.mean_max_marks = compensated_mean(max_marks);
    ex.mean_min_marks = compensated_mean(min_marks);
    ex.marks_reference = marks_above_intensity(l2);
    ex.count_correlation = correlation(max_marks, min_marks);
    ex.theta = cfg.theta;
    ex.exp_variance_ratio = exp_variance_ratio(sups, cfg.theta, T);
    ex.tail = tail_decay(sups, T, cfg.tail_x);

    for (double x : cfg.gumbel_x) {
      std::size_t hits = 0;
      for (double v : rescaled) hits += v <= x;
      out.rows.push_back(make_row("gumbel", k1, "", T, 1.0, x, std::nullopt, hits, n,
                                  gumbel_cdf(x - shift), cfg.master_seed));
    }
    for (const auto& tp : ex.tail) {
      const auto hits = static_cast<std::size_t>(std::llround(tp.frequency * static_cast<double>(n)));
      out.rows.push_back(make_row("tail", k1, "", T, 1.0, tp.x, std::nullopt, hits, n,
                                  tp.classical_bound, cfg.master_seed));
    }
    out.extremes.push_back(std::move(ex));
  }
  out.files.emplace_back("extremes.csv", extremes_csv(out.extremes, cfg.master_seed));
  return out;
}

/// Frequency of a blocking rectangle enclosing [-T,T] x [-tau,tau] at
/// s = L_{1;T}; every certificate found is verified on the field.
inline ExperimentOutput run_blocking_study(const ExperimentConfig& cfg) {
  cfg.validate();
  detail::require_sizes(cfg);
  const double eps = cfg.grid_eps();
  const std::string k1 = describe(cfg.kernel1), k2 = describe(cfg.kernel2);
  const double exponent = cfg.kernel1.variance / cfg.kernel2.variance;
  const double reference =
      limit_supinf(unit_lambda2(cfg.kernel1)) * limit_supinf(unit_lambda2(cfg.kernel2));
  ExperimentOutput out;

  for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
    const double T = cfg.sizes[si];
    const double tau = std::pow(T, exponent);
    const double s = l_T(T, cfg.kernel1.variance);
    const CirculantSampler s1(cfg.kernel1, Grid1D::covering(-2.0 * T, 2.0 * T, eps));
    const CirculantSampler s2(cfg.kernel2, Grid1D::covering(-2.0 * tau, 2.0 * tau, eps));
    const std::size_t n = cfg.replicates;
    std::vector<std::uint8_t> found(n, 0), bad(n, 0);
    parallel_for(n, cfg.workers, [&](std::size_t r) {
      const std::uint64_t rep = si * n + r;
      auto g1 = s1.sample(derive_seed(cfg.master_seed, 2 * rep));
      if (!blocking_side_holds(g1, T, s)) return;
      auto g2 = s2.sample(derive_seed(cfg.master_seed, 2 * rep + 1));
      const auto cert = find_blocking_rectangle(g1, g2, T, tau, s);
      if (!cert) return;
      found[r] = 1;
      if (!verify_blocking(AdditiveField({std::move(g1), std::move(g2)}), *cert)) bad[r] = 1;
    });
    out.rows.push_back(make_row("blocking", k1, k2, T, 1.0, s, std::nullopt,
                                detail::count_true(found), n, reference, cfg.master_seed));
    out.violations += detail::count_true(bad);
  }
  return out;
}

/// d = 3: find s3 with g3(s3) < 2 level in [0, search_length], then test a
/// left-right crossing of the slice {f <= level} on [0,R]^2 at x3 = s3.
inline ExperimentOutput run_slice3d_study(const ExperimentConfig& cfg) {
  cfg.validate();
  detail::require_sizes(cfg);
  if (!cfg.kernel3) throw Error(ErrorKind::ConfigError, "slice3d needs kernel3 (d = 3)");
  if (cfg.levels.size() != 1 || !(cfg.levels[0] < 0.0))
    throw Error(ErrorKind::ConfigError, "slice3d needs a single level < 0");
  if (!(cfg.search_length > 0.0)) throw Error(ErrorKind::ConfigError, "search_length must be > 0");
  const double level = cfg.levels[0];
  const double eps = cfg.grid_eps();
  const std::string k1 = describe(cfg.kernel1);
  const std::string k23 = describe(cfg.kernel2) + "+" + describe(*cfg.kernel3);
  const CirculantSampler s3(*cfg.kernel3, Grid1D::covering(0.0, cfg.search_length, eps));
  ExperimentOutput out;

  for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
    const double R = cfg.sizes[si];
    const CirculantSampler s1(cfg.kernel1, Grid1D::covering(0.0, R, eps));
    const CirculantSampler s2(cfg.kernel2, Grid1D::covering(0.0, R, eps));
    const auto square = detail::origin_window(s1.grid(), s2.grid(), R, R);
    const std::size_t n = cfg.replicates;
    std::vector<std::uint8_t> found(n, 0), joint(n, 0);
    parallel_for(n, cfg.workers, [&](std::size_t r) {
      const std::uint64_t rep = si * n + r;
      auto g3 = s3.sample(derive_seed(cfg.master_seed, 3 * rep + 2));
      std::size_t slice = g3.size();
      for (std::size_t i = 0; i < g3.size(); ++i)
        if (g3.values[i] < 2.0 * level) {
          slice = i;
          break;
        }
      if (slice == g3.size()) return;
      found[r] = 1;
      AdditiveField field({s1.sample(derive_seed(cfg.master_seed, 3 * rep)),
                           s2.sample(derive_seed(cfg.master_seed, 3 * rep + 1)), std::move(g3)});
      joint[r] = has_crossing(slice_mask(field, slice, level, square), Direction::LeftRight);
    });
    out.rows.push_back(make_row("slice_found", k1, k23, R, 1.0, level, std::nullopt,
                                detail::count_true(found), n, std::nullopt, cfg.master_seed));
    out.rows.push_back(make_row("slice_cross", k1, k23, R, 1.0, level, std::nullopt,
                                detail::count_true(joint), n, std::nullopt, cfg.master_seed));
  }
  return out;
}

/// Nodal-domain image {f <= 0} over a window x window grid.
inline ExperimentOutput run_render(const ExperimentConfig& cfg) {
  cfg.validate();
  const double eps = cfg.grid_eps();
  const Grid1D grid{0.0, eps, cfg.window};
  AdditiveField field({sample_path(cfg.kernel1, grid, derive_seed(cfg.master_seed, 0)),
                       sample_path(cfg.kernel2, grid, derive_seed(cfg.master_seed, 1))});
  const auto mask = excursion_mask(field, 0.0, full_window(field));
  std::size_t on = 0;
  for (auto b : mask.bits) on += b;
  ExperimentOutput out;
  out.rows.push_back(make_row("render", describe(cfg.kernel1), describe(cfg.kernel2),
                              grid.length(), 1.0, 0.0, std::nullopt, on, mask.size(), 0.5,
                              cfg.master_seed));
  out.files.emplace_back("nodal_" + family_name(cfg.kernel1.family) + "_" +
                             family_name(cfg.kernel2.family) + ".pgm",
                         encode_pgm(mask));
  return out;
}

/// Dumps `replicates` paths of kernel1 on [0, sizes[0]] in the ANF1 format.
inline ExperimentOutput run_sample(const ExperimentConfig& cfg) {
  cfg.validate();
  detail::require_sizes(cfg);
  const CirculantSampler sampler(cfg.kernel1, Grid1D::covering(0.0, cfg.sizes.front(), cfg.grid_eps()));
  ExperimentOutput out;
  for (std::size_t r = 0; r < cfg.replicates; ++r)
    out.files.emplace_back("path_" + std::to_string(r) + ".bin",
                           encode_path_dump(sampler.sample(derive_seed(cfg.master_seed, r))));
  return out;
}

inline ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::Sample: return run_sample(cfg);
    case ExperimentKind::CrossingScan: return run_crossing_scan(cfg);
    case ExperimentKind::WindowScan: return run_window_scan(cfg);
    case ExperimentKind::GumbelStudy:
    case ExperimentKind::ExtremesStudy: return run_gumbel_study(cfg);
    case ExperimentKind::BlockingStudy: return run_blocking_study(cfg);
    case ExperimentKind::Slice3D: return run_slice3d_study(cfg);
    case ExperimentKind::Render: return run_render(cfg);
  }
  throw Error(ErrorKind::ConfigError, "unhandled experiment");
}

}  // namespace anf
