#pragma once

// Connectivity of excursion masks, and the geometric certificates that turn
// extreme-value events of g_1, g_2 into crossing or blocking statements about
// f = g_1 + g_2. Every certificate is checkable on the very grid it was
// derived from.

#include <anf/error.hpp>
#include <anf/extremes.hpp>
#include <anf/field.hpp>
#include <anf/sampler.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace anf {

struct ComponentLabels {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint32_t> labels;         // 0 outside the set, else 1..component_count
  std::uint32_t component_count = 0;
  std::vector<std::uint8_t> touches_boundary;  // indexed by label - 1

  std::uint32_t at(std::size_t i, std::size_t j) const { return labels[j * width + i]; }
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::uint32_t>(i);
  }

  std::uint32_t find(std::uint32_t x) {
    std::uint32_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::uint32_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller index becomes the root; keeps roots at first-touch cells.
    if (a < b) parent_[b] = a;
    else parent_[a] = b;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace detail

/// 4-connected component labelling; labels are assigned in row-major order of
/// each component's first cell.
inline ComponentLabels label_components(const ExcursionMask& mask) {
  if (mask.bits.empty()) throw Error(ErrorKind::EmptyMask, "empty mask");
  const std::size_t w = mask.width, h = mask.height, n = w * h;
  if (n > UINT32_MAX) throw Error(ErrorKind::InvalidArgument, "mask too large to label");
  detail::UnionFind uf(n);
  for (std::size_t j = 0; j < h; ++j) {
    for (std::size_t i = 0; i < w; ++i) {
      const std::size_t c = j * w + i;
      if (!mask.bits[c]) continue;
      if (i > 0 && mask.bits[c - 1]) uf.unite(static_cast<std::uint32_t>(c - 1), static_cast<std::uint32_t>(c));
      if (j > 0 && mask.bits[c - w]) uf.unite(static_cast<std::uint32_t>(c - w), static_cast<std::uint32_t>(c));
    }
  }
  ComponentLabels out{w, h, std::vector<std::uint32_t>(n, 0), 0, {}};
  std::vector<std::uint32_t> root_label(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    if (!mask.bits[c]) continue;
    const std::uint32_t r = uf.find(static_cast<std::uint32_t>(c));
    if (root_label[r] == 0) {
      root_label[r] = ++out.component_count;
      out.touches_boundary.push_back(0);
    }
    const std::uint32_t label = root_label[r];
    out.labels[c] = label;
    const std::size_t i = c % w, j = c / w;
    if (i == 0 || j == 0 || i + 1 == w || j + 1 == h) out.touches_boundary[label - 1] = 1;
  }
  return out;
}

enum class Direction { LeftRight, TopBottom };
enum class Connectivity { Four, Eight };

/// True iff one connected set component meets both opposite sides.
inline bool has_crossing(const ExcursionMask& mask, Direction direction,
                         Connectivity connectivity = Connectivity::Four) {
  if (mask.bits.empty()) throw Error(ErrorKind::EmptyMask, "empty mask");
  const std::size_t w = mask.width, h = mask.height;
  std::vector<std::uint8_t> seen(w * h, 0);
  std::vector<std::size_t> stack;
  const bool lr = direction == Direction::LeftRight;
  const std::size_t starts = lr ? h : w;
  for (std::size_t s = 0; s < starts; ++s) {
    const std::size_t c = lr ? s * w : s;
    if (mask.bits[c] && !seen[c]) {
      seen[c] = 1;
      stack.push_back(c);
    }
  }
  const bool eight = connectivity == Connectivity::Eight;
  while (!stack.empty()) {
    const std::size_t c = stack.back();
    stack.pop_back();
    const std::size_t i = c % w, j = c / w;
    if (lr ? i + 1 == w : j + 1 == h) return true;
    const std::size_t i_lo = i > 0 ? i - 1 : i, i_hi = i + 1 < w ? i + 1 : i;
    const std::size_t j_lo = j > 0 ? j - 1 : j, j_hi = j + 1 < h ? j + 1 : j;
    for (std::size_t jj = j_lo; jj <= j_hi; ++jj) {
      for (std::size_t ii = i_lo; ii <= i_hi; ++ii) {
        if (!eight && ii != i && jj != j) continue;
        const std::size_t d = jj * w + ii;
        if (mask.bits[d] && !seen[d]) {
          seen[d] = 1;
          stack.push_back(d);
        }
      }
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Grid intervals

/// Inclusive index range [lo, hi] of a grid.
struct IndexRange {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

/// Nearest grid index to x, halves rounded toward -infinity; nullopt when it
/// falls outside the grid.
inline std::optional<std::size_t> nearest_index(const Grid1D& grid, double x) {
  const double r = std::ceil((x - grid.origin) / grid.eps - 0.5);
  if (!(r >= 0.0) || r > static_cast<double>(grid.count - 1)) return std::nullopt;
  return static_cast<std::size_t>(r);
}

inline IndexRange interval_indices(const Grid1D& grid, double lo, double hi) {
  auto a = nearest_index(grid, lo);
  auto b = nearest_index(grid, hi);
  if (!a || !b || *a > *b)
    throw Error(ErrorKind::IntervalOutOfRange, "interval not covered by the path's grid");
  return {*a, *b};
}

struct RangeExtrema {
  double max = 0.0;
  double min = 0.0;
  std::size_t argmax = 0;  // smallest index on ties
  std::size_t argmin = 0;
};

inline RangeExtrema range_extrema(const ProcessPath& path, IndexRange r) {
  RangeExtrema e{path.values[r.lo], path.values[r.lo], r.lo, r.lo};
  for (std::size_t i = r.lo + 1; i <= r.hi; ++i) {
    const double v = path.values[i];
    if (v > e.max) {
      e.max = v;
      e.argmax = i;
    }
    if (v < e.min) {
      e.min = v;
      e.argmin = i;
    }
  }
  return e;
}

inline RangeExtrema interval_extrema(const ProcessPath& path, double lo, double hi) {
  return range_extrema(path, interval_indices(path.grid, lo, hi));
}

// ---------------------------------------------------------------------------
// Blocking rectangles

/// Rectangle [a1, b1] x [a2, b2] (grid indices) on whose boundary f > 0, and
/// the interior box [-T, T] x [-tau, tau] it was built to enclose.
struct BlockingCertificate {
  std::size_t a1 = 0, b1 = 0;
  std::size_t a2 = 0, b2 = 0;
  IndexRange inner_x;
  IndexRange inner_y;
  double threshold_s = 0.0;
  bool valid = false;
};

namespace detail {

inline bool boundary_positive(const ProcessPath& g1, const ProcessPath& g2, std::size_t a1,
                              std::size_t b1, std::size_t a2, std::size_t b2) {
  for (std::size_t x = a1; x <= b1; ++x)
    if (!(g1.values[x] + g2.values[a2] > 0.0) || !(g1.values[x] + g2.values[b2] > 0.0)) return false;
  for (std::size_t y = a2; y <= b2; ++y)
    if (!(g1.values[a1] + g2.values[y] > 0.0) || !(g1.values[b1] + g2.values[y] > 0.0)) return false;
  return true;
}

}  // namespace detail

/// The three conditions on one process: sup over [-2T,-T] and over [T,2T]
/// exceed s, and inf over [-2T,2T] exceeds -s.
inline bool blocking_side_holds(const ProcessPath& g, double T, double s) {
  if (!(T > 0.0)) throw Error(ErrorKind::DomainError, "T must be > 0");
  return interval_extrema(g, -2.0 * T, -T).max > s && interval_extrema(g, T, 2.0 * T).max > s &&
         interval_extrema(g, -2.0 * T, 2.0 * T).min > -s;
}

/// Tests the six sup/inf conditions at threshold s on [-2T,-T], [T,2T],
/// [-2T,2T] for g1 and the tau analogues for g2. On success the corners are
/// the argmax points of the outer intervals.
inline std::optional<BlockingCertificate> find_blocking_rectangle(const ProcessPath& g1,
                                                                  const ProcessPath& g2, double T,
                                                                  double tau, double s) {
  if (!(T > 0.0) || !(tau > 0.0)) throw Error(ErrorKind::DomainError, "T and tau must be > 0");
  const auto left1 = interval_extrema(g1, -2.0 * T, -T);
  const auto right1 = interval_extrema(g1, T, 2.0 * T);
  const auto all1 = interval_extrema(g1, -2.0 * T, 2.0 * T);
  const auto left2 = interval_extrema(g2, -2.0 * tau, -tau);
  const auto right2 = interval_extrema(g2, tau, 2.0 * tau);
  const auto all2 = interval_extrema(g2, -2.0 * tau, 2.0 * tau);
  BlockingCertificate cert;
  cert.inner_x = interval_indices(g1.grid, -T, T);
  cert.inner_y = interval_indices(g2.grid, -tau, tau);
  cert.threshold_s = s;
  const bool conditions = left1.max > s && right1.max > s && all1.min > -s && left2.max > s &&
                          right2.max > s && all2.min > -s;
  if (!conditions) return std::nullopt;
  cert.a1 = left1.argmax;
  cert.b1 = right1.argmax;
  cert.a2 = left2.argmax;
  cert.b2 = right2.argmax;
  cert.valid = detail::boundary_positive(g1, g2, cert.a1, cert.b1, cert.a2, cert.b2);
  if (!cert.valid) return std::nullopt;
  return cert;
}

/// Machine check of a blocking certificate on the field itself: f > 0 on the
/// grid boundary of R, and no component of {f <= 0} inside R touches both the
/// inner box and the boundary of R.
inline bool verify_blocking(const AdditiveField& field, const BlockingCertificate& cert) {
  if (field.dimension() != 2) throw Error(ErrorKind::InvalidArgument, "planar field required");
  const auto& g1 = field.component(0);
  const auto& g2 = field.component(1);
  if (cert.b1 >= g1.size() || cert.b2 >= g2.size() || cert.a1 >= cert.b1 || cert.a2 >= cert.b2)
    throw Error(ErrorKind::OutOfBounds, "certificate corners outside the field");
  if (!detail::boundary_positive(g1, g2, cert.a1, cert.b1, cert.a2, cert.b2)) return false;

  const IndexWindow rect{cert.a1, cert.a2, cert.b1 - cert.a1 + 1, cert.b2 - cert.a2 + 1};
  const auto mask = excursion_mask(field, 0.0, rect);
  const auto labels = label_components(mask);
  std::vector<std::uint8_t> inner(labels.component_count, 0);
  const std::size_t x_lo = std::max(cert.inner_x.lo, cert.a1), x_hi = std::min(cert.inner_x.hi, cert.b1);
  const std::size_t y_lo = std::max(cert.inner_y.lo, cert.a2), y_hi = std::min(cert.inner_y.hi, cert.b2);
  for (std::size_t y = y_lo; y <= y_hi && x_lo <= x_hi; ++y)
    for (std::size_t x = x_lo; x <= x_hi; ++x)
      if (auto l = labels.at(x - cert.a1, y - cert.a2)) inner[l - 1] = 1;
  for (std::uint32_t l = 0; l < labels.component_count; ++l)
    if (inner[l] && labels.touches_boundary[l]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Crossing certificates on [0, T]^2

/// A_T: sup g_i > L_{i;T} and inf g_i > -L_{i;T} for both processes. With
/// K_1(0) = K_2(0) the argmax column and row carry f > 0, so {f <= 0} cannot
/// cross [0, T]^2.
inline bool certificate_block_AT(const ProcessPath& g1, const ProcessPath& g2, double T) {
  const auto e1 = interval_extrema(g1, 0.0, T);
  const auto e2 = interval_extrema(g2, 0.0, T);
  const double L1 = l_T(T, g1.kernel.variance);
  const double L2 = l_T(T, g2.kernel.variance);
  return e1.max > L1 && e1.min > -L1 && e2.max > L2 && e2.min > -L2;
}

/// Outcome of a path certificate: when `holds`, f > guaranteed_level along
/// the witness line (row index into g2 for B, column index into g1 for C).
struct PathCertificate {
  bool holds = false;
  double guaranteed_level = 0.0;
  std::size_t witness = 0;
};

/// B_T^h: sup g2 > L_{2;T} - h/sqrt(log T) and inf g1 > -L_{1;T} - h/sqrt(log T);
/// the argmax row of g2 is a left-right path in {f > L_{2;T} - L_{1;T} - 2h/sqrt(log T)}.
inline PathCertificate certificate_path_BTh(const ProcessPath& g1, const ProcessPath& g2, double T,
                                            double h) {
  const auto e1 = interval_extrema(g1, 0.0, T);
  const auto e2 = interval_extrema(g2, 0.0, T);
  const double L1 = l_T(T, g1.kernel.variance);
  const double L2 = l_T(T, g2.kernel.variance);
  const double slack = h / std::sqrt(std::log(T));
  PathCertificate c;
  c.holds = e2.max > L2 - slack && e1.min > -L1 - slack;
  c.guaranteed_level = L2 - L1 - 2.0 * slack;
  c.witness = e2.argmax;
  return c;
}

/// C_T^h: sup g1 > L_{1;T} + h/sqrt(log T) and inf g2 > -L_{2;T} + h/sqrt(log T);
/// the argmax column of g1 is a top-bottom path in {f > L_{1;T} - L_{2;T} + 2h/sqrt(log T)}.
inline PathCertificate certificate_path_CTh(const ProcessPath& g1, const ProcessPath& g2, double T,
                                            double h) {
  const auto e1 = interval_extrema(g1, 0.0, T);
  const auto e2 = interval_extrema(g2, 0.0, T);
  const double L1 = l_T(T, g1.kernel.variance);
  const double L2 = l_T(T, g2.kernel.variance);
  const double slack = h / std::sqrt(std::log(T));
  PathCertificate c;
  c.holds = e1.max > L1 + slack && e2.min > -L2 + slack;
  c.guaranteed_level = L1 - L2 + 2.0 * slack;
  c.witness = e1.argmax;
  return c;
}

/// S_n with T_n = 2^n, tau(T) = T^{K1(0)/K2(0)}: both processes exceed
/// L_{1;2T_n} - level/2 and stay above -L_{1;2T_n} - level/2, g1 on
/// [0, 2T_n] and g2 on [0, 2 tau(T_n)].
inline bool certificate_ladder_Sn(const ProcessPath& g1, const ProcessPath& g2, int n, double level,
                                  double K1_0, double K2_0) {
  if (n < 0 || !(K1_0 > 0.0) || !(K2_0 > 0.0))
    throw Error(ErrorKind::DomainError, "ladder needs n >= 0 and positive variances");
  const double Tn = std::ldexp(1.0, n);
  const double tau = std::pow(Tn, K1_0 / K2_0);
  const double L = l_T(2.0 * Tn, K1_0);
  const auto e1 = interval_extrema(g1, 0.0, 2.0 * Tn);
  const auto e2 = interval_extrema(g2, 0.0, 2.0 * tau);
  const double half = 0.5 * level;
  return e1.max > L - half && e1.min > -L - half && e2.max > L - half && e2.min > -L - half;
}

}  // namespace anf
