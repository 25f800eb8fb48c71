#pragma once

// Stationary covariance kernels for the 1D components of an additive field,
// together with the spectral quantities consumed by the sampler and by the
// extreme-value limits.

#include <anf/detail/fft.hpp>
#include <anf/error.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace anf {

enum class KernelFamily { Gaussian, DampedCosine };

/// K(x) = variance * cos(omega x) * exp(-(x/scale)^2); Gaussian has omega = 0.
struct KernelSpec {
  KernelFamily family = KernelFamily::Gaussian;
  double variance = 1.0;
  double scale = 1.0;
  double omega = 0.0;

  static KernelSpec gaussian(double variance = 1.0, double scale = 1.0) {
    KernelSpec k{KernelFamily::Gaussian, variance, scale, 0.0};
    k.validate();
    return k;
  }

  static KernelSpec damped_cosine(double variance = 1.0, double scale = 1.0, double omega = 1.0) {
    KernelSpec k{KernelFamily::DampedCosine, variance, scale, omega};
    k.validate();
    return k;
  }

  void validate() const {
    if (!(variance > 0.0) || !std::isfinite(variance))
      throw Error(ErrorKind::InvalidArgument, "kernel variance must be > 0");
    if (!(scale > 0.0) || !std::isfinite(scale))
      throw Error(ErrorKind::InvalidArgument, "kernel scale must be > 0");
    if (!(omega >= 0.0) || !std::isfinite(omega))
      throw Error(ErrorKind::InvalidArgument, "kernel omega must be >= 0");
    if (family == KernelFamily::Gaussian && omega != 0.0)
      throw Error(ErrorKind::InvalidArgument, "gaussian kernel takes no omega");
  }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// Uniform grid origin + i*eps, i < count.
struct Grid1D {
  double origin = 0.0;
  double eps = 0.25;
  std::size_t count = 2;

  double point(std::size_t i) const { return origin + static_cast<double>(i) * eps; }
  double length() const { return eps * static_cast<double>(count - 1); }
  double last() const { return point(count - 1); }

  void validate() const {
    if (!(eps > 0.0) || !std::isfinite(eps) || !std::isfinite(origin))
      throw Error(ErrorKind::InvalidGrid, "grid spacing must be finite and > 0");
    if (count < 2) throw Error(ErrorKind::InvalidGrid, "grid needs at least 2 points");
  }

  /// Smallest grid starting at lo with spacing eps whose last point is >= hi.
  static Grid1D covering(double lo, double hi, double eps) {
    if (!(hi > lo)) throw Error(ErrorKind::InvalidGrid, "empty interval");
    const double steps = std::ceil((hi - lo) / eps - 1e-9);
    Grid1D g{lo, eps, static_cast<std::size_t>(steps) + 1};
    g.validate();
    return g;
  }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;
};

inline double eval_kernel(const KernelSpec& spec, double x) {
  const double ax = std::abs(x);
  const double t = ax / spec.scale;
  const double envelope = spec.variance * std::exp(-t * t);
  if (spec.family == KernelFamily::Gaussian) return envelope;
  return envelope * std::cos(spec.omega * ax);
}

/// Second spectral moment -K''(0), closed form per family.
inline double lambda2(const KernelSpec& spec) {
  const double inv_a2 = 1.0 / (spec.scale * spec.scale);
  if (spec.family == KernelFamily::Gaussian) return 2.0 * spec.variance * inv_a2;
  return spec.variance * (spec.omega * spec.omega + 2.0 * inv_a2);
}

/// lambda2 of the variance-normalized process g / sqrt(K(0)); this is the
/// parameter that enters the Gumbel limits.
inline double unit_lambda2(const KernelSpec& spec) { return lambda2(spec) / spec.variance; }

/// max |K(x) log x| over the geometric mesh x_min * 2^(k/8), k = 0..64.
inline double breman_margin(const KernelSpec& spec, double x_min) {
  if (!(x_min > 1.0)) throw Error(ErrorKind::DomainError, "breman_margin needs x_min > 1");
  double worst = 0.0;
  for (int k = 0; k <= 64; ++k) {
    const double x = x_min * std::exp2(k / 8.0);
    worst = std::max(worst, std::abs(eval_kernel(spec, x) * std::log(x)));
  }
  return worst;
}

/// Distance beyond which |K| < 1e-18 * variance (both families share the envelope).
inline double numerical_support(const KernelSpec& spec) { return 6.5 * spec.scale; }

/// Circulant embedding length: next power of two >= 2*count, and large enough
/// that the wrapped half-length M*eps/2 reaches past the kernel's support.
inline std::size_t embedding_length(const KernelSpec& spec, const Grid1D& grid) {
  const double support_steps = std::ceil(numerical_support(spec) / grid.eps);
  const std::size_t need =
      std::max<std::size_t>(2 * grid.count, 2 * static_cast<std::size_t>(support_steps));
  std::size_t m = 1;
  while (m < need) m <<= 1;
  return m;
}

/// Eigenvalues of the circulant embedding, after the non-embeddability check.
struct EmbeddingSpectrum {
  std::vector<double> eigenvalues;  // length M, round-off negatives zeroed
  double clamped_mass = 0.0;        // sum of max(0, -lambda_k)
  double total_mass = 0.0;          // sum of |lambda_k|
};

inline constexpr double kClampTolerance = 1e-6;

inline EmbeddingSpectrum embedding_spectrum(const KernelSpec& spec, const Grid1D& grid) {
  spec.validate();
  grid.validate();
  const std::size_t m = embedding_length(spec, grid);
  std::vector<double> row(m);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t lag = std::min(j, m - j);
    row[j] = eval_kernel(spec, static_cast<double>(lag) * grid.eps);
  }
  std::vector<std::complex<double>> half(m / 2 + 1);
  detail::forward_real(row, half);

  EmbeddingSpectrum out;
  out.eigenvalues.resize(m);
  double max_abs = 0.0;
  double max_imag = 0.0;
  for (std::size_t k = 0; k <= m / 2; ++k) {
    max_abs = std::max(max_abs, std::abs(half[k].real()));
    max_imag = std::max(max_imag, std::abs(half[k].imag()));
    out.eigenvalues[k] = half[k].real();
    if (k > 0 && k < m / 2) out.eigenvalues[m - k] = half[k].real();
  }
  if (max_imag > 1e-9 * std::max(max_abs, 1.0))
    throw Error(ErrorKind::NonEmbeddable, "circulant eigenvalues are not real");
  // Negative values within transform round-off are exact zeros, not clamping.
  const double roundoff = 1e-12 * max_abs;
  for (double& lam : out.eigenvalues) {
    if (lam < 0.0 && -lam <= roundoff) lam = 0.0;
    out.clamped_mass += std::max(0.0, -lam);
    out.total_mass += std::abs(lam);
  }
  if (out.clamped_mass > kClampTolerance * out.total_mass) {
    std::ostringstream msg;
    msg << "negative eigenvalue mass " << out.clamped_mass << " exceeds tolerance of total "
        << out.total_mass;
    throw Error(ErrorKind::NonEmbeddable, msg.str());
  }
  return out;
}

/// The M real eigenvalues of the even circulant extension of K on the grid.
inline std::vector<double> circulant_eigenvalues(const KernelSpec& spec, const Grid1D& grid) {
  return embedding_spectrum(spec, grid).eigenvalues;
}

// ---------------------------------------------------------------------------
// key=value serialization

inline std::string family_name(KernelFamily f) {
  return f == KernelFamily::Gaussian ? "gaussian" : "damped_cosine";
}

inline KernelFamily parse_family(std::string_view text) {
  if (text == "gaussian") return KernelFamily::Gaussian;
  if (text == "damped_cosine") return KernelFamily::DampedCosine;
  throw Error(ErrorKind::ConfigError, "unknown kernel family '" + std::string(text) + "'");
}

inline double parse_real(std::string_view text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw Error(ErrorKind::ConfigError, "not a number: '" + std::string(text) + "'");
  return value;
}

inline std::string format_real(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

/// Sets one kernel field from a key/value pair; returns false on unknown key.
inline bool set_kernel_field(KernelSpec& spec, std::string_view key, std::string_view value) {
  if (key == "family") spec.family = parse_family(value);
  else if (key == "variance") spec.variance = parse_real(value);
  else if (key == "scale") spec.scale = parse_real(value);
  else if (key == "omega") spec.omega = parse_real(value);
  else return false;
  return true;
}

inline std::string to_key_values(const KernelSpec& spec) {
  std::string out = "family=" + family_name(spec.family) + "\n";
  out += "variance=" + format_real(spec.variance) + "\n";
  out += "scale=" + format_real(spec.scale) + "\n";
  out += "omega=" + format_real(spec.omega) + "\n";
  return out;
}

inline KernelSpec parse_key_values(std::string_view text) {
  KernelSpec spec;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::ConfigError, "expected key=value, got '" + line + "'");
    if (!set_kernel_field(spec, std::string_view(line).substr(0, eq),
                          std::string_view(line).substr(eq + 1)))
      throw Error(ErrorKind::ConfigError, "unknown kernel key '" + line.substr(0, eq) + "'");
  }
  spec.validate();
  return spec;
}

/// Compact comma-free descriptor used in CSV rows.
inline std::string describe(const KernelSpec& spec) {
  std::string out = family_name(spec.family) + ";var=" + format_real(spec.variance) +
                    ";scale=" + format_real(spec.scale);
  if (spec.family == KernelFamily::DampedCosine) out += ";omega=" + format_real(spec.omega);
  return out;
}

}  // namespace anf
