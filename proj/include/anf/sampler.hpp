#pragma once

// Exact sampling of stationary Gaussian processes on uniform grids by
// circulant embedding, driven by counter-based seed streams.

#include <anf/detail/fft.hpp>
#include <anf/error.hpp>
#include <anf/kernels.hpp>
#include <anf/stats.hpp>

#include <gsl/gsl_cdf.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace anf {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 output finalizer (a bijection on 64-bit words).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed for stream `stream` under master seed `master`. Distinct streams under
/// one master never collide: both the multiply and the finalizer are bijective.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return splitmix64_mix(master ^ (stream * kGoldenGamma));
}

/// Counter-based standard normal stream: the n-th variate depends only on
/// (seed, n), so consumption order and thread placement never matter.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) noexcept : seed_(seed) {}

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform(std::uint64_t n) const noexcept {
    const std::uint64_t bits = splitmix64_mix(seed_ + (n + 1) * kGoldenGamma);
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal(std::uint64_t n) const noexcept { return gsl_cdf_ugaussian_Pinv(uniform(n)); }

 private:
  std::uint64_t seed_;
};

/// One realization of a centred stationary Gaussian process on a grid.
struct ProcessPath {
  Grid1D grid;
  std::vector<double> values;
  KernelSpec kernel;
  std::uint64_t seed = 0;
  double clamped_mass = 0.0;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Precomputes the embedding spectrum for one (kernel, grid) pair and draws
/// any number of paths from it. Immutable after construction; `sample` may be
/// called concurrently.
class CirculantSampler {
 public:
  CirculantSampler(const KernelSpec& spec, const Grid1D& grid) : spec_(spec), grid_(grid) {
    auto spectrum = embedding_spectrum(spec, grid);
    clamped_mass_ = spectrum.clamped_mass;
    m_ = spectrum.eigenvalues.size();
    // Hermitian construction: Z_0, Z_{M/2} real with variance lambda_k; the
    // other modes complex with independent parts of variance lambda_k / 2.
    // The 1/sqrt(M) of the synthesis is folded into the amplitudes.
    amplitude_.resize(m_ / 2 + 1);
    const double inv_m = 1.0 / static_cast<double>(m_);
    for (std::size_t k = 0; k <= m_ / 2; ++k) {
      const double lam = std::max(0.0, spectrum.eigenvalues[k]);
      const bool real_mode = (k == 0 || k == m_ / 2);
      amplitude_[k] = std::sqrt(lam * inv_m * (real_mode ? 1.0 : 0.5));
    }
  }

  const KernelSpec& kernel() const noexcept { return spec_; }
  const Grid1D& grid() const noexcept { return grid_; }
  std::size_t embedding_size() const noexcept { return m_; }
  double clamped_mass() const noexcept { return clamped_mass_; }

  /// Writes grid.count values for `seed` into `out`.
  void sample_into(std::uint64_t seed, std::span<double> out) const {
    if (out.size() != grid_.count)
      throw Error(ErrorKind::InvalidArgument, "output span does not match grid");
    const NormalStream normals(seed);
    auto& ws = detail::FftWorkspace::local();
    ws.reserve(m_);
    fftw_complex* z = ws.half.get();
    const std::size_t half = m_ / 2;
    z[0][0] = amplitude_[0] * normals.normal(0);
    z[0][1] = 0.0;
    z[half][0] = amplitude_[half] * normals.normal(1);
    z[half][1] = 0.0;
    for (std::size_t k = 1; k < half; ++k) {
      z[k][0] = amplitude_[k] * normals.normal(2 * k);
      z[k][1] = amplitude_[k] * normals.normal(2 * k + 1);
    }
    fftw_execute_dft_c2r(detail::PlanCache::instance().get(detail::FftKind::ComplexToReal, m_),
                         z, ws.real.get());
    std::copy_n(ws.real.get(), grid_.count, out.begin());
  }

  ProcessPath sample(std::uint64_t seed) const {
    ProcessPath path{grid_, std::vector<double>(grid_.count), spec_, seed, clamped_mass_};
    sample_into(seed, path.values);
    return path;
  }

 private:
  KernelSpec spec_;
  Grid1D grid_;
  std::size_t m_ = 0;
  double clamped_mass_ = 0.0;
  std::vector<double> amplitude_;
};

inline ProcessPath sample_path(const KernelSpec& spec, const Grid1D& grid, std::uint64_t seed) {
  return CirculantSampler(spec, grid).sample(seed);
}

/// Replicate- and space-averaged estimate of K(lag * eps).
inline double empirical_covariance(std::span<const ProcessPath> paths, std::size_t lag) {
  if (paths.empty()) throw Error(ErrorKind::EmptySamples, "no paths");
  const auto& grid = paths.front().grid;
  const auto& kernel = paths.front().kernel;
  for (const auto& p : paths) {
    if (!(p.grid == grid) || !(p.kernel == kernel))
      throw Error(ErrorKind::MixedInputs, "paths differ in grid or kernel");
    if (p.values.size() != grid.count)
      throw Error(ErrorKind::MixedInputs, "path length does not match its grid");
  }
  if (lag >= grid.count) throw Error(ErrorKind::OutOfBounds, "lag exceeds grid");
  CompensatedSum sum;
  std::size_t n = 0;
  for (const auto& p : paths) {
    for (std::size_t i = 0; i + lag < grid.count; ++i) {
      sum.add(p.values[i] * p.values[i + lag]);
      ++n;
    }
  }
  return sum.value() / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Binary path dump: "ANF1", u64 seed, u64 count, f64 origin, f64 eps, f64[count],
// all little-endian.

namespace detail {

template <typename T>
void put_le(std::string& out, T value) {
  static_assert(sizeof(T) == 8 || sizeof(T) == 4);
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  for (std::size_t b = 0; b < sizeof(U); ++b)
    out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
}

template <typename T>
T get_le(std::string_view in, std::size_t& pos) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  if (pos + sizeof(U) > in.size()) throw Error(ErrorKind::IoFailure, "truncated dump");
  U bits = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b)
    bits |= static_cast<U>(static_cast<unsigned char>(in[pos + b])) << (8 * b);
  pos += sizeof(U);
  return std::bit_cast<T>(bits);
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::IoFailure, "write failed for " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace detail

inline std::string encode_path_dump(const ProcessPath& path) {
  std::string out = "ANF1";
  detail::put_le<std::uint64_t>(out, path.seed);
  detail::put_le<std::uint64_t>(out, path.values.size());
  detail::put_le<double>(out, path.grid.origin);
  detail::put_le<double>(out, path.grid.eps);
  for (double v : path.values) detail::put_le<double>(out, v);
  return out;
}

/// Decodes a dump; the kernel is not part of the format and is left default.
inline ProcessPath decode_path_dump(std::string_view bytes) {
  if (bytes.substr(0, 4) != "ANF1") throw Error(ErrorKind::IoFailure, "bad path dump magic");
  std::size_t pos = 4;
  ProcessPath path;
  path.seed = detail::get_le<std::uint64_t>(bytes, pos);
  path.grid.count = detail::get_le<std::uint64_t>(bytes, pos);
  path.grid.origin = detail::get_le<double>(bytes, pos);
  path.grid.eps = detail::get_le<double>(bytes, pos);
  if (bytes.size() != pos + 8 * path.grid.count)
    throw Error(ErrorKind::IoFailure, "path dump length mismatch");
  path.values.resize(path.grid.count);
  for (auto& v : path.values) v = detail::get_le<double>(bytes, pos);
  return path;
}

inline void write_path_dump(const ProcessPath& path, const std::filesystem::path& file) {
  detail::write_file(file, encode_path_dump(path));
}

inline ProcessPath read_path_dump(const std::filesystem::path& file) {
  return decode_path_dump(detail::read_file(file));
}

}  // namespace anf
