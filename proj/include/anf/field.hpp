#pragma once

// Additive fields f(x_1, ..., x_d) = g_1(x_1) + ... + g_d(x_d), stored as their
// 1D components, and the excursion masks {f <= level} cut from them.

#include <anf/error.hpp>
#include <anf/sampler.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace anf {

class AdditiveField {
 public:
  explicit AdditiveField(std::vector<ProcessPath> components) : components_(std::move(components)) {
    if (components_.size() < 2)
      throw Error(ErrorKind::InvalidArgument, "additive field needs d >= 2 components");
  }

  std::size_t dimension() const noexcept { return components_.size(); }
  const ProcessPath& component(std::size_t k) const { return components_.at(k); }
  std::span<const ProcessPath> components() const noexcept { return components_; }

  /// Exact sum of component values, accumulated in axis order.
  double value(std::span<const std::size_t> index) const {
    if (index.size() != components_.size())
      throw Error(ErrorKind::OutOfBounds, "index arity does not match field dimension");
    double sum = 0.0;
    for (std::size_t k = 0; k < index.size(); ++k) {
      if (index[k] >= components_[k].values.size())
        throw Error(ErrorKind::OutOfBounds, "index outside component grid");
      sum += components_[k].values[index[k]];
    }
    return sum;
  }

  /// The field -f (component-wise negation).
  AdditiveField negated() const {
    auto comps = components_;
    for (auto& c : comps)
      for (auto& v : c.values) v = -v;
    return AdditiveField(std::move(comps));
  }

  /// Field whose k-th axis is this field's order[k]-th axis.
  AdditiveField permuted(std::span<const std::size_t> order) const {
    if (order.size() != components_.size())
      throw Error(ErrorKind::InvalidArgument, "permutation arity mismatch");
    std::vector<ProcessPath> comps;
    comps.reserve(order.size());
    for (std::size_t k : order) comps.push_back(components_.at(k));
    return AdditiveField(std::move(comps));
  }

 private:
  std::vector<ProcessPath> components_;
};

inline double field_value(const AdditiveField& field, std::span<const std::size_t> index) {
  return field.value(index);
}

/// Rectangle of grid indices; x runs along component 0, y along component 1.
struct IndexWindow {
  std::size_t x0 = 0;
  std::size_t y0 = 0;
  std::size_t width = 0;
  std::size_t height = 0;
};

/// Boolean grid, row-major with `height` rows of `width` cells; row j holds
/// the cells (x0 + i, y0 + j).
struct ExcursionMask {
  std::size_t width = 0;
  std::size_t height = 0;
  double level = 0.0;
  std::vector<std::uint8_t> bits;

  bool at(std::size_t i, std::size_t j) const { return bits[j * width + i] != 0; }
  std::size_t size() const noexcept { return bits.size(); }

  ExcursionMask complement() const {
    ExcursionMask out = *this;
    for (auto& b : out.bits) b = b ? 0 : 1;
    return out;
  }
};

enum class Side { AtOrBelow, Above };

namespace detail {

inline void check_window(const AdditiveField& field, const IndexWindow& w) {
  if (w.width == 0 || w.height == 0) throw Error(ErrorKind::EmptyMask, "empty window");
  if (w.x0 + w.width > field.component(0).size() || w.y0 + w.height > field.component(1).size())
    throw Error(ErrorKind::OutOfBounds, "window exceeds component grids");
}

// Shared kernel of the 2D masks: `offset` is the (already accumulated) sum of
// the trailing components, or absent for d = 2.
inline ExcursionMask build_mask(const AdditiveField& field, double level, const IndexWindow& w,
                                Side side, const double* offset) {
  check_window(field, w);
  ExcursionMask mask{w.width, w.height, level, std::vector<std::uint8_t>(w.width * w.height)};
  const auto& g1 = field.component(0).values;
  const auto& g2 = field.component(1).values;
  for (std::size_t j = 0; j < w.height; ++j) {
    const double b = g2[w.y0 + j];
    std::uint8_t* row = mask.bits.data() + j * w.width;
    for (std::size_t i = 0; i < w.width; ++i) {
      double f = g1[w.x0 + i] + b;
      if (offset) f += *offset;
      row[i] = side == Side::AtOrBelow ? (f <= level) : (f > level);
    }
  }
  return mask;
}

}  // namespace detail

/// {f <= level} over a window of a 2D field.
inline ExcursionMask excursion_mask(const AdditiveField& field, double level,
                                    const IndexWindow& window) {
  if (field.dimension() != 2)
    throw Error(ErrorKind::InvalidArgument, "excursion_mask takes a planar field");
  return detail::build_mask(field, level, window, Side::AtOrBelow, nullptr);
}

/// {f > level} over a window of a 2D field.
inline ExcursionMask superlevel_mask(const AdditiveField& field, double level,
                                     const IndexWindow& window) {
  if (field.dimension() != 2)
    throw Error(ErrorKind::InvalidArgument, "superlevel_mask takes a planar field");
  return detail::build_mask(field, level, window, Side::Above, nullptr);
}

/// {f <= level} restricted to the plane where axes 2.. are fixed at `fixed`
/// (d = 3 only), using the exact d-dimensional field values.
inline ExcursionMask slice_mask(const AdditiveField& field, std::size_t fixed, double level,
                                const IndexWindow& window) {
  if (field.dimension() != 3)
    throw Error(ErrorKind::InvalidArgument, "slice_mask takes a 3D field");
  if (fixed >= field.component(2).size())
    throw Error(ErrorKind::OutOfBounds, "slice index outside third component");
  const double offset = field.component(2).values[fixed];
  return detail::build_mask(field, level, window, Side::AtOrBelow, &offset);
}

inline IndexWindow full_window(const AdditiveField& field) {
  return {0, 0, field.component(0).size(), field.component(1).size()};
}

inline double area_fraction(const ExcursionMask& mask) {
  if (mask.bits.empty()) throw Error(ErrorKind::EmptyMask, "empty mask");
  std::size_t on = 0;
  for (auto b : mask.bits) on += b;
  return static_cast<double>(on) / static_cast<double>(mask.bits.size());
}

/// Binary PGM: black (0) where the mask is set, white (255) elsewhere.
inline std::string encode_pgm(const ExcursionMask& mask) {
  std::string out =
      "P5\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) + "\n255\n";
  out.reserve(out.size() + mask.bits.size());
  for (auto b : mask.bits) out.push_back(b ? '\x00' : '\xFF');
  return out;
}

inline void render_pgm(const ExcursionMask& mask, const std::filesystem::path& file) {
  if (mask.bits.empty()) throw Error(ErrorKind::EmptyMask, "empty mask");
  detail::write_file(file, encode_pgm(mask));
}

/// "ANM1", u32 width, u32 height, f64 level, packed bits (MSB first, row-major).
inline std::string encode_mask_dump(const ExcursionMask& mask) {
  if (mask.width > std::numeric_limits<std::uint32_t>::max() ||
      mask.height > std::numeric_limits<std::uint32_t>::max())
    throw Error(ErrorKind::InvalidArgument, "mask too large for ANM1");
  std::string out = "ANM1";
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(mask.width));
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(mask.height));
  detail::put_le<double>(out, mask.level);
  std::uint8_t byte = 0;
  for (std::size_t n = 0; n < mask.bits.size(); ++n) {
    if (mask.bits[n]) byte |= static_cast<std::uint8_t>(0x80u >> (n % 8));
    if (n % 8 == 7) {
      out.push_back(static_cast<char>(byte));
      byte = 0;
    }
  }
  if (mask.bits.size() % 8 != 0) out.push_back(static_cast<char>(byte));
  return out;
}

inline ExcursionMask decode_mask_dump(std::string_view bytes) {
  if (bytes.substr(0, 4) != "ANM1") throw Error(ErrorKind::IoFailure, "bad mask dump magic");
  std::size_t pos = 4;
  ExcursionMask mask;
  mask.width = detail::get_le<std::uint32_t>(bytes, pos);
  mask.height = detail::get_le<std::uint32_t>(bytes, pos);
  mask.level = detail::get_le<double>(bytes, pos);
  const std::size_t cells = mask.width * mask.height;
  if (bytes.size() != pos + (cells + 7) / 8) throw Error(ErrorKind::IoFailure, "mask dump length");
  mask.bits.resize(cells);
  for (std::size_t n = 0; n < cells; ++n)
    mask.bits[n] = (static_cast<unsigned char>(bytes[pos + n / 8]) >> (7 - n % 8)) & 1u;
  return mask;
}

}  // namespace anf
