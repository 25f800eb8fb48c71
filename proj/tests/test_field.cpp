#include <anf/field.hpp>

#include <gtest/gtest.h>

#include <array>
#include <filesystem>
#include <random>

using namespace anf;

namespace {

ProcessPath literal(std::vector<double> values) {
  const Grid1D grid{0.0, 1.0, values.size()};
  return ProcessPath{grid, std::move(values), KernelSpec::gaussian(), 0, 0.0};
}

AdditiveField random_field(std::size_t n, std::uint64_t master, std::size_t d = 2) {
  const CirculantSampler sampler(KernelSpec::gaussian(), Grid1D{0.0, 0.25, n});
  std::vector<ProcessPath> comps;
  for (std::size_t k = 0; k < d; ++k) comps.push_back(sampler.sample(derive_seed(master, k)));
  return AdditiveField(std::move(comps));
}

}  // namespace

TEST(Field, ValueIsComponentSum) {
  const AdditiveField f({literal({1.5, -2.0}), literal({0.25, 4.0, -1.0})});
  const std::array<std::size_t, 2> ij{1, 2};
  EXPECT_EQ(field_value(f, ij), -3.0);
  const std::array<std::size_t, 2> bad{2, 0};
  EXPECT_THROW(field_value(f, bad), Error);
  EXPECT_THROW(AdditiveField({literal({1.0})}), Error);
}

TEST(Field, AdditivityPermutationNegationOnRandomInstances) {
  const auto f = random_field(64, 5);
  const std::array<std::size_t, 2> swap{1, 0};
  const auto p = f.permuted(swap);
  const auto n = f.negated();
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> idx(0, 63);
  for (int t = 0; t < 1000; ++t) {
    const std::array<std::size_t, 2> ij{idx(rng), idx(rng)};
    const std::array<std::size_t, 2> ji{ij[1], ij[0]};
    const double v = f.value(ij);
    ASSERT_EQ(v, f.component(0)[ij[0]] + f.component(1)[ij[1]]);
    ASSERT_EQ(p.value(ji), f.component(1)[ij[1]] + f.component(0)[ij[0]]);
    ASSERT_EQ(n.value(ij), -v);
  }
}

TEST(Field, ThreeDimensionalAssociativity) {
  const auto f3 = random_field(16, 9, 3);
  const AdditiveField f2({f3.component(0), f3.component(1)});
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t k = 0; k < 16; ++k) {
      const std::array<std::size_t, 3> ijk{i, 3, k};
      const std::array<std::size_t, 2> ij{i, 3};
      ASSERT_EQ(f3.value(ijk), f2.value(ij) + f3.component(2)[k]);
    }
  const auto slice = slice_mask(f3, 7, 0.1, full_window(f3));
  for (std::size_t j = 0; j < 16; ++j)
    for (std::size_t i = 0; i < 16; ++i) {
      const std::array<std::size_t, 3> ijk{i, j, 7};
      ASSERT_EQ(slice.at(i, j), f3.value(ijk) <= 0.1);
    }
  EXPECT_THROW(excursion_mask(f3, 0.0, full_window(f3)), Error);
  EXPECT_THROW(slice_mask(f2, 0, 0.0, full_window(f2)), Error);
}

TEST(Mask, CellsMatchDefinitionAndSaturate) {
  const auto f = random_field(40, 2);
  const IndexWindow w{3, 5, 30, 20};
  const auto m = excursion_mask(f, 0.3, w);
  ASSERT_EQ(m.size(), 600u);
  for (std::size_t j = 0; j < 20; ++j)
    for (std::size_t i = 0; i < 30; ++i)
      ASSERT_EQ(m.at(i, j), f.component(0)[3 + i] + f.component(1)[5 + j] <= 0.3);
  EXPECT_EQ(area_fraction(excursion_mask(f, 1e9, w)), 1.0);
  EXPECT_EQ(area_fraction(excursion_mask(f, -1e9, w)), 0.0);
  EXPECT_THROW(excursion_mask(f, 0.0, IndexWindow{20, 0, 30, 10}), Error);
  EXPECT_THROW(excursion_mask(f, 0.0, IndexWindow{0, 0, 0, 10}), Error);
}

TEST(Mask, MonotoneInLevel) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> lvl(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const auto f = random_field(48, 100 + t);
    double a = lvl(rng), b = lvl(rng);
    if (a > b) std::swap(a, b);
    const auto lo = excursion_mask(f, a, full_window(f));
    const auto hi = excursion_mask(f, b, full_window(f));
    for (std::size_t c = 0; c < lo.size(); ++c) ASSERT_LE(lo.bits[c], hi.bits[c]);
  }
}

TEST(Mask, NegationDualityAndComplement) {
  const auto f = random_field(50, 4);
  const auto g = f.negated();
  for (double l : {-0.7, 0.0, 1.1}) {
    const auto below = excursion_mask(f, -l, full_window(f));
    const auto above = superlevel_mask(g, l, full_window(g));
    // {f <= -l} and {-f >= l} coincide; {-f > l} differs only on exact ties.
    for (std::size_t c = 0; c < below.size(); ++c) {
      const std::size_t i = c % 50, j = c / 50;
      const std::array<std::size_t, 2> ij{i, j};
      ASSERT_EQ(below.bits[c] != 0, g.value(ij) >= l);
      if (g.value(ij) != l) ASSERT_EQ(below.bits[c], above.bits[c]);
    }
    const auto m = excursion_mask(f, l, full_window(f));
    EXPECT_DOUBLE_EQ(area_fraction(m.complement()), 1.0 - area_fraction(m));
  }
}

TEST(Mask, PointwiseFractionIsOneHalf) {
  const CirculantSampler sampler(KernelSpec::gaussian(), Grid1D{0.0, 0.25, 8});
  const std::size_t n = 20000;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < n; ++r)
    hits += sampler.sample(derive_seed(6, 2 * r))[5] + sampler.sample(derive_seed(6, 2 * r + 1))[2] <= 0.0;
  EXPECT_NEAR(static_cast<double>(hits) / n, 0.5, 0.02);
}

TEST(Mask, AreaFractionAveragesToOneHalf) {
  double sum = 0.0;
  for (std::uint64_t r = 0; r < 50; ++r) {
    const auto f = random_field(512, 1000 + r);
    sum += area_fraction(excursion_mask(f, 0.0, full_window(f)));
  }
  EXPECT_NEAR(sum / 50.0, 0.5, 0.01);
  EXPECT_THROW(area_fraction(ExcursionMask{}), Error);
}

TEST(Pgm, GoldenBytes) {
  const ExcursionMask two{2, 1, 0.0, {1, 0}};
  EXPECT_EQ(encode_pgm(two), std::string("P5\n2 1\n255\n\x00\xFF", 13));
  const ExcursionMask blank{3, 3, 0.0, std::vector<std::uint8_t>(9, 0)};
  EXPECT_EQ(encode_pgm(blank), "P5\n3 3\n255\n" + std::string(9, '\xFF'));

  const auto file = std::filesystem::temp_directory_path() / "anf_pgm_test.pgm";
  render_pgm(two, file);
  const auto first = detail::read_file(file);
  render_pgm(two, file);
  EXPECT_EQ(detail::read_file(file), first);
  EXPECT_EQ(first, encode_pgm(two));
  std::filesystem::remove(file);
  EXPECT_THROW(render_pgm(two, "/nonexistent-dir/x.pgm"), Error);
}

TEST(MaskDump, PackedMsbFirstRoundTrip) {
  const ExcursionMask m{3, 3, -0.5, {1, 0, 0, 0, 0, 0, 0, 1, 1}};
  const auto bytes = encode_mask_dump(m);
  ASSERT_EQ(bytes.size(), 4u + 4 + 4 + 8 + 2);
  EXPECT_EQ(static_cast<unsigned char>(bytes[20]), 0x81);
  EXPECT_EQ(static_cast<unsigned char>(bytes[21]), 0x80);
  const auto back = decode_mask_dump(bytes);
  EXPECT_EQ(back.width, 3u);
  EXPECT_EQ(back.height, 3u);
  EXPECT_EQ(back.level, -0.5);
  EXPECT_EQ(back.bits, m.bits);
  EXPECT_THROW(decode_mask_dump(bytes.substr(0, 21)), Error);
}
