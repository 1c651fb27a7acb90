#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "wavedepth/haar.hpp"
#include "wavedepth/rng.hpp"
#include "wavedepth/synthetic.hpp"

using namespace wavedepth;

namespace {

Tensor random_tensor(std::uint64_t seed, std::size_t h, std::size_t w, std::size_t c = 1) {
  SplitMix64 rng(seed);
  Tensor t(h, w, c);
  for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = rng.uniform(-4.0f, 4.0f);
  return t;
}

double sq_norm(const Tensor& t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    acc += static_cast<double>(t.data()[i]) * static_cast<double>(t.data()[i]);
  return acc;
}

double pyramid_sq_norm(const CoefficientPyramid& pyr) {
  double acc = sq_norm(pyr.ll);
  for (const WaveletLevel& lvl : pyr.levels) acc += sq_norm(lvl.lh) + sq_norm(lvl.hl) + sq_norm(lvl.hh);
  return acc;
}

}  // namespace

TEST_CASE("single 2x2 block analysis") {
  Tensor x(2, 2);
  x.at(0, 0) = 1.0f;
  x.at(0, 1) = 2.0f;
  x.at(1, 0) = 3.0f;
  x.at(1, 1) = 4.0f;
  const DwtBands b = dwt_level(x);
  CHECK(b.ll.at(0, 0) == 5.0f);
  CHECK(b.lh.at(0, 0) == -2.0f);
  CHECK(b.hl.at(0, 0) == -1.0f);
  CHECK(b.hh.at(0, 0) == 0.0f);
}

TEST_CASE("constant image: details exactly zero, ll doubles") {
  Tensor x(8, 8);
  for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = 1.75f;
  const DwtBands b = dwt_level(x);
  for (std::size_t i = 0; i < b.ll.size(); ++i) {
    CHECK(b.ll.data()[i] == 3.5f);
    CHECK(b.lh.data()[i] == 0.0f);
    CHECK(b.hl.data()[i] == 0.0f);
    CHECK(b.hh.data()[i] == 0.0f);
  }
}

TEST_CASE("single level preserves the L2 norm") {
  const Tensor x = random_tensor(11, 64, 64);
  const DwtBands b = dwt_level(x);
  const double in = sq_norm(x);
  const double out = sq_norm(b.ll) + sq_norm(b.lh) + sq_norm(b.hl) + sq_norm(b.hh);
  CHECK(std::fabs(out - in) <= 1e-5 * in);
}

TEST_CASE("idwt_level inverts dwt_level") {
  const Tensor x = random_tensor(12, 64, 64);
  const DwtBands b = dwt_level(x);
  const Tensor back = idwt_level(b.ll, b.lh, b.hl, b.hh);
  CHECK(max_abs_diff(back, x) <= 1e-6f);
}

TEST_CASE("hand-evaluated synthesis") {
  Tensor ll(1, 1), lh(1, 1), hl(1, 1), hh(1, 1);
  ll.at(0, 0) = 5.0f;
  lh.at(0, 0) = -2.0f;
  hl.at(0, 0) = -1.0f;
  hh.at(0, 0) = 0.0f;
  const Tensor x = idwt_level(ll, lh, hl, hh);
  CHECK(x.at(0, 0) == 1.0f);
  CHECK(x.at(0, 1) == 2.0f);
  CHECK(x.at(1, 0) == 3.0f);
  CHECK(x.at(1, 1) == 4.0f);
}

TEST_CASE("zero details synthesize constant 2x2 blocks at ll/2") {
  const Tensor ll = random_tensor(13, 4, 4);
  const Tensor zero(4, 4);
  const Tensor x = idwt_level(ll, zero, zero, zero);
  for (std::size_t y = 0; y < 4; ++y) {
    for (std::size_t xx = 0; xx < 4; ++xx) {
      const float expect = ll.at(y, xx) * 0.5f;
      CHECK(x.at(2 * y, 2 * xx) == expect);
      CHECK(x.at(2 * y, 2 * xx + 1) == expect);
      CHECK(x.at(2 * y + 1, 2 * xx) == expect);
      CHECK(x.at(2 * y + 1, 2 * xx + 1) == expect);
    }
  }
}

TEST_CASE("odd dimensions are rejected") {
  const Tensor x = random_tensor(14, 5, 8);
  try {
    dwt_level(x);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dimension_mismatch);
  }
}

TEST_CASE("band dimension mismatch is rejected") {
  const Tensor a(2, 2), b(4, 4);
  try {
    idwt_level(a, a, a, b);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dimension_mismatch);
  }
}

TEST_CASE("pyramid of a constant scales ll by 2^j") {
  Tensor x(4, 4);
  for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = 3.0f;
  const CoefficientPyramid pyr = dwt_pyramid(x, 2);
  CHECK(pyr.ll.height() == 1);
  CHECK(pyr.ll.at(0, 0) == 12.0f);
  for (const WaveletLevel& lvl : pyr.levels)
    for (const Tensor* band : {&lvl.lh, &lvl.hl, &lvl.hh})
      for (std::size_t i = 0; i < band->size(); ++i) CHECK(band->data()[i] == 0.0f);
}

TEST_CASE("one-level pyramid reduces to dwt_level") {
  const Tensor x = random_tensor(15, 16, 16);
  const CoefficientPyramid pyr = dwt_pyramid(x, 1);
  const DwtBands b = dwt_level(x);
  CHECK(tensor_equal(pyr.ll, b.ll));
  CHECK(tensor_equal(pyr.levels[0].lh, b.lh));
  CHECK(tensor_equal(pyr.levels[0].hl, b.hl));
  CHECK(tensor_equal(pyr.levels[0].hh, b.hh));
}

TEST_CASE("four-level perfect reconstruction") {
  const Tensor x = random_tensor(16, 64, 64);
  const Tensor back = idwt_pyramid(dwt_pyramid(x, 4));
  const float bound = 1e-5f * tensor_max(x);
  CHECK(max_abs_diff(back, x) <= std::max(bound, 1e-5f));
}

TEST_CASE("zeroed details expand ll as 2^j blocks scaled by (1/2)^j") {
  const unsigned j = 3;
  CoefficientPyramid pyr;
  pyr.ll = random_tensor(17, 2, 2);
  std::size_t h = 2, w = 2;
  for (unsigned level = 0; level < j; ++level) {
    pyr.levels.push_back(WaveletLevel{Tensor(h, w), Tensor(h, w), Tensor(h, w)});
    h *= 2;
    w *= 2;
  }
  const Tensor x = idwt_pyramid(pyr);
  const float scale = 1.0f / static_cast<float>(1 << j);
  for (std::size_t y = 0; y < x.height(); ++y)
    for (std::size_t xx = 0; xx < x.width(); ++xx)
      CHECK(x.at(y, xx) == doctest::Approx(pyr.ll.at(y >> j, xx >> j) * scale).epsilon(1e-6));
}

TEST_CASE("single-level pyramid synthesis reduces to idwt_level") {
  const Tensor x = random_tensor(18, 8, 8);
  const CoefficientPyramid pyr = dwt_pyramid(x, 1);
  const Tensor a = idwt_pyramid(pyr);
  const Tensor b = idwt_level(pyr.ll, pyr.levels[0].lh, pyr.levels[0].hl, pyr.levels[0].hh);
  CHECK(tensor_equal(a, b));
}

TEST_CASE("parseval over the full pyramid") {
  for (std::uint64_t seed : {21, 22, 23}) {
    const Tensor x = random_tensor(seed, 32, 48);
    const CoefficientPyramid pyr = dwt_pyramid(x, 4);
    const double in = sq_norm(x);
    CHECK(std::fabs(pyramid_sq_norm(pyr) - in) <= 1e-4 * in);
  }
}

TEST_CASE("linearity of the analysis") {
  const Tensor x = random_tensor(24, 16, 16);
  const Tensor y = random_tensor(25, 16, 16);
  const float alpha = 0.75f, beta = -1.25f;
  Tensor mix(16, 16);
  for (std::size_t i = 0; i < mix.size(); ++i)
    mix.data()[i] = alpha * x.data()[i] + beta * y.data()[i];

  const DwtBands bm = dwt_level(mix);
  const DwtBands bx = dwt_level(x);
  const DwtBands by = dwt_level(y);
  auto check_band = [&](const Tensor& m, const Tensor& a, const Tensor& b) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      const float expect = alpha * a.data()[i] + beta * b.data()[i];
      CHECK(std::fabs(m.data()[i] - expect) <= 1e-5f * std::max(1.0f, std::fabs(expect)));
    }
  };
  check_band(bm.ll, bx.ll, by.ll);
  check_band(bm.lh, bx.lh, by.lh);
  check_band(bm.hl, bx.hl, by.hl);
  check_band(bm.hh, bx.hh, by.hh);
}

TEST_CASE("grid-aligned piecewise-constant scenes give bitwise-zero details off boundaries") {
  // boundaries on the align grid; any 2x2 support not straddling one is an
  // exact-arithmetic zero
  const SceneSpec spec = synth_scene_dyadic_spec(31, 64, 64, 4);
  const Tensor scene = render_scene(spec);
  const CoefficientPyramid pyr = dwt_pyramid(scene, 2);
  // align=4 means no level-1 or level-2 block straddles a boundary
  for (const WaveletLevel& lvl : pyr.levels)
    for (const Tensor* band : {&lvl.lh, &lvl.hl, &lvl.hh})
      for (std::size_t i = 0; i < band->size(); ++i) CHECK(band->data()[i] == 0.0f);
}

TEST_CASE("multi-channel tensors transform per channel") {
  const Tensor x = random_tensor(32, 8, 8, 3);
  const DwtBands b = dwt_level(x);
  for (std::size_t c = 0; c < 3; ++c) {
    Tensor single(8, 8);
    for (std::size_t y = 0; y < 8; ++y)
      for (std::size_t xx = 0; xx < 8; ++xx) single.at(y, xx) = x.at(y, xx, c);
    const DwtBands bs = dwt_level(single);
    for (std::size_t y = 0; y < 4; ++y)
      for (std::size_t xx = 0; xx < 4; ++xx) CHECK(b.ll.at(y, xx, c) == bs.ll.at(y, xx));
  }
}

TEST_CASE("pyramid directory roundtrip") {
  const Tensor x = random_tensor(33, 32, 32);
  const CoefficientPyramid pyr = dwt_pyramid(x, 3);
  const std::string dir = (std::filesystem::temp_directory_path() / "wavedepth_test_pyr").string();
  save_pyramid(pyr, dir);
  const CoefficientPyramid back = load_pyramid(dir);
  CHECK(tensor_equal(back.ll, pyr.ll));
  REQUIRE(back.levels.size() == pyr.levels.size());
  for (std::size_t j = 0; j < pyr.levels.size(); ++j) {
    CHECK(tensor_equal(back.levels[j].lh, pyr.levels[j].lh));
    CHECK(tensor_equal(back.levels[j].hl, pyr.levels[j].hl));
    CHECK(tensor_equal(back.levels[j].hh, pyr.levels[j].hh));
  }
}
