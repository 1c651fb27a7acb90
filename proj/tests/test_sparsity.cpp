#include <doctest.h>

#include <cmath>

#include "wavedepth/haar.hpp"
#include "wavedepth/rng.hpp"
#include "wavedepth/sparsity.hpp"
#include "wavedepth/synthetic.hpp"

using namespace wavedepth;

namespace {

Tensor random_tensor(std::uint64_t seed, std::size_t h, std::size_t w) {
  SplitMix64 rng(seed);
  Tensor t(h, w);
  for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = rng.uniform(-2.0f, 2.0f);
  return t;
}

double sq_norm(const Tensor& t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    acc += static_cast<double>(t.data()[i]) * static_cast<double>(t.data()[i]);
  return acc;
}

}  // namespace

TEST_CASE("scale_threshold arithmetic") {
  Tensor ll(2, 2);
  ll.at(0, 0) = 2.0f;
  ll.at(0, 1) = 6.0f;
  ll.at(1, 0) = 3.0f;
  ll.at(1, 1) = 5.0f;
  CHECK(scale_threshold(ll, 0.05) == 0.2);  // 0.05 * (6 - 2), exact in double

  Tensor constant(3, 3);
  for (std::size_t i = 0; i < constant.size(); ++i) constant.data()[i] = 4.5f;
  CHECK(scale_threshold(constant, 0.3) == 0.0);
  CHECK(scale_threshold(ll, 0.0) == 0.0);
}

TEST_CASE("get_sparse_mask activates 2x2 blocks above the threshold") {
  WaveletLevel lvl{Tensor(2, 2), Tensor(2, 2), Tensor(2, 2)};
  lvl.lh.at(0, 1) = 0.2f;  // only this coarse pixel exceeds 0.1
  const SparseMask m = get_sparse_mask(lvl, 0.1);
  CHECK(m.height == 4);
  CHECK(m.width == 4);
  CHECK(m.active_count() == 4);
  CHECK(m.at(0, 2));
  CHECK(m.at(0, 3));
  CHECK(m.at(1, 2));
  CHECK(m.at(1, 3));
  CHECK_FALSE(m.at(0, 0));
}

TEST_CASE("strict inequality drops exact zeros even at eta_s = 0") {
  WaveletLevel lvl{Tensor(2, 2), Tensor(2, 2), Tensor(2, 2)};
  const SparseMask m = get_sparse_mask(lvl, 0.0);
  CHECK(m.active_count() == 0);

  // negative zero behaves as zero
  const SparseMask m2 = get_sparse_mask(lvl, -0.0);
  CHECK(m2.active_count() == 0);
}

TEST_CASE("sparsity_level counts the active fraction") {
  CHECK(sparsity_level(all_ones_mask(4, 4)) == 1.0);
  SparseMask m(4, 4);
  m.set(0, 0, true);
  m.set(1, 1, true);
  m.set(2, 2, true);
  m.set(3, 3, true);
  CHECK(sparsity_level(m) == 0.25);
  CHECK(sparsity_level(SparseMask(4, 4)) == 0.0);
}

TEST_CASE("mask active sets shrink monotonically in eta") {
  const Tensor scene = synth_scene(41, 64, 64);
  const CoefficientPyramid pyr = dwt_pyramid(scene, 3);
  const double etas[] = {0.0, 0.01, 0.03, 0.05, 0.1, 0.3};
  for (const WaveletLevel& lvl : pyr.levels) {
    const double range = scale_threshold(pyr.ll, 1.0);
    SparseMask prev;
    bool first = true;
    for (double eta : etas) {
      const SparseMask m = get_sparse_mask(lvl, eta * range);
      if (!first) {
        CHECK(m.active_count() <= prev.active_count());
        for (std::size_t i = 0; i < m.bits.size(); ++i)
          if (m.bits[i]) CHECK(prev.bits[i]);  // subset property
      }
      prev = m;
      first = false;
    }
  }
}

TEST_CASE("threshold_pyramid keep-top basics") {
  const Tensor x = random_tensor(42, 16, 16);
  const CoefficientPyramid pyr = dwt_pyramid(x, 2);

  SUBCASE("rho = 1 leaves the pyramid untouched") {
    const CoefficientPyramid thr = threshold_pyramid(pyr, ThresholdPolicy::keep_top(1.0));
    CHECK(tensor_equal(thr.ll, pyr.ll));
    for (std::size_t j = 0; j < pyr.levels.size(); ++j)
      CHECK(tensor_equal(thr.levels[j].lh, pyr.levels[j].lh));
  }

  SUBCASE("rho = 0.1 keeps exactly round(0.1 * N)") {
    const std::uint64_t total = detail_count(pyr);
    const CoefficientPyramid thr = threshold_pyramid(pyr, ThresholdPolicy::keep_top(0.1));
    const auto expect = static_cast<std::uint64_t>(std::llround(0.1 * static_cast<double>(total)));
    CHECK(nonzero_detail_count(thr) <= expect);  // kept slots holding exact zeros stay zero
    // all survivors are at least as large as every dropped coefficient
    float min_kept = 1e30f;
    for (const WaveletLevel& lvl : thr.levels)
      for (const Tensor* band : {&lvl.lh, &lvl.hl, &lvl.hh})
        for (std::size_t i = 0; i < band->size(); ++i)
          if (band->data()[i] != 0.0f) min_kept = std::min(min_kept, std::fabs(band->data()[i]));
    std::uint64_t bigger = 0;
    for (const WaveletLevel& lvl : pyr.levels)
      for (const Tensor* band : {&lvl.lh, &lvl.hl, &lvl.hh})
        for (std::size_t i = 0; i < band->size(); ++i)
          if (std::fabs(band->data()[i]) > min_kept) ++bigger;
    CHECK(bigger <= expect);
  }

  SUBCASE("invalid rho is rejected") {
    try {
      threshold_pyramid(pyr, ThresholdPolicy::keep_top(1.5));
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::invalid_argument);
    }
  }
}

TEST_CASE("keep-top fraction keeps exactly round(rho * N) distinct nonzeros") {
  CoefficientPyramid pyr;
  pyr.ll = Tensor(5, 20);
  WaveletLevel lvl{Tensor(5, 20), Tensor(5, 20), Tensor(5, 20)};
  float v = 1.0f;
  for (std::size_t i = 0; i < 100; ++i) {
    lvl.lh.data()[i] = v;
    lvl.hl.data()[i] = v + 0.25f;
    lvl.hh.data()[i] = v + 0.5f;
    v += 1.0f;
  }
  pyr.levels.push_back(lvl);
  // 300 coefficients, all nonzero and distinct
  CHECK(nonzero_detail_count(threshold_pyramid(pyr, ThresholdPolicy::keep_top(0.1))) == 30);
  CHECK(nonzero_detail_count(threshold_pyramid(pyr, ThresholdPolicy::keep_top(10.0 / 300.0))) == 10);
}

TEST_CASE("keep-top ties keep earlier enumeration entries") {
  CoefficientPyramid pyr;
  pyr.ll = Tensor(1, 4);
  WaveletLevel lvl{Tensor(1, 4), Tensor(1, 4), Tensor(1, 4)};
  for (std::size_t i = 0; i < 4; ++i) {
    lvl.lh.data()[i] = 1.0f;  // all tied
    lvl.hl.data()[i] = 1.0f;
    lvl.hh.data()[i] = 1.0f;
  }
  pyr.levels.push_back(lvl);
  const CoefficientPyramid thr = threshold_pyramid(pyr, ThresholdPolicy::keep_top(0.5));
  // 12 slots, keep 6: the whole lh band then two hl entries, row-major
  for (std::size_t i = 0; i < 4; ++i) CHECK(thr.levels[0].lh.data()[i] == 1.0f);
  CHECK(thr.levels[0].hl.data()[0] == 1.0f);
  CHECK(thr.levels[0].hl.data()[1] == 1.0f);
  CHECK(thr.levels[0].hl.data()[2] == 0.0f);
  for (std::size_t i = 0; i < 4; ++i) CHECK(thr.levels[0].hh.data()[i] == 0.0f);
}

TEST_CASE("absolute thresholds zero failing coefficients, ll untouched") {
  const Tensor x = random_tensor(43, 8, 8);
  const CoefficientPyramid pyr = dwt_pyramid(x, 2);
  const CoefficientPyramid thr =
      threshold_pyramid(pyr, ThresholdPolicy::absolute({0.5, 0.25}));
  CHECK(tensor_equal(thr.ll, pyr.ll));
  for (std::size_t j = 0; j < 2; ++j) {
    const double eta_s = j == 0 ? 0.5 : 0.25;
    for (const Tensor* band :
         {&thr.levels[j].lh, &thr.levels[j].hl, &thr.levels[j].hh}) {
      for (std::size_t i = 0; i < band->size(); ++i) {
        const float c = band->data()[i];
        if (c != 0.0f) CHECK(std::fabs(c) > eta_s);
      }
    }
  }
}

TEST_CASE("reconstruction error shrinks as rho grows") {
  const Tensor x = random_tensor(44, 32, 32);
  const CoefficientPyramid pyr = dwt_pyramid(x, 3);
  const Tensor dense = idwt_pyramid(pyr);

  double prev = 1e300;
  for (double rho : {0.05, 0.2, 0.5, 0.9, 1.0}) {
    const Tensor recon = idwt_pyramid(threshold_pyramid(pyr, ThresholdPolicy::keep_top(rho)));
    Tensor diff(32, 32);
    for (std::size_t i = 0; i < diff.size(); ++i) diff.data()[i] = recon.data()[i] - dense.data()[i];
    const double err = sq_norm(diff);
    CHECK(err <= prev + 1e-12);
    prev = err;
  }
}

TEST_CASE("parseval energy bound: reconstruction error equals dropped energy") {
  const Tensor x = random_tensor(45, 32, 32);
  const CoefficientPyramid pyr = dwt_pyramid(x, 3);
  const CoefficientPyramid thr = threshold_pyramid(pyr, ThresholdPolicy::keep_top(0.25));

  double dropped = 0.0;
  for (std::size_t j = 0; j < pyr.levels.size(); ++j) {
    const Tensor* orig[3] = {&pyr.levels[j].lh, &pyr.levels[j].hl, &pyr.levels[j].hh};
    const Tensor* thrd[3] = {&thr.levels[j].lh, &thr.levels[j].hl, &thr.levels[j].hh};
    for (int b = 0; b < 3; ++b)
      for (std::size_t i = 0; i < orig[b]->size(); ++i) {
        const double d = orig[b]->data()[i] - thrd[b]->data()[i];
        dropped += d * d;
      }
  }

  const Tensor dense = idwt_pyramid(pyr);
  const Tensor sparse = idwt_pyramid(thr);
  double err = 0.0;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    const double d = static_cast<double>(dense.data()[i]) - static_cast<double>(sparse.data()[i]);
    err += d * d;
  }
  CHECK(std::fabs(err - dropped) <= 1e-4 * std::max(dropped, 1e-12));
}

TEST_CASE("dropping exactly-zero coefficients leaves the reconstruction bitwise unchanged") {
  const SceneSpec spec = synth_scene_dyadic_spec(46, 64, 64, 2);
  const Tensor scene = render_scene(spec);
  const CoefficientPyramid pyr = dwt_pyramid(scene, 4);

  const std::uint64_t nonzero = nonzero_detail_count(pyr);
  const std::uint64_t total = detail_count(pyr);
  const double rho = static_cast<double>(nonzero) / static_cast<double>(total);
  const CoefficientPyramid thr = threshold_pyramid(pyr, ThresholdPolicy::keep_top(rho));
  CHECK(nonzero_detail_count(thr) == nonzero);
  CHECK(tensor_equal(idwt_pyramid(thr), idwt_pyramid(pyr)));
}

TEST_CASE("dilate_mask grows by the structuring radius") {
  SparseMask m(5, 5);
  m.set(2, 2, true);
  const SparseMask d1 = dilate_mask(m, 1);
  CHECK(d1.active_count() == 9);
  CHECK(d1.at(1, 1));
  CHECK_FALSE(d1.at(0, 0));
  const SparseMask d0 = dilate_mask(m, 0);
  CHECK(d0.bits == m.bits);
}
