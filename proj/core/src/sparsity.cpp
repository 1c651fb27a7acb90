#include "wavedepth/sparsity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>

namespace wavedepth {

SparseMask all_ones_mask(std::size_t h, std::size_t w) { return SparseMask(h, w, true); }

SparseMask dilate_mask(const SparseMask& m, unsigned radius) {
  if (radius == 0) return m;
  SparseMask out(m.height, m.width);
  const std::ptrdiff_t r = radius;
  for (std::ptrdiff_t y = 0; y < static_cast<std::ptrdiff_t>(m.height); ++y) {
    for (std::ptrdiff_t x = 0; x < static_cast<std::ptrdiff_t>(m.width); ++x) {
      bool hit = false;
      for (std::ptrdiff_t dy = -r; dy <= r && !hit; ++dy) {
        const std::ptrdiff_t yy = y + dy;
        if (yy < 0 || yy >= static_cast<std::ptrdiff_t>(m.height)) continue;
        for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
          const std::ptrdiff_t xx = x + dx;
          if (xx < 0 || xx >= static_cast<std::ptrdiff_t>(m.width)) continue;
          if (m.at(yy, xx)) {
            hit = true;
            break;
          }
        }
      }
      out.set(y, x, hit);
    }
  }
  return out;
}

double scale_threshold(const Tensor& ll, double eta) {
  if (ll.empty()) fail(Errc::invalid_argument, "scale_threshold on empty band");
  const double range = static_cast<double>(tensor_max(ll)) - static_cast<double>(tensor_min(ll));
  return eta * range;
}

SparseMask get_sparse_mask(const WaveletLevel& level, double eta_s) {
  if (!level.lh.same_shape(level.hl) || !level.lh.same_shape(level.hh))
    fail(Errc::dimension_mismatch, "detail bands disagree");
  if (std::signbit(eta_s) && eta_s == 0.0) eta_s = 0.0;  // -0 behaves as 0

  const std::size_t h = level.lh.height(), w = level.lh.width();
  SparseMask out(2 * h, 2 * w);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      double m = std::fabs(static_cast<double>(level.lh.at(y, x)));
      m = std::max(m, std::fabs(static_cast<double>(level.hl.at(y, x))));
      m = std::max(m, std::fabs(static_cast<double>(level.hh.at(y, x))));
      if (m > eta_s) {
        out.set(2 * y, 2 * x, true);
        out.set(2 * y, 2 * x + 1, true);
        out.set(2 * y + 1, 2 * x, true);
        out.set(2 * y + 1, 2 * x + 1, true);
      }
    }
  }
  return out;
}

double sparsity_level(const SparseMask& mask) {
  if (mask.bits.empty()) return 0.0;
  return static_cast<double>(mask.active_count()) / static_cast<double>(mask.bits.size());
}

ThresholdPolicy ThresholdPolicy::absolute(std::vector<double> thresholds) {
  ThresholdPolicy p;
  p.mode = Mode::absolute;
  p.per_level = std::move(thresholds);
  return p;
}

ThresholdPolicy ThresholdPolicy::keep_top(double rho) {
  ThresholdPolicy p;
  p.mode = Mode::keep_top_fraction;
  p.rho = rho;
  return p;
}

namespace {

void for_each_band(CoefficientPyramid& pyr, const std::function<void(std::size_t, Tensor&)>& fn) {
  for (std::size_t j = 0; j < pyr.levels.size(); ++j) {
    fn(j, pyr.levels[j].lh);
    fn(j, pyr.levels[j].hl);
    fn(j, pyr.levels[j].hh);
  }
}

}  // namespace

CoefficientPyramid threshold_pyramid(const CoefficientPyramid& pyr, const ThresholdPolicy& policy) {
  validate_pyramid(pyr);
  CoefficientPyramid out = pyr;

  if (policy.mode == ThresholdPolicy::Mode::absolute) {
    if (policy.per_level.size() != pyr.levels.size())
      fail(Errc::invalid_argument, "one absolute threshold required per level");
    for_each_band(out, [&](std::size_t j, Tensor& band) {
      const double eta_s = policy.per_level[j];
      for (std::size_t i = 0; i < band.size(); ++i)
        if (!(std::fabs(static_cast<double>(band.data()[i])) > eta_s)) band.data()[i] = 0.0f;
    });
    return out;
  }

  if (!(policy.rho >= 0.0 && policy.rho <= 1.0))
    fail(Errc::invalid_argument, "keep fraction must be in [0,1]");
  if (policy.rho == 1.0) return out;

  // Joint ranking of all detail coefficients in (level, band, row-major)
  // enumeration order; stable sort keeps earlier entries on ties.
  std::vector<float*> slots;
  for_each_band(out, [&](std::size_t, Tensor& band) {
    for (std::size_t i = 0; i < band.size(); ++i) slots.push_back(band.data() + i);
  });
  const std::uint64_t total = slots.size();
  const std::uint64_t keep =
      std::min<std::uint64_t>(total, static_cast<std::uint64_t>(std::llround(policy.rho * static_cast<double>(total))));

  std::vector<std::uint64_t> order(total);
  for (std::uint64_t i = 0; i < total; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
    return std::fabs(*slots[a]) > std::fabs(*slots[b]);
  });
  for (std::uint64_t i = keep; i < total; ++i) *slots[order[i]] = 0.0f;
  return out;
}

std::uint64_t detail_count(const CoefficientPyramid& pyr) {
  std::uint64_t n = 0;
  for (const WaveletLevel& lvl : pyr.levels) n += lvl.lh.size() + lvl.hl.size() + lvl.hh.size();
  return n;
}

std::uint64_t nonzero_detail_count(const CoefficientPyramid& pyr) {
  std::uint64_t n = 0;
  for (const WaveletLevel& lvl : pyr.levels)
    for (const Tensor* band : {&lvl.lh, &lvl.hl, &lvl.hh})
      for (std::size_t i = 0; i < band->size(); ++i)
        if (band->data()[i] != 0.0f) ++n;
  return n;
}

std::vector<double> per_level_density(const CoefficientPyramid& pyr) {
  std::vector<double> out;
  out.reserve(pyr.levels.size());
  for (const WaveletLevel& lvl : pyr.levels) {
    std::uint64_t nz = 0, total = 0;
    for (const Tensor* band : {&lvl.lh, &lvl.hl, &lvl.hh}) {
      total += band->size();
      for (std::size_t i = 0; i < band->size(); ++i)
        if (band->data()[i] != 0.0f) ++nz;
    }
    out.push_back(total == 0 ? 0.0 : static_cast<double>(nz) / static_cast<double>(total));
  }
  return out;
}

}  // namespace wavedepth
