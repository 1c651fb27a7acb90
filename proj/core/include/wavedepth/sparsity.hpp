#pragma once

#include <cstdint>
#include <vector>

#include "wavedepth/haar.hpp"
#include "wavedepth/tensor.hpp"

namespace wavedepth {

// Per-pixel activity grid. Gates convolution work in the decoder; dimensions
// always match the spatial dims of the tensor being gated.
struct SparseMask {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> bits;  // 1 = active

  SparseMask() = default;
  SparseMask(std::size_t h, std::size_t w, bool active = false)
      : height(h), width(w), bits(h * w, active ? 1 : 0) {}

  bool at(std::size_t y, std::size_t x) const { return bits[y * width + x] != 0; }
  void set(std::size_t y, std::size_t x, bool v) { bits[y * width + x] = v ? 1 : 0; }

  std::uint64_t active_count() const {
    std::uint64_t n = 0;
    for (auto b : bits) n += b;
    return n;
  }
};

SparseMask all_ones_mask(std::size_t h, std::size_t w);

// Grow the active set by a square structuring element of the given radius
// (radius 1 = 3x3). Used to pre-activate the support a following spatial
// convolution will read.
SparseMask dilate_mask(const SparseMask& m, unsigned radius);

// Per-scale absolute threshold: eta times the dynamic range (max - min) of
// the low-pass band; zero for a constant band. Computed in double.
double scale_threshold(const Tensor& ll, double eta);

// Coarse pixel is active iff max(|lh|,|hl|,|hh|) strictly exceeds eta_s; the
// result is nearest-neighbor upsampled x2, so each active coarse pixel
// activates a 2x2 block.
SparseMask get_sparse_mask(const WaveletLevel& level, double eta_s);

// Fraction of active pixels, in [0,1].
double sparsity_level(const SparseMask& mask);

// Coefficient thresholding policy for compression sweeps. Exactly one mode:
//  - absolute: per-level thresholds; detail coefficient survives iff
//    |c| > threshold for its level (strict, so exact zeros always drop);
//  - keep_top_fraction: rank all detail coefficients jointly by absolute
//    value and keep round(rho * N); ties keep earlier entries in
//    (level, band lh/hl/hh, row-major) enumeration order.
struct ThresholdPolicy {
  enum class Mode { absolute, keep_top_fraction };
  Mode mode = Mode::absolute;
  std::vector<double> per_level;  // absolute mode, one per pyramid level
  double rho = 1.0;               // keep_top_fraction mode

  static ThresholdPolicy absolute(std::vector<double> thresholds);
  static ThresholdPolicy keep_top(double rho);
};

// Returns a pyramid whose failing detail coefficients are exactly 0; the
// low-pass band is never touched.
CoefficientPyramid threshold_pyramid(const CoefficientPyramid& pyr, const ThresholdPolicy& policy);

// Detail coefficient counts over the whole pyramid.
std::uint64_t detail_count(const CoefficientPyramid& pyr);
std::uint64_t nonzero_detail_count(const CoefficientPyramid& pyr);

// Surviving (nonzero) detail fraction per level, coarsest first.
std::vector<double> per_level_density(const CoefficientPyramid& pyr);

}  // namespace wavedepth
