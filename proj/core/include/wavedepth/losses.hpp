#pragma once

#include "wavedepth/sparsity.hpp"
#include "wavedepth/tensor.hpp"

namespace wavedepth {

// Photometric-error configuration: pe = alpha*(1-SSIM)/2 + (1-alpha)*L1 with
// local statistics from a 3x3 mean window.
struct LossConfig {
  double alpha = 0.85;
  double c1 = 0.01 * 0.01;
  double c2 = 0.03 * 0.03;
};

// Per-pixel SSIM between two maps with values in [0,1]. Local means and
// (co)variances use a count-normalized 3x3 window, so borders keep the exact
// closed forms (constant inputs give a constant map). Multi-channel inputs
// average the per-channel SSIM. Output values lie in [-1, 1]; in particular
// ssim_map(x, x) is exactly 1 and the function is bitwise symmetric.
Tensor ssim_map(const Tensor& a, const Tensor& b, const LossConfig& cfg = {});

// alpha*(1-SSIM)/2 + (1-alpha)*|a-b| per pixel (channel-averaged L1).
Tensor photometric_error(const Tensor& a, const Tensor& b, const LossConfig& cfg = {});

// Edge-aware smoothness of a disparity map: forward differences of the
// mean-normalized disparity, weighted by exp(-|image gradient|) with the
// gradient magnitude averaged over image channels, then averaged over the
// (H-1)x(W-1) grid where both differences exist. Invariant under positive
// scaling of the disparity.
double smoothness_loss(const Tensor& disp, const Tensor& image);

enum class WarpDirection : int { right_to_left = +1, left_to_right = -1 };

struct WarpResult {
  Tensor warped;
  SparseMask valid;
};

// Rectified-stereo sampling: warped[y, x] bilinearly samples src at
// (y, x + sign*disparity[y, x]). Samples falling outside the row are marked
// invalid and left at 0; invalidity is data, not an error.
WarpResult warp_stereo(const Tensor& src, const Tensor& disparity, WarpDirection direction);

// Supervised depth objective used by the indoor preset: 0.1 * mean|pred - gt|.
double nyu_depth_loss(const Tensor& pred, const Tensor& gt);

}  // namespace wavedepth
