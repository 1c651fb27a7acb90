#include "wavedepth/losses.hpp"

#include <cmath>

namespace wavedepth {

namespace {

// Count-normalized 3x3 window means of v and v*v (and cross terms), computed
// per channel in double.
struct LocalStats {
  double mu_a, mu_b, e_aa, e_bb, e_ab;
};

LocalStats window_stats(const Tensor& a, const Tensor& b, std::size_t y, std::size_t x, std::size_t c) {
  double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
  int count = 0;
  for (int dy = -1; dy <= 1; ++dy) {
    const std::ptrdiff_t yy = static_cast<std::ptrdiff_t>(y) + dy;
    if (yy < 0 || yy >= static_cast<std::ptrdiff_t>(a.height())) continue;
    for (int dx = -1; dx <= 1; ++dx) {
      const std::ptrdiff_t xx = static_cast<std::ptrdiff_t>(x) + dx;
      if (xx < 0 || xx >= static_cast<std::ptrdiff_t>(a.width())) continue;
      const double va = a.at(static_cast<std::size_t>(yy), static_cast<std::size_t>(xx), c);
      const double vb = b.at(static_cast<std::size_t>(yy), static_cast<std::size_t>(xx), c);
      sa += va;
      sb += vb;
      saa += va * va;
      sbb += vb * vb;
      sab += va * vb;
      ++count;
    }
  }
  const double inv = 1.0 / count;
  return LocalStats{sa * inv, sb * inv, saa * inv, sbb * inv, sab * inv};
}

}  // namespace

Tensor ssim_map(const Tensor& a, const Tensor& b, const LossConfig& cfg) {
  if (!a.same_shape(b)) fail(Errc::dimension_mismatch, "ssim_map shape mismatch");

  Tensor out(a.height(), a.width(), 1);
  for (std::size_t y = 0; y < a.height(); ++y) {
    for (std::size_t x = 0; x < a.width(); ++x) {
      double acc = 0.0;
      for (std::size_t c = 0; c < a.channels(); ++c) {
        const LocalStats s = window_stats(a, b, y, x, c);
        const double var_a = s.e_aa - s.mu_a * s.mu_a;
        const double var_b = s.e_bb - s.mu_b * s.mu_b;
        const double cov = s.e_ab - s.mu_a * s.mu_b;
        const double num = (2.0 * s.mu_a * s.mu_b + cfg.c1) * (2.0 * cov + cfg.c2);
        const double den = (s.mu_a * s.mu_a + s.mu_b * s.mu_b + cfg.c1) * (var_a + var_b + cfg.c2);
        acc += num / den;
      }
      out.at(y, x) = static_cast<float>(acc / static_cast<double>(a.channels()));
    }
  }
  return out;
}

Tensor photometric_error(const Tensor& a, const Tensor& b, const LossConfig& cfg) {
  if (!a.same_shape(b)) fail(Errc::dimension_mismatch, "photometric_error shape mismatch");
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) fail(Errc::invalid_argument, "alpha must be in [0,1]");

  const Tensor ssim = ssim_map(a, b, cfg);
  Tensor out(a.height(), a.width(), 1);
  for (std::size_t y = 0; y < a.height(); ++y) {
    for (std::size_t x = 0; x < a.width(); ++x) {
      double l1 = 0.0;
      for (std::size_t c = 0; c < a.channels(); ++c)
        l1 += std::fabs(static_cast<double>(a.at(y, x, c)) - static_cast<double>(b.at(y, x, c)));
      l1 /= static_cast<double>(a.channels());
      const double s = ssim.at(y, x);
      out.at(y, x) = static_cast<float>(cfg.alpha * (1.0 - s) * 0.5 + (1.0 - cfg.alpha) * l1);
    }
  }
  return out;
}

double smoothness_loss(const Tensor& disp, const Tensor& image) {
  if (disp.height() != image.height() || disp.width() != image.width())
    fail(Errc::dimension_mismatch, "disparity/image dims disagree");
  if (disp.channels() != 1) fail(Errc::channel_mismatch, "disparity must be single-channel");
  if (disp.height() < 2 || disp.width() < 2) fail(Errc::too_small, "need at least 2x2 for gradients");

  const double mean = tensor_mean(disp);
  if (!(mean > 0.0)) fail(Errc::zero_mean_disparity, "disparity mean must be positive");
  const double inv_mean = 1.0 / mean;

  auto image_grad_x = [&](std::size_t y, std::size_t x) {
    double g = 0.0;
    for (std::size_t c = 0; c < image.channels(); ++c)
      g += std::fabs(static_cast<double>(image.at(y, x + 1, c)) - static_cast<double>(image.at(y, x, c)));
    return g / static_cast<double>(image.channels());
  };
  auto image_grad_y = [&](std::size_t y, std::size_t x) {
    double g = 0.0;
    for (std::size_t c = 0; c < image.channels(); ++c)
      g += std::fabs(static_cast<double>(image.at(y + 1, x, c)) - static_cast<double>(image.at(y, x, c)));
    return g / static_cast<double>(image.channels());
  };

  double acc = 0.0;
  for (std::size_t y = 0; y + 1 < disp.height(); ++y) {
    for (std::size_t x = 0; x + 1 < disp.width(); ++x) {
      const double d = disp.at(y, x) * inv_mean;
      const double dx = std::fabs(disp.at(y, x + 1) * inv_mean - d);
      const double dy = std::fabs(disp.at(y + 1, x) * inv_mean - d);
      acc += dx * std::exp(-image_grad_x(y, x)) + dy * std::exp(-image_grad_y(y, x));
    }
  }
  const double count = static_cast<double>((disp.height() - 1) * (disp.width() - 1));
  return acc / count;
}

WarpResult warp_stereo(const Tensor& src, const Tensor& disparity, WarpDirection direction) {
  if (src.height() != disparity.height() || src.width() != disparity.width())
    fail(Errc::dimension_mismatch, "source/disparity dims disagree");
  if (disparity.channels() != 1) fail(Errc::channel_mismatch, "disparity must be single-channel");

  const double sign = static_cast<double>(static_cast<int>(direction));
  WarpResult res{Tensor(src.height(), src.width(), src.channels()), SparseMask(src.height(), src.width())};
  const double last = static_cast<double>(src.width() - 1);

  for (std::size_t y = 0; y < src.height(); ++y) {
    for (std::size_t x = 0; x < src.width(); ++x) {
      const double xs = static_cast<double>(x) + sign * static_cast<double>(disparity.at(y, x));
      if (!(xs >= 0.0 && xs <= last)) continue;  // outside the row: invalid
      const double fx = std::floor(xs);
      const std::size_t x0 = static_cast<std::size_t>(fx);
      const double t = xs - fx;
      res.valid.set(y, x, true);
      for (std::size_t c = 0; c < src.channels(); ++c) {
        // t == 0 keeps the sample exact, including at the last column
        const float v0 = src.at(y, x0, c);
        const float v = t == 0.0 ? v0
                                 : static_cast<float>((1.0 - t) * static_cast<double>(v0) +
                                                      t * static_cast<double>(src.at(y, x0 + 1, c)));
        res.warped.at(y, x, c) = v;
      }
    }
  }
  return res;
}

double nyu_depth_loss(const Tensor& pred, const Tensor& gt) {
  if (!pred.same_shape(gt)) fail(Errc::dimension_mismatch, "pred/gt shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    acc += std::fabs(static_cast<double>(pred.data()[i]) - static_cast<double>(gt.data()[i]));
  return 0.1 * acc / static_cast<double>(pred.size());
}

}  // namespace wavedepth
