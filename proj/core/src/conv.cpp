#include "wavedepth/conv.hpp"

#include <cmath>
#include <cstring>

#include "wavedepth/flops.hpp"
#include "wavedepth/threading.hpp"

namespace wavedepth {

Activation activation_from_name(const std::string& name) {
  if (name == "linear") return Activation::linear;
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "leaky_relu") return Activation::leaky_relu;
  if (name == "elu") return Activation::elu;
  fail(Errc::invalid_argument, "unknown activation '" + name + "'");
}

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::linear: return "linear";
    case Activation::sigmoid: return "sigmoid";
    case Activation::leaky_relu: return "leaky_relu";
    case Activation::elu: return "elu";
  }
  return "linear";
}

void ConvSpec::validate() const {
  if (c_in == 0 || c_out == 0) fail(Errc::invalid_argument, "conv needs nonzero channel counts");
  if (k == 0 || k % 2 == 0) fail(Errc::invalid_argument, "kernel size must be odd");
  if (weights.size() != c_out * c_in * k * k)
    fail(Errc::shape_mismatch, "weight count does not match c_out*c_in*k^2");
  if (bias.size() != c_out) fail(Errc::shape_mismatch, "bias count does not match c_out");
}

namespace {

inline float apply_activation(const ConvSpec& spec, double pre) {
  switch (spec.activation) {
    case Activation::linear:
      return static_cast<float>(pre);
    case Activation::sigmoid:
      return static_cast<float>(1.0 / (1.0 + std::exp(-pre)));
    case Activation::leaky_relu:
      return static_cast<float>(pre >= 0.0 ? pre : pre * static_cast<double>(spec.leaky_slope));
    case Activation::elu:
      return static_cast<float>(pre >= 0.0 ? pre : std::expm1(pre));
  }
  return static_cast<float>(pre);
}

// Single-pixel kernel shared by the dense and sparse paths; the fixed
// accumulation order (bias, then ic-major, ky, kx) is what makes them agree
// bitwise at active pixels.
inline void conv_at_pixel(const Tensor& x, const ConvSpec& spec, std::size_t y, std::size_t px,
                          Tensor& out) {
  const std::ptrdiff_t h = static_cast<std::ptrdiff_t>(x.height());
  const std::ptrdiff_t w = static_cast<std::ptrdiff_t>(x.width());
  const std::ptrdiff_t r = static_cast<std::ptrdiff_t>(spec.k / 2);
  for (std::size_t oc = 0; oc < spec.c_out; ++oc) {
    double acc = static_cast<double>(spec.bias[oc]);
    for (std::size_t ic = 0; ic < spec.c_in; ++ic) {
      for (std::size_t ky = 0; ky < spec.k; ++ky) {
        const std::ptrdiff_t yy = static_cast<std::ptrdiff_t>(y) + static_cast<std::ptrdiff_t>(ky) - r;
        if (yy < 0 || yy >= h) continue;  // zero padding contributes nothing
        for (std::size_t kx = 0; kx < spec.k; ++kx) {
          const std::ptrdiff_t xx = static_cast<std::ptrdiff_t>(px) + static_cast<std::ptrdiff_t>(kx) - r;
          if (xx < 0 || xx >= w) continue;
          acc += static_cast<double>(spec.weight(oc, ic, ky, kx)) *
                 static_cast<double>(x.at(static_cast<std::size_t>(yy), static_cast<std::size_t>(xx), ic));
        }
      }
    }
    out.at(y, px, oc) = apply_activation(spec, acc);
  }
}

}  // namespace

Tensor conv2d_dense(const Tensor& x, const ConvSpec& spec) {
  spec.validate();
  if (x.channels() != spec.c_in) fail(Errc::channel_mismatch, "input channels do not match c_in");

  Tensor out(x.height(), x.width(), spec.c_out);
  parallel_for(0, x.height(), [&](std::size_t y) {
    for (std::size_t px = 0; px < x.width(); ++px) conv_at_pixel(x, spec, y, px, out);
  });
  return out;
}

SparseConvResult conv2d_sparse(const Tensor& x, const ConvSpec& spec, const SparseMask& mask) {
  spec.validate();
  if (x.channels() != spec.c_in) fail(Errc::channel_mismatch, "input channels do not match c_in");
  if (mask.height != x.height() || mask.width != x.width())
    fail(Errc::dimension_mismatch, "mask dimensions do not match input");

  SparseConvResult res;
  res.output = Tensor(x.height(), x.width(), spec.c_out);
  parallel_for(0, x.height(), [&](std::size_t y) {
    for (std::size_t px = 0; px < x.width(); ++px)
      if (mask.at(y, px)) conv_at_pixel(x, spec, y, px, res.output);
  });
  res.macs = mac_sparse_count(spec.c_in, spec.c_out, spec.k, mask.active_count());
  return res;
}

void WaveHeadSpec::validate() const {
  plus_point.validate();
  plus_spatial.validate();
  if (plus_point.k != 1) fail(Errc::shape_mismatch, "head pointwise conv must be 1x1");
  if (plus_spatial.c_in != plus_point.c_out)
    fail(Errc::shape_mismatch, "head branch channel chain broken");
  if (plus_spatial.c_out != 3) fail(Errc::shape_mismatch, "head must output 3 channels (lh, hl, hh)");
  if (kind == Kind::two_sigmoid_difference) {
    minus_point.validate();
    minus_spatial.validate();
    if (minus_point.k != 1 || minus_spatial.c_out != 3 || minus_spatial.c_in != minus_point.c_out)
      fail(Errc::shape_mismatch, "minus branch malformed");
    if (minus_point.c_in != plus_point.c_in)
      fail(Errc::shape_mismatch, "branch input channels disagree");
    if (plus_spatial.activation != Activation::sigmoid || minus_spatial.activation != Activation::sigmoid)
      fail(Errc::invalid_argument, "two-sigmoid head requires sigmoid spatial convs");
  }
}

namespace {

struct BranchEval {
  Tensor out;
  std::uint64_t point_macs = 0, point_active = 0;
  std::uint64_t spatial_macs = 0, spatial_active = 0;
};

BranchEval eval_branch(const Tensor& features, const ConvSpec& point, const ConvSpec& spatial,
                       const SparseMask& mask, const SparseMask& dilated) {
  BranchEval ev;
  SparseConvResult mid = conv2d_sparse(features, point, dilated);
  ev.point_macs = mid.macs;
  ev.point_active = dilated.active_count();
  SparseConvResult fin = conv2d_sparse(mid.output, spatial, mask);
  ev.spatial_macs = fin.macs;
  ev.spatial_active = mask.active_count();
  ev.out = std::move(fin.output);
  return ev;
}

}  // namespace

WaveHeadResult wave_head(const Tensor& features, const WaveHeadSpec& spec, const SparseMask& mask) {
  spec.validate();
  if (features.channels() != spec.plus_point.c_in)
    fail(Errc::channel_mismatch, "feature channels do not match head input");
  if (mask.height != features.height() || mask.width != features.width())
    fail(Errc::dimension_mismatch, "mask dimensions do not match features");

  const unsigned reach = static_cast<unsigned>(spec.plus_spatial.k / 2);
  const SparseMask dilated = reach == 0 ? mask : dilate_mask(mask, reach);

  WaveHeadResult res;
  BranchEval plus = eval_branch(features, spec.plus_point, spec.plus_spatial, mask, dilated);
  res.layer_macs = {plus.point_macs, plus.spatial_macs};
  res.layer_active = {plus.point_active, plus.spatial_active};

  Tensor coeffs;
  if (spec.kind == WaveHeadSpec::Kind::linear) {
    coeffs = std::move(plus.out);
  } else {
    BranchEval minus = eval_branch(features, spec.minus_point, spec.minus_spatial, mask, dilated);
    res.layer_macs.push_back(minus.point_macs);
    res.layer_macs.push_back(minus.spatial_macs);
    res.layer_active.push_back(minus.point_active);
    res.layer_active.push_back(minus.spatial_active);

    coeffs = Tensor(features.height(), features.width(), 3);
    for (std::size_t y = 0; y < coeffs.height(); ++y) {
      for (std::size_t x = 0; x < coeffs.width(); ++x) {
        if (!mask.at(y, x)) continue;  // both branches are 0 there anyway
        for (std::size_t c = 0; c < 3; ++c) {
          float v = plus.out.at(y, x, c) - minus.out.at(y, x, c);
          // float rounding can saturate a sigmoid at exactly 1; nudge back
          // inside the documented open interval
          if (v >= 1.0f) v = std::nextafterf(1.0f, 0.0f);
          if (v <= -1.0f) v = std::nextafterf(-1.0f, 0.0f);
          coeffs.at(y, x, c) = v;
        }
      }
    }
  }

  WaveletLevel lvl{Tensor(coeffs.height(), coeffs.width(), 1), Tensor(coeffs.height(), coeffs.width(), 1),
                   Tensor(coeffs.height(), coeffs.width(), 1)};
  for (std::size_t y = 0; y < coeffs.height(); ++y) {
    for (std::size_t x = 0; x < coeffs.width(); ++x) {
      lvl.lh.at(y, x) = coeffs.at(y, x, 0);
      lvl.hl.at(y, x) = coeffs.at(y, x, 1);
      lvl.hh.at(y, x) = coeffs.at(y, x, 2);
    }
  }
  res.level = std::move(lvl);
  return res;
}

}  // namespace wavedepth
