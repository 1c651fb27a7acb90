#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wavedepth/haar.hpp"
#include "wavedepth/sparsity.hpp"
#include "wavedepth/tensor.hpp"

namespace wavedepth {

enum class Activation { linear, sigmoid, leaky_relu, elu };

Activation activation_from_name(const std::string& name);
const char* activation_name(Activation a);

// One convolution layer: same-padded (zero border) cross-correlation plus
// bias, then activation. Weights are laid out [c_out][c_in][ky][kx].
struct ConvSpec {
  std::size_t c_in = 0;
  std::size_t c_out = 0;
  std::size_t k = 3;  // odd
  std::vector<float> weights;
  std::vector<float> bias;
  Activation activation = Activation::linear;
  float leaky_slope = 0.1f;

  float weight(std::size_t oc, std::size_t ic, std::size_t ky, std::size_t kx) const {
    return weights[((oc * c_in + ic) * k + ky) * k + kx];
  }
  void validate() const;
};

struct SparseConvResult {
  Tensor output;
  std::uint64_t macs = 0;  // active_pixels * (c_in*k^2 + 1) * c_out
};

Tensor conv2d_dense(const Tensor& x, const ConvSpec& spec);

// Evaluates only mask-active pixels, with the same per-pixel accumulation
// order as conv2d_dense, so active outputs match the dense result bitwise.
// Inactive pixels are exactly 0 and never see the activation: in the decoder
// they stand for absent wavelet coefficients, and zero is the IDWT-neutral
// value for those.
SparseConvResult conv2d_sparse(const Tensor& x, const ConvSpec& spec, const SparseMask& mask);

// Two published head layouts. Each branch is a pointwise conv followed by a
// spatial conv; the two-sigmoid kind subtracts the sigmoid outputs of a plus
// and a minus branch, which keeps coefficients strictly inside (-1, 1). The
// linear kind runs the plus branch alone, unbounded.
struct WaveHeadSpec {
  enum class Kind { two_sigmoid_difference, linear };
  Kind kind = Kind::two_sigmoid_difference;
  ConvSpec plus_point;   // 1x1
  ConvSpec plus_spatial; // 3x3, 3 output channels
  ConvSpec minus_point;
  ConvSpec minus_spatial;

  void validate() const;
};

struct WaveHeadResult {
  WaveletLevel level;
  // Per-conv MAC counts in evaluation order: plus point, plus spatial,
  // then minus point, minus spatial for the two-sigmoid kind.
  std::vector<std::uint64_t> layer_macs;
  std::vector<std::uint64_t> layer_active;  // pixels evaluated per conv
};

// Predicts one {lh, hl, hh} triple at mask-active pixels; inactive pixels
// are exactly 0. The pointwise stage runs on the mask dilated to the spatial
// conv's receptive field so active outputs equal a dense evaluation bitwise.
WaveHeadResult wave_head(const Tensor& features, const WaveHeadSpec& spec, const SparseMask& mask);

}  // namespace wavedepth
