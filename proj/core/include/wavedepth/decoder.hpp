#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wavedepth/conv.hpp"
#include "wavedepth/flops.hpp"
#include "wavedepth/haar.hpp"
#include "wavedepth/sparsity.hpp"
#include "wavedepth/tensor.hpp"

namespace wavedepth {

// Feature maps coarsest first: levels[0] feeds the scale-3 head at 1/16 of
// the output resolution, levels[3] the scale-0 head at 1/2. Each level
// doubles the spatial dims of the previous one.
struct FeaturePyramid {
  std::vector<Tensor> levels;
};

// Everything the decoder executes: the disparity head chain producing the
// coarse low-pass estimate (final activation sigmoid, remapped to
// [d_min, d_max]) and one wavelet head per scale, index 0 = scale 3.
struct LayerStack {
  std::vector<ConvSpec> disp_head;
  std::array<WaveHeadSpec, 4> wave_heads;
  double d_min = 0.01;
  double d_max = 10.0;

  void validate() const;
};

// Output of one decode: five depth maps from 1/16 up to full resolution,
// the four masks actually applied (scale 3 is the all-ones initialization),
// their sparsity levels, the predicted coefficient triples, and the
// multiply-add ledger of every executed convolution.
struct DecoderRun {
  std::vector<Tensor> depth;         // [0] 1/16 ... [4] full resolution
  std::vector<SparseMask> masks;     // used at scales 3,2,1,0
  std::vector<double> psi;           // sparsity of each used mask
  std::vector<WaveletLevel> coeffs;  // predicted per scale 3..0
  MacReport macs;
};

// Coarse-to-fine loop: predict the coarse disparity densely, then per scale
// predict {lh, hl, hh} at mask-active pixels, synthesize the next band via
// the inverse transform, derive the threshold eta_s = eta * (max - min) of
// that band and the next mask from the coefficients just predicted.
// force_dense keeps every mask all-ones (the dense baseline).
DecoderRun run_decoder(const FeaturePyramid& features, const LayerStack& stack, double eta,
                       bool force_dense = false);

// Affine remap d_min + raw*(d_max - d_min); rejects inverted ranges.
Tensor sigmoid_to_disparity(const Tensor& raw, double d_min, double d_max);

// Stack persistence: a JSON manifest naming per-conv weight/bias WMDT blobs
// (weights stored [c_out, c_in*k*k], bias [1, c_out]) next to it.
void save_stack(const LayerStack& stack, const std::string& dir);
LayerStack load_stack(const std::string& manifest_or_dir);

// Seeded stack with uniform weights in +-1/sqrt(fan_in); channel counts are
// the head input widths for scales 3..0.
LayerStack random_stack(std::uint64_t seed, const std::vector<std::size_t>& channels,
                        WaveHeadSpec::Kind kind = WaveHeadSpec::Kind::two_sigmoid_difference,
                        double d_min = 0.01, double d_max = 10.0);

// Seeded feature pyramid for harness runs, SplitMix64 uniform values in
// [-1,1]; full_h/full_w are the output resolution (divisible by 16).
FeaturePyramid synth_features(std::uint64_t seed, std::size_t full_h, std::size_t full_w,
                              const std::vector<std::size_t>& channels = {256, 128, 64, 32});

// Cost-model rows matching run_decoder's executed layers one-to-one, so
// arch_report_from_masks over a run's masks reproduces its MacReport.
ArchConfig executed_arch_config(const LayerStack& stack, std::size_t full_h, std::size_t full_w);

}  // namespace wavedepth
