#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wavedepth/metrics.hpp"

namespace wavedepth::cli {

// Compression sweep over one depth map: analyze -> threshold -> synthesize ->
// score against the input. One CSV row per sweep point, eta points first.
struct AnalyzeOptions {
  std::string input;
  unsigned levels = 4;
  std::vector<double> etas;
  std::vector<double> rhos;
  std::string out_csv;
};
void run_analyze(const AnalyzeOptions& opt);

// One decoder pass; dumps the five depth maps, four masks, per-layer MAC
// ledger and a per-scale sparsity summary into out_dir.
struct DecodeOptions {
  std::string features_dir;           // WMDT blobs f4..f1; empty with synth=true
  bool synth = false;
  std::uint64_t synth_seed = 0;
  std::size_t height = 0, width = 0;  // output resolution for synthetic features
  std::vector<std::size_t> channels = {256, 128, 64, 32};
  std::string stack;                  // manifest path or directory
  bool random_stack = false;
  std::uint64_t stack_seed = 0;
  double eta = 0.05;
  std::string out_dir;
};
void run_decode(const DecodeOptions& opt);

// Cost report for an architecture config against uniform/per-scale sparsity
// levels or the measured masks of a decode run directory.
struct FlopsOptions {
  std::string arch;                   // config path; empty uses the default plan
  std::size_t height = 0, width = 0;  // resolution for the default plan
  std::vector<double> psi;            // 1 value (uniform) or 4 (scales 3..0)
  std::string run_dir;                // read mask_scale{3..0}.pgm instead
  std::string out_csv;
};
void run_flops(const FlopsOptions& opt, std::ostream& out);

// Depth metrics of one prediction/ground-truth pair in the preset's column
// order.
struct EvalOptions {
  std::string pred;
  std::string gt;
  std::string preset = "kitti";  // kitti | nyu
  std::optional<CropRect> crop;
  bool median_scaling = false;
  std::string out_csv;  // stdout when empty
};
void run_eval(const EvalOptions& opt, std::ostream& out);

// Seeded synthetic depth scene written as PFM. align > 0 snaps rectangle
// corners to that grid and quantizes values (the exact-arithmetic variant).
struct SynthOptions {
  std::uint64_t seed = 0;
  std::size_t height = 480;
  std::size_t width = 640;
  std::size_t align = 0;
  std::string out;
};
void run_synth(const SynthOptions& opt);

}  // namespace wavedepth::cli
