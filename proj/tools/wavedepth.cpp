#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wavedepth/commands.hpp"
#include "wavedepth/error.hpp"

namespace {

// "HxW" -> (height, width)
std::pair<std::size_t, std::size_t> parse_dims(const std::string& s) {
  const auto sep = s.find('x');
  if (sep == std::string::npos) throw CLI::ValidationError("--dims", "expected HxW");
  try {
    return {std::stoull(s.substr(0, sep)), std::stoull(s.substr(sep + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--dims", "expected HxW");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wavelet-domain depth reconstruction toolkit"};
  app.require_subcommand(1);

  using namespace wavedepth;

  cli::SynthOptions synth;
  std::string synth_dims = "480x640";
  auto* synth_cmd = app.add_subcommand("synth", "Generate a seeded synthetic depth scene (PFM)");
  synth_cmd->add_option("--seed", synth.seed, "RNG seed")->default_val(0);
  synth_cmd->add_option("--dims", synth_dims, "Scene dimensions HxW")->capture_default_str();
  synth_cmd->add_option("--align", synth.align, "Snap rectangles to this grid (exact-arithmetic scenes)");
  synth_cmd->add_option("--out", synth.out, "Output PFM path")->required();

  cli::AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Coefficient-thresholding sweep over a depth map");
  analyze_cmd->add_option("input", analyze.input, "Input depth map (PFM)")->required();
  analyze_cmd->add_option("--levels", analyze.levels, "Pyramid levels")->default_val(4);
  analyze_cmd->add_option("--eta", analyze.etas, "Relative threshold sweep point (repeatable)");
  analyze_cmd->add_option("--rho", analyze.rhos, "Keep-fraction sweep point (repeatable)");
  analyze_cmd->add_option("--out", analyze.out_csv, "Output CSV path")->required();

  cli::DecodeOptions decode;
  std::string decode_dims;
  auto* decode_cmd = app.add_subcommand("decode", "Run the sparse wavelet decoder");
  decode_cmd->add_option("--features", decode.features_dir, "Directory with f4..f1 WMDT tensors");
  decode_cmd->add_flag("--synth", decode.synth, "Use seeded synthetic features");
  decode_cmd->add_option("--seed", decode.synth_seed, "Feature seed for --synth");
  decode_cmd->add_option("--dims", decode_dims, "Output resolution HxW for --synth");
  decode_cmd->add_option("--channels", decode.channels, "Feature channels per scale 3..0");
  decode_cmd->add_option("--stack", decode.stack, "Layer-stack manifest (path or directory)");
  decode_cmd->add_flag("--random-stack", decode.random_stack, "Use a seeded random stack");
  decode_cmd->add_option("--stack-seed", decode.stack_seed, "Seed for --random-stack");
  decode_cmd->add_option("--eta", decode.eta, "Sparsity threshold")->default_val(0.05);
  decode_cmd->add_option("--out", decode.out_dir, "Output directory")->required();

  cli::FlopsOptions flops;
  std::string flops_dims;
  auto* flops_cmd = app.add_subcommand("flops", "Multiply-add cost report");
  flops_cmd->add_option("--arch", flops.arch, "Architecture config JSON");
  flops_cmd->add_option("--dims", flops_dims, "Resolution HxW for the default plan");
  flops_cmd->add_option("--psi", flops.psi, "Sparsity level: one uniform value or four (scales 3..0)");
  flops_cmd->add_option("--run", flops.run_dir, "Decode run directory (measured masks)");
  flops_cmd->add_option("--out", flops.out_csv, "Also write the report CSV here");

  cli::EvalOptions eval;
  std::vector<std::size_t> eval_crop;
  auto* eval_cmd = app.add_subcommand("eval", "Depth metrics for a prediction vs ground truth");
  eval_cmd->add_option("pred", eval.pred, "Predicted depth (PFM)")->required();
  eval_cmd->add_option("gt", eval.gt, "Ground-truth depth (PFM)")->required();
  eval_cmd->add_option("--preset", eval.preset, "kitti | nyu")->default_val("kitti");
  eval_cmd->add_option("--crop", eval_crop, "Crop rectangle x y w h")->expected(4);
  eval_cmd->add_flag("--median-scale", eval.median_scaling, "Median-scale predictions to ground truth");
  eval_cmd->add_option("--out", eval.out_csv, "Write the CSV here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed()) {
      auto [h, w] = parse_dims(synth_dims);
      synth.height = h;
      synth.width = w;
      cli::run_synth(synth);
    } else if (analyze_cmd->parsed()) {
      cli::run_analyze(analyze);
    } else if (decode_cmd->parsed()) {
      if (!decode_dims.empty()) {
        auto [h, w] = parse_dims(decode_dims);
        decode.height = h;
        decode.width = w;
      }
      cli::run_decode(decode);
    } else if (flops_cmd->parsed()) {
      if (!flops_dims.empty()) {
        auto [h, w] = parse_dims(flops_dims);
        flops.height = h;
        flops.width = w;
      }
      cli::run_flops(flops, std::cout);
    } else if (eval_cmd->parsed()) {
      if (!eval_crop.empty())
        eval.crop = wavedepth::CropRect{eval_crop[0], eval_crop[1], eval_crop[2], eval_crop[3]};
      cli::run_eval(eval, std::cout);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
