#include "wavedepth/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "wavedepth/decoder.hpp"
#include "wavedepth/error.hpp"
#include "wavedepth/haar.hpp"
#include "wavedepth/io.hpp"
#include "wavedepth/sparsity.hpp"
#include "wavedepth/synthetic.hpp"
#include "wavedepth/threading.hpp"

namespace fs = std::filesystem;

namespace wavedepth::cli {

namespace {

// Removes everything written so far unless the command commits; partial
// outputs must not survive a failed run.
class OutputGuard {
 public:
  ~OutputGuard() {
    if (committed_) return;
    std::error_code ec;
    for (auto it = files_.rbegin(); it != files_.rend(); ++it) fs::remove(*it, ec);
    for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) fs::remove(*it, ec);  // only if empty
  }

  void track_file(const std::string& path) { files_.push_back(path); }
  void track_dir_if_created(const std::string& path) {
    if (!fs::exists(path)) {
      fs::create_directories(path);
      dirs_.push_back(path);
    }
  }
  void commit() { committed_ = true; }

 private:
  std::vector<std::string> files_;
  std::vector<std::string> dirs_;
  bool committed_ = false;
};

std::string fmt(double v) {
  char buf[64];
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.9g", v);
  }
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

// Wide-open evaluation range: sweep scores compare reconstructions against
// the raw input without preset clamping.
EvalConfig sweep_eval_config() {
  EvalConfig cfg;
  cfg.clamp_min = 1e-6;
  cfg.clamp_max = 1e9;
  return cfg;
}

struct SweepPoint {
  std::optional<double> eta;
  std::optional<double> rho;
  double density = 0.0;
  std::vector<double> psi;
  DepthMetrics metrics;      // vs the input depth
  DepthMetrics vs_dense;     // vs the dense reconstruction
  RelativeChange rel;        // vs the dense-reconstruction baseline
};

}  // namespace

void run_analyze(const AnalyzeOptions& opt) {
  if (opt.etas.empty() && opt.rhos.empty())
    fail(Errc::invalid_argument, "analyze needs at least one --eta or --rho");
  if (opt.levels < 1) fail(Errc::invalid_argument, "levels must be >= 1");
  for (double rho : opt.rhos)
    if (!(rho >= 0.0 && rho <= 1.0)) fail(Errc::invalid_argument, "rho must be in [0,1]");
  for (double eta : opt.etas)
    if (!(eta >= 0.0)) fail(Errc::invalid_argument, "eta must be non-negative");

  const Tensor depth = crop_to_dyadic(read_pfm(opt.input), opt.levels);
  const CoefficientPyramid pyr = dwt_pyramid(depth, opt.levels);
  const Tensor dense_recon = idwt_pyramid(pyr);
  const EvalConfig cfg = sweep_eval_config();
  const DepthMetrics baseline = depth_metrics(dense_recon, depth, cfg);

  // Per-level absolute thresholds for the eta points: eta times the range of
  // the band reconstructed through that level, walking coarse to fine.
  std::vector<double> range_per_level(pyr.levels.size());
  {
    Tensor running = pyr.ll;
    for (std::size_t j = 0; j < pyr.levels.size(); ++j) {
      running = idwt_level(running, pyr.levels[j].lh, pyr.levels[j].hl, pyr.levels[j].hh);
      range_per_level[j] = scale_threshold(running, 1.0);
    }
  }

  std::vector<SweepPoint> points(opt.etas.size() + opt.rhos.size());
  parallel_for(0, points.size(), [&](std::size_t i) {
    SweepPoint& p = points[i];
    ThresholdPolicy policy;
    if (i < opt.etas.size()) {
      const double eta = opt.etas[i];
      p.eta = eta;
      std::vector<double> abs(pyr.levels.size());
      for (std::size_t j = 0; j < abs.size(); ++j) abs[j] = eta * range_per_level[j];
      policy = ThresholdPolicy::absolute(std::move(abs));
    } else {
      p.rho = opt.rhos[i - opt.etas.size()];
      policy = ThresholdPolicy::keep_top(*p.rho);
    }
    const CoefficientPyramid thr = threshold_pyramid(pyr, policy);
    const Tensor recon = idwt_pyramid(thr);
    p.psi = per_level_density(thr);
    const std::uint64_t total = detail_count(thr);
    p.density = total == 0 ? 0.0 : static_cast<double>(nonzero_detail_count(thr)) / static_cast<double>(total);
    p.metrics = depth_metrics(recon, depth, cfg);
    p.vs_dense = depth_metrics(recon, dense_recon, cfg);
    p.rel = relative_change(p.metrics, baseline);
  });

  OutputGuard guard;
  guard.track_file(opt.out_csv);
  std::ofstream f(opt.out_csv, std::ios::trunc);
  if (!f) fail(Errc::io, "cannot open " + opt.out_csv + " for writing");

  f << "eta,rho,density";
  for (std::size_t j = 0; j < pyr.levels.size(); ++j) f << ",psi_" << j;
  f << ",abs_rel,sq_rel,rmse,rmse_log,log10,delta1,delta2,delta3"
    << ",abs_rel_vs_dense,rmse_vs_dense,rel_abs_rel,rel_rmse,rel_delta1\n";
  for (const SweepPoint& p : points) {
    f << fmt_opt(p.eta) << "," << fmt_opt(p.rho) << "," << fmt(p.density);
    for (double psi : p.psi) f << "," << fmt(psi);
    const DepthMetrics& m = p.metrics;
    f << "," << fmt(m.abs_rel) << "," << fmt(m.sq_rel) << "," << fmt(m.rmse) << "," << fmt(m.rmse_log)
      << "," << fmt(m.log10) << "," << fmt(m.delta1) << "," << fmt(m.delta2) << "," << fmt(m.delta3);
    f << "," << fmt(p.vs_dense.abs_rel) << "," << fmt(p.vs_dense.rmse);
    f << "," << fmt_opt(p.rel.abs_rel) << "," << fmt_opt(p.rel.rmse) << "," << fmt_opt(p.rel.delta1);
    f << "\n";
  }
  if (!f) fail(Errc::io, "write failed: " + opt.out_csv);
  f.close();
  guard.commit();
}

namespace {

FeaturePyramid load_features_dir(const std::string& dir) {
  FeaturePyramid pyr;
  for (int level = 4; level >= 1; --level) {
    const fs::path path = fs::path(dir) / ("f" + std::to_string(level) + ".wmdt");
    if (!fs::exists(path)) fail(Errc::missing_blob, "missing feature tensor " + path.string());
    pyr.levels.push_back(read_tensor(path.string()));
  }
  return pyr;
}

}  // namespace

void run_decode(const DecodeOptions& opt) {
  FeaturePyramid features;
  if (opt.synth) {
    features = synth_features(opt.synth_seed, opt.height, opt.width, opt.channels);
  } else {
    if (opt.features_dir.empty()) fail(Errc::invalid_argument, "need a features dir or --synth");
    features = load_features_dir(opt.features_dir);
  }

  std::vector<std::size_t> channels;
  for (const Tensor& t : features.levels) channels.push_back(t.channels());
  const LayerStack stack = opt.random_stack ? random_stack(opt.stack_seed, channels)
                                            : load_stack(opt.stack);

  const DecoderRun run = run_decoder(features, stack, opt.eta);

  OutputGuard guard;
  guard.track_dir_if_created(opt.out_dir);
  auto out = [&](const std::string& name) {
    const std::string path = (fs::path(opt.out_dir) / name).string();
    guard.track_file(path);
    return path;
  };

  const char* depth_names[5] = {"depth_1_16.pfm", "depth_1_8.pfm", "depth_1_4.pfm", "depth_1_2.pfm",
                                "depth_full.pfm"};
  for (std::size_t i = 0; i < run.depth.size(); ++i) write_pfm(run.depth[i], out(depth_names[i]));
  for (std::size_t i = 0; i < run.masks.size(); ++i)
    write_mask(run.masks[i], out("mask_scale" + std::to_string(3 - static_cast<int>(i)) + ".pgm"));

  {
    std::ofstream f(out("macs.csv"), std::ios::trunc);
    if (!f) fail(Errc::io, "cannot write macs.csv");
    f << run.macs.to_csv();
  }
  {
    std::ofstream f(out("summary.csv"), std::ios::trunc);
    if (!f) fail(Errc::io, "cannot write summary.csv");
    f << "scale,psi,active,pixels\n";
    for (std::size_t i = 0; i < run.masks.size(); ++i) {
      const SparseMask& m = run.masks[i];
      f << (3 - static_cast<int>(i)) << "," << fmt(run.psi[i]) << "," << m.active_count() << ","
        << m.bits.size() << "\n";
    }
  }
  guard.commit();
}

void run_flops(const FlopsOptions& opt, std::ostream& out) {
  ArchConfig cfg;
  if (!opt.arch.empty()) {
    cfg = load_arch_config(opt.arch);
  } else {
    if (opt.height == 0 || opt.width == 0)
      fail(Errc::invalid_argument, "need --arch or dimensions for the default plan");
    cfg = default_arch_config(opt.height, opt.width);
  }

  MacReport report;
  if (!opt.run_dir.empty()) {
    if (!opt.psi.empty()) fail(Errc::invalid_argument, "--psi and a run dir are mutually exclusive");
    std::vector<SparseMask> masks(4);
    for (int scale = 3; scale >= 0; --scale) {
      const fs::path path = fs::path(opt.run_dir) / ("mask_scale" + std::to_string(scale) + ".pgm");
      if (!fs::exists(path)) fail(Errc::missing_blob, "missing mask " + path.string());
      masks[static_cast<std::size_t>(scale)] = read_mask(path.string());
    }
    report = arch_report_from_masks(cfg, masks);
  } else {
    std::vector<double> psi;
    if (opt.psi.size() == 1) {
      psi.assign(4, opt.psi[0]);
    } else if (opt.psi.size() == 4) {
      psi = opt.psi;
    } else {
      fail(Errc::invalid_argument, "--psi takes one uniform value or four (scales 3..0)");
    }
    report = arch_report(cfg, psi);
  }

  out << report.to_table();
  if (!opt.out_csv.empty()) {
    OutputGuard guard;
    guard.track_file(opt.out_csv);
    std::ofstream f(opt.out_csv, std::ios::trunc);
    if (!f) fail(Errc::io, "cannot open " + opt.out_csv + " for writing");
    f << report.to_csv();
    if (!f) fail(Errc::io, "write failed: " + opt.out_csv);
    f.close();
    guard.commit();
  }
}

void run_eval(const EvalOptions& opt, std::ostream& out) {
  const Tensor pred = read_pfm(opt.pred);
  const Tensor gt = read_pfm(opt.gt);

  EvalConfig cfg;
  if (opt.preset == "nyu") {
    cfg = EvalConfig::nyu();
  } else if (opt.preset == "kitti") {
    cfg = EvalConfig::kitti();
  } else {
    fail(Errc::invalid_argument, "unknown preset '" + opt.preset + "'");
  }
  cfg.crop = opt.crop;
  cfg.median_scaling = opt.median_scaling;

  const DepthMetrics m = depth_metrics(pred, gt, cfg);
  const std::string text = metrics_csv_header(opt.preset) + "\n" + metrics_csv_row(m, opt.preset) + "\n";
  if (opt.out_csv.empty()) {
    out << text;
  } else {
    OutputGuard guard;
    guard.track_file(opt.out_csv);
    std::ofstream f(opt.out_csv, std::ios::trunc);
    if (!f) fail(Errc::io, "cannot open " + opt.out_csv + " for writing");
    f << text;
    if (!f) fail(Errc::io, "write failed: " + opt.out_csv);
    f.close();
    guard.commit();
  }
}

void run_synth(const SynthOptions& opt) {
  const Tensor scene = opt.align > 0
                           ? render_scene(synth_scene_dyadic_spec(opt.seed, opt.height, opt.width, opt.align))
                           : synth_scene(opt.seed, opt.height, opt.width);
  OutputGuard guard;
  guard.track_file(opt.out);
  write_pfm(scene, opt.out);
  guard.commit();
}

}  // namespace wavedepth::cli
