#pragma once

#include <optional>
#include <string>

#include "wavedepth/tensor.hpp"

namespace wavedepth {

// The standard single-image depth scores. rmse is in meters; everything else
// is unitless. delta1 <= delta2 <= delta3 by construction.
struct DepthMetrics {
  double abs_rel = 0.0;
  double sq_rel = 0.0;
  double rmse = 0.0;
  double rmse_log = 0.0;
  double log10 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
};

struct CropRect {
  std::size_t x = 0, y = 0, w = 0, h = 0;
};

struct EvalConfig {
  double clamp_min = 1e-3;
  double clamp_max = 80.0;
  std::optional<CropRect> crop;
  bool median_scaling = false;

  // Clamp ranges follow the two evaluation conventions this suite targets:
  // indoor 0.4..10 m, driving 1e-3..80 m.
  static EvalConfig nyu();
  static EvalConfig kitti();
};

// Scores pred against gt over pixels where gt > 0 (inside the crop when one
// is set). Median scaling, when enabled, rescales pred by median(gt)/median(pred)
// before both maps are clamped. Throws when no pixel is valid.
DepthMetrics depth_metrics(const Tensor& pred, const Tensor& gt, const EvalConfig& cfg);

// Per-metric signed percentage change, 100*(m - baseline)/baseline. A metric
// with no change reports 0 even at a zero baseline; a changed metric over a
// zero baseline is undefined and left empty.
struct RelativeChange {
  std::optional<double> abs_rel, sq_rel, rmse, rmse_log, log10, delta1, delta2, delta3;

  // Largest absolute defined change, if any metric is defined.
  std::optional<double> max_abs() const;
};

RelativeChange relative_change(const DepthMetrics& m, const DepthMetrics& baseline);

// One CSV row in the published column order per preset: kitti =
// abs_rel,sq_rel,rmse,rmse_log,delta1,delta2,delta3; nyu =
// abs_rel,rmse,log10,delta1,delta2,delta3.
std::string metrics_csv_header(const std::string& preset);
std::string metrics_csv_row(const DepthMetrics& m, const std::string& preset);

}  // namespace wavedepth
