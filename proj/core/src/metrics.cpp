#include "wavedepth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace wavedepth {

EvalConfig EvalConfig::nyu() {
  EvalConfig cfg;
  cfg.clamp_min = 0.4;
  cfg.clamp_max = 10.0;
  return cfg;
}

EvalConfig EvalConfig::kitti() {
  EvalConfig cfg;
  cfg.clamp_min = 1e-3;
  cfg.clamp_max = 80.0;
  return cfg;
}

DepthMetrics depth_metrics(const Tensor& pred, const Tensor& gt, const EvalConfig& cfg) {
  if (!pred.same_shape(gt)) fail(Errc::dimension_mismatch, "pred/gt shape mismatch");
  if (pred.channels() != 1) fail(Errc::channel_mismatch, "depth metrics expect single-channel maps");
  if (!(cfg.clamp_min < cfg.clamp_max)) fail(Errc::range_inverted, "clamp_min must be below clamp_max");

  std::size_t x0 = 0, y0 = 0, x1 = pred.width(), y1 = pred.height();
  if (cfg.crop) {
    const CropRect& c = *cfg.crop;
    if (c.w == 0 || c.h == 0 || c.x + c.w > pred.width() || c.y + c.h > pred.height())
      fail(Errc::invalid_argument, "crop rectangle outside image");
    x0 = c.x;
    y0 = c.y;
    x1 = c.x + c.w;
    y1 = c.y + c.h;
  }

  std::vector<double> ps, gs;
  for (std::size_t y = y0; y < y1; ++y) {
    for (std::size_t x = x0; x < x1; ++x) {
      const double g = gt.at(y, x);
      if (g > 0.0) {
        ps.push_back(pred.at(y, x));
        gs.push_back(g);
      }
    }
  }
  if (ps.empty()) fail(Errc::no_valid_pixels, "no valid ground-truth pixels");

  if (cfg.median_scaling) {
    auto median = [](std::vector<double> v) {
      const std::size_t mid = v.size() / 2;
      std::nth_element(v.begin(), v.begin() + mid, v.end());
      return v[mid];
    };
    const double mp = median(ps);
    if (mp <= 0.0) fail(Errc::invalid_argument, "median scaling needs positive predictions");
    const double scale = median(gs) / mp;
    for (double& p : ps) p *= scale;
  }

  DepthMetrics m;
  std::size_t n1 = 0, n2 = 0, n3 = 0;
  const double t1 = 1.25, t2 = 1.25 * 1.25, t3 = 1.25 * 1.25 * 1.25;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double p = std::clamp(ps[i], cfg.clamp_min, cfg.clamp_max);
    const double g = std::clamp(gs[i], cfg.clamp_min, cfg.clamp_max);
    const double diff = p - g;
    m.abs_rel += std::fabs(diff) / g;
    m.sq_rel += diff * diff / g;
    m.rmse += diff * diff;
    const double dlog = std::log(p) - std::log(g);
    m.rmse_log += dlog * dlog;
    m.log10 += std::fabs(std::log10(p) - std::log10(g));
    const double ratio = std::max(p / g, g / p);
    if (ratio < t1) ++n1;
    if (ratio < t2) ++n2;
    if (ratio < t3) ++n3;
  }
  const double n = static_cast<double>(ps.size());
  m.abs_rel /= n;
  m.sq_rel /= n;
  m.rmse = std::sqrt(m.rmse / n);
  m.rmse_log = std::sqrt(m.rmse_log / n);
  m.log10 /= n;
  m.delta1 = static_cast<double>(n1) / n;
  m.delta2 = static_cast<double>(n2) / n;
  m.delta3 = static_cast<double>(n3) / n;
  return m;
}

namespace {

std::optional<double> change_of(double m, double baseline) {
  if (m == baseline) return 0.0;
  if (baseline == 0.0) return std::nullopt;
  return 100.0 * (m - baseline) / baseline;
}

}  // namespace

RelativeChange relative_change(const DepthMetrics& m, const DepthMetrics& baseline) {
  RelativeChange rc;
  rc.abs_rel = change_of(m.abs_rel, baseline.abs_rel);
  rc.sq_rel = change_of(m.sq_rel, baseline.sq_rel);
  rc.rmse = change_of(m.rmse, baseline.rmse);
  rc.rmse_log = change_of(m.rmse_log, baseline.rmse_log);
  rc.log10 = change_of(m.log10, baseline.log10);
  rc.delta1 = change_of(m.delta1, baseline.delta1);
  rc.delta2 = change_of(m.delta2, baseline.delta2);
  rc.delta3 = change_of(m.delta3, baseline.delta3);
  return rc;
}

std::optional<double> RelativeChange::max_abs() const {
  std::optional<double> best;
  for (const auto& v : {abs_rel, sq_rel, rmse, rmse_log, log10, delta1, delta2, delta3}) {
    if (!v) continue;
    const double a = std::fabs(*v);
    if (!best || a > *best) best = a;
  }
  return best;
}

std::string metrics_csv_header(const std::string& preset) {
  if (preset == "nyu") return "abs_rel,rmse,log10,delta1,delta2,delta3";
  if (preset == "kitti") return "abs_rel,sq_rel,rmse,rmse_log,delta1,delta2,delta3";
  fail(Errc::invalid_argument, "unknown preset '" + preset + "'");
}

std::string metrics_csv_row(const DepthMetrics& m, const std::string& preset) {
  char buf[256];
  if (preset == "nyu") {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f", m.abs_rel, m.rmse, m.log10, m.delta1,
                  m.delta2, m.delta3);
  } else if (preset == "kitti") {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f", m.abs_rel, m.sq_rel, m.rmse,
                  m.rmse_log, m.delta1, m.delta2, m.delta3);
  } else {
    fail(Errc::invalid_argument, "unknown preset '" + preset + "'");
  }
  return buf;
}

}  // namespace wavedepth
