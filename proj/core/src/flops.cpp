#include "wavedepth/flops.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wavedepth/error.hpp"

using nlohmann::json;

namespace wavedepth {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 wide = static_cast<unsigned __int128>(a) * b;
  if (wide > std::numeric_limits<std::uint64_t>::max())
    fail(Errc::overflow, "MAC count exceeds 64 bits");
  return static_cast<std::uint64_t>(wide);
}

std::uint64_t unit_macs(std::size_t c_in, std::size_t c_out, std::size_t k) {
  return checked_mul(checked_mul(static_cast<std::uint64_t>(c_in), static_cast<std::uint64_t>(k) * k) + 1,
                     static_cast<std::uint64_t>(c_out));
}

}  // namespace

std::uint64_t mac_dense(std::size_t c_in, std::size_t c_out, std::size_t k, std::size_t h, std::size_t w) {
  return checked_mul(checked_mul(static_cast<std::uint64_t>(h), static_cast<std::uint64_t>(w)),
                     unit_macs(c_in, c_out, k));
}

std::uint64_t mac_sparse(std::size_t c_in, std::size_t c_out, std::size_t k, std::size_t h, std::size_t w,
                         double psi) {
  if (!(psi >= 0.0 && psi <= 1.0)) fail(Errc::invalid_argument, "sparsity level must be in [0,1]");
  const double pixels = static_cast<double>(h) * static_cast<double>(w);
  const auto active = static_cast<std::uint64_t>(std::llround(psi * pixels));
  return mac_sparse_count(c_in, c_out, k, active);
}

std::uint64_t mac_sparse_count(std::size_t c_in, std::size_t c_out, std::size_t k, std::uint64_t active_pixels) {
  return checked_mul(active_pixels, unit_macs(c_in, c_out, k));
}

ArchConfig load_arch_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(Errc::io, "cannot open " + path);
  json j = json::parse(f, nullptr, false);
  if (j.is_discarded() || !j.contains("layers") || !j["layers"].is_array())
    fail(Errc::malformed_header, "malformed arch config " + path);

  ArchConfig cfg;
  for (const json& row : j["layers"]) {
    ArchLayer l;
    l.name = row.at("name").get<std::string>();
    l.h = row.at("h").get<std::size_t>();
    l.w = row.at("w").get<std::size_t>();
    l.c_in = row.at("c_in").get<std::size_t>();
    l.c_out = row.at("c_out").get<std::size_t>();
    l.k = row.value("k", std::size_t{3});
    l.maskable = row.value("maskable", false);
    l.scale = row.value("scale", -1);
    l.dilation = row.value("dilation", 0u);
    if (l.h == 0 || l.w == 0 || l.c_in == 0 || l.c_out == 0 || l.k == 0)
      fail(Errc::malformed_header, "arch layer '" + l.name + "' has zero dims");
    if (l.maskable && (l.scale < 0 || l.scale > 3))
      fail(Errc::malformed_header, "maskable layer '" + l.name + "' needs scale 0..3");
    cfg.layers.push_back(std::move(l));
  }
  if (cfg.layers.empty()) fail(Errc::malformed_header, "arch config lists no layers");
  return cfg;
}

void save_arch_config(const ArchConfig& cfg, const std::string& path) {
  json rows = json::array();
  for (const ArchLayer& l : cfg.layers) {
    rows.push_back({{"name", l.name},
                    {"h", l.h},
                    {"w", l.w},
                    {"c_in", l.c_in},
                    {"c_out", l.c_out},
                    {"k", l.k},
                    {"maskable", l.maskable},
                    {"scale", l.scale},
                    {"dilation", l.dilation}});
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) fail(Errc::io, "cannot open " + path + " for writing");
  f << json{{"layers", rows}}.dump(2) << "\n";
}

ArchConfig default_arch_config(std::size_t h, std::size_t w) {
  if (h % 32 != 0 || w % 32 != 0)
    fail(Errc::invalid_argument, "default arch config needs dims divisible by 32");

  // Merge-layer widths follow a ResNet18-style encoder: skip channels
  // [64, 64, 128, 256, 512] from fine to coarse.
  ArchConfig cfg;
  auto add = [&](const std::string& name, std::size_t div, std::size_t c_in, std::size_t c_out,
                 std::size_t k, bool maskable, int scale) {
    cfg.layers.push_back(ArchLayer{name, h / div, w / div, c_in, c_out, k, maskable, scale, 0});
  };

  add("upconv5", 32, 512, 256, 3, false, -1);
  add("iconv4", 16, 256 + 256, 256, 3, true, 3);
  add("disp4_point", 16, 256, 64, 1, false, -1);  // DensePredict stage
  add("disp4_spatial", 16, 64, 1, 3, false, -1);
  for (const char* b : {"plus", "minus"}) {
    add(std::string("wave4_") + b + "_point", 16, 256, 256, 1, true, 3);
    add(std::string("wave4_") + b + "_spatial", 16, 256, 3, 3, true, 3);
  }
  add("upconv4", 16, 256, 128, 3, true, 3);

  add("iconv3", 8, 128 + 128, 128, 3, true, 2);
  for (const char* b : {"plus", "minus"}) {
    add(std::string("wave3_") + b + "_point", 8, 128, 128, 1, true, 2);
    add(std::string("wave3_") + b + "_spatial", 8, 128, 3, 3, true, 2);
  }
  add("upconv3", 8, 128, 64, 3, true, 2);

  add("iconv2", 4, 64 + 64, 64, 3, true, 1);
  for (const char* b : {"plus", "minus"}) {
    add(std::string("wave2_") + b + "_point", 4, 64, 64, 1, true, 1);
    add(std::string("wave2_") + b + "_spatial", 4, 64, 3, 3, true, 1);
  }
  add("upconv2", 4, 64, 32, 3, true, 1);

  add("iconv1", 2, 32 + 64, 32, 3, true, 0);
  for (const char* b : {"plus", "minus"}) {
    add(std::string("wave1_") + b + "_point", 2, 32, 32, 1, true, 0);
    add(std::string("wave1_") + b + "_spatial", 2, 32, 3, 3, true, 0);
  }
  return cfg;
}

std::uint64_t MacReport::total_dense() const {
  std::uint64_t total = 0;
  for (const MacEntry& e : layers) {
    const unsigned __int128 wide = static_cast<unsigned __int128>(total) + e.mac_dense;
    if (wide > std::numeric_limits<std::uint64_t>::max()) fail(Errc::overflow, "dense total overflow");
    total = static_cast<std::uint64_t>(wide);
  }
  return total;
}

double MacReport::total_sparse() const {
  double total = 0.0;
  for (const MacEntry& e : layers) total += e.mac_sparse;
  return total;
}

double MacReport::ratio() const {
  const std::uint64_t dense = total_dense();
  if (dense == 0) return 1.0;
  return total_sparse() / static_cast<double>(dense);
}

namespace {

std::string fmt_macs(double v) {
  char buf[64];
  if (v == std::floor(v) && std::fabs(v) < 9e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.9g", v);
  }
  return buf;
}

}  // namespace

std::string MacReport::to_csv() const {
  std::ostringstream os;
  os << "name,scale,h,w,c_in,c_out,k,maskable,active,psi,mac_dense,mac_sparse\n";
  char buf[512];
  for (const MacEntry& e : layers) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%zu,%zu,%zu,%zu,%zu,%d,%llu,%.9g,%llu,%s\n", e.name.c_str(),
                  e.scale, e.h, e.w, e.c_in, e.c_out, e.k, e.maskable ? 1 : 0,
                  static_cast<unsigned long long>(e.active), e.psi,
                  static_cast<unsigned long long>(e.mac_dense), fmt_macs(e.mac_sparse).c_str());
    os << buf;
  }
  std::snprintf(buf, sizeof(buf), "TOTAL,,,,,,,,,,%llu,%s\n",
                static_cast<unsigned long long>(total_dense()), fmt_macs(total_sparse()).c_str());
  os << buf;
  std::snprintf(buf, sizeof(buf), "RATIO,,,,,,,,,,,%.9g\n", ratio());
  os << buf;
  return os.str();
}

std::string MacReport::to_table() const {
  std::ostringstream os;
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%-22s %5s %6s %6s %6s %6s %3s %9s %16s %16s\n", "layer", "scale", "h",
                "w", "c_in", "c_out", "k", "psi", "mac_dense", "mac_sparse");
  os << buf;
  for (const MacEntry& e : layers) {
    std::snprintf(buf, sizeof(buf), "%-22s %5d %6zu %6zu %6zu %6zu %3zu %9.4f %16llu %16.0f\n",
                  e.name.c_str(), e.scale, e.h, e.w, e.c_in, e.c_out, e.k, e.psi,
                  static_cast<unsigned long long>(e.mac_dense), e.mac_sparse);
    os << buf;
  }
  const std::uint64_t dense = total_dense();
  const double sparse = total_sparse();
  std::snprintf(buf, sizeof(buf), "%-22s %62s %16llu %16.0f\n", "TOTAL", "", static_cast<unsigned long long>(dense),
                sparse);
  os << buf;
  std::snprintf(buf, sizeof(buf),
                "sparse/dense MAC ratio: %.6f   (MACs: dense %.4f G, sparse %.4f G; x2 FLOPs: %.4f G, %.4f G)\n",
                ratio(), static_cast<double>(dense) * 1e-9, sparse * 1e-9, static_cast<double>(dense) * 2e-9,
                sparse * 2e-9);
  os << buf;
  return os.str();
}

namespace {

MacEntry base_entry(const ArchLayer& l) {
  MacEntry e;
  e.name = l.name;
  e.h = l.h;
  e.w = l.w;
  e.c_in = l.c_in;
  e.c_out = l.c_out;
  e.k = l.k;
  e.scale = l.scale;
  e.maskable = l.maskable;
  e.mac_dense = mac_dense(l.c_in, l.c_out, l.k, l.h, l.w);
  return e;
}

}  // namespace

MacReport arch_report(const ArchConfig& cfg, const std::vector<double>& psi_per_scale) {
  if (psi_per_scale.size() != 4) fail(Errc::invalid_argument, "need one sparsity level per scale 3..0");
  for (double p : psi_per_scale)
    if (!(p >= 0.0 && p <= 1.0)) fail(Errc::invalid_argument, "sparsity level must be in [0,1]");

  MacReport rep;
  for (const ArchLayer& l : cfg.layers) {
    MacEntry e = base_entry(l);
    if (l.maskable) {
      e.psi = psi_per_scale[static_cast<std::size_t>(l.scale)];
      e.mac_sparse = e.psi * static_cast<double>(e.mac_dense);
      e.active = static_cast<std::uint64_t>(std::llround(e.psi * static_cast<double>(l.h * l.w)));
    } else {
      e.psi = 1.0;
      e.active = l.h * l.w;
      e.mac_sparse = static_cast<double>(e.mac_dense);
    }
    rep.layers.push_back(std::move(e));
  }
  return rep;
}

MacReport arch_report_from_masks(const ArchConfig& cfg, const std::vector<SparseMask>& mask_per_scale) {
  if (mask_per_scale.size() != 4) fail(Errc::invalid_argument, "need one mask per scale 3..0");

  // Dilated counts are cached per (scale, radius); dilation of the same mask
  // recurs across branch stages.
  std::map<std::pair<int, unsigned>, std::uint64_t> counts;
  auto active_for = [&](int scale, unsigned dilation) {
    const auto key = std::make_pair(scale, dilation);
    auto it = counts.find(key);
    if (it != counts.end()) return it->second;
    const SparseMask& m = mask_per_scale[static_cast<std::size_t>(scale)];
    const std::uint64_t n = dilation == 0 ? m.active_count() : dilate_mask(m, dilation).active_count();
    counts.emplace(key, n);
    return n;
  };

  MacReport rep;
  for (const ArchLayer& l : cfg.layers) {
    MacEntry e = base_entry(l);
    if (l.maskable) {
      const SparseMask& m = mask_per_scale[static_cast<std::size_t>(l.scale)];
      if (m.height != l.h || m.width != l.w)
        fail(Errc::dimension_mismatch, "mask dims do not match layer '" + l.name + "'");
      e.active = active_for(l.scale, l.dilation);
      e.psi = static_cast<double>(e.active) / static_cast<double>(l.h * l.w);
      e.mac_sparse = static_cast<double>(mac_sparse_count(l.c_in, l.c_out, l.k, e.active));
    } else {
      e.psi = 1.0;
      e.active = l.h * l.w;
      e.mac_sparse = static_cast<double>(e.mac_dense);
    }
    rep.layers.push_back(std::move(e));
  }
  return rep;
}

}  // namespace wavedepth
