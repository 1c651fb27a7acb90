#include "wavedepth/decoder.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "wavedepth/io.hpp"
#include "wavedepth/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace wavedepth {

void LayerStack::validate() const {
  if (disp_head.empty()) fail(Errc::invalid_argument, "disparity head chain is empty");
  for (std::size_t i = 0; i < disp_head.size(); ++i) {
    disp_head[i].validate();
    if (i > 0 && disp_head[i].c_in != disp_head[i - 1].c_out)
      fail(Errc::shape_mismatch, "disparity head channel chain broken");
  }
  if (disp_head.back().c_out != 1)
    fail(Errc::shape_mismatch, "disparity head must end in one channel");
  if (disp_head.back().activation != Activation::sigmoid)
    fail(Errc::invalid_argument, "disparity head must end in a sigmoid");
  for (const WaveHeadSpec& head : wave_heads) head.validate();
  if (!(d_min < d_max)) fail(Errc::range_inverted, "disparity range inverted");
}

Tensor sigmoid_to_disparity(const Tensor& raw, double d_min, double d_max) {
  if (!(d_min < d_max)) fail(Errc::range_inverted, "disparity range inverted");
  Tensor out(raw.height(), raw.width(), raw.channels());
  const double span = d_max - d_min;
  for (std::size_t i = 0; i < raw.size(); ++i)
    out.data()[i] = static_cast<float>(d_min + static_cast<double>(raw.data()[i]) * span);
  return out;
}

namespace {

const char* kHeadNames[4] = {"wave4", "wave3", "wave2", "wave1"};  // scales 3..0

MacEntry conv_entry(const std::string& name, const ConvSpec& spec, std::size_t h, std::size_t w,
                    bool maskable, int scale, std::uint64_t active, std::uint64_t sparse_macs) {
  MacEntry e;
  e.name = name;
  e.h = h;
  e.w = w;
  e.c_in = spec.c_in;
  e.c_out = spec.c_out;
  e.k = spec.k;
  e.scale = scale;
  e.maskable = maskable;
  e.active = active;
  e.psi = static_cast<double>(active) / static_cast<double>(h * w);
  e.mac_dense = mac_dense(spec.c_in, spec.c_out, spec.k, h, w);
  e.mac_sparse = static_cast<double>(sparse_macs);
  return e;
}

void append_head_entries(MacReport& report, const WaveHeadSpec& head, const WaveHeadResult& res,
                         int scale, std::size_t h, std::size_t w) {
  const std::string base = kHeadNames[3 - scale];
  const ConvSpec* convs[4] = {&head.plus_point, &head.plus_spatial, &head.minus_point,
                              &head.minus_spatial};
  const char* suffix[4] = {"_plus_point", "_plus_spatial", "_minus_point", "_minus_spatial"};
  for (std::size_t i = 0; i < res.layer_macs.size(); ++i)
    report.layers.push_back(conv_entry(base + suffix[i], *convs[i], h, w, true, scale,
                                       res.layer_active[i], res.layer_macs[i]));
}

}  // namespace

DecoderRun run_decoder(const FeaturePyramid& features, const LayerStack& stack, double eta,
                       bool force_dense) {
  stack.validate();
  if (features.levels.size() != 4) fail(Errc::invalid_argument, "feature pyramid must hold 4 levels");
  if (eta < 0.0) fail(Errc::invalid_argument, "eta must be non-negative");
  for (std::size_t i = 1; i < 4; ++i) {
    if (features.levels[i].height() != 2 * features.levels[i - 1].height() ||
        features.levels[i].width() != 2 * features.levels[i - 1].width())
      fail(Errc::dimension_mismatch, "feature levels must double in resolution");
  }
  for (std::size_t i = 0; i < 4; ++i)
    if (features.levels[i].channels() != stack.wave_heads[i].plus_point.c_in)
      fail(Errc::channel_mismatch, "feature channels do not match head " + std::to_string(i));
  if (features.levels[0].channels() != stack.disp_head.front().c_in)
    fail(Errc::channel_mismatch, "feature channels do not match disparity head");

  DecoderRun run;

  // DensePredict: the coarse disparity estimate, remapped out of the sigmoid.
  const Tensor& f4 = features.levels[0];
  Tensor x = f4;
  for (std::size_t i = 0; i < stack.disp_head.size(); ++i) {
    const ConvSpec& spec = stack.disp_head[i];
    x = conv2d_dense(x, spec);
    const std::uint64_t dense = mac_dense(spec.c_in, spec.c_out, spec.k, x.height(), x.width());
    run.macs.layers.push_back(conv_entry("disp_" + std::to_string(i), spec, x.height(), x.width(),
                                         false, -1, x.height() * x.width(), dense));
  }
  Tensor ll = sigmoid_to_disparity(x, stack.d_min, stack.d_max);
  run.depth.push_back(ll);

  SparseMask mask = all_ones_mask(f4.height(), f4.width());
  for (int scale = 3; scale >= 0; --scale) {
    const std::size_t idx = static_cast<std::size_t>(3 - scale);
    const Tensor& feat = features.levels[idx];
    if (mask.height != feat.height() || mask.width != feat.width())
      fail(Errc::dimension_mismatch, "mask does not match feature resolution");

    run.masks.push_back(mask);
    run.psi.push_back(sparsity_level(mask));

    WaveHeadResult head = wave_head(feat, stack.wave_heads[idx], mask);
    append_head_entries(run.macs, stack.wave_heads[idx], head, scale, feat.height(), feat.width());

    ll = idwt_level(ll, head.level.lh, head.level.hl, head.level.hh);
    run.depth.push_back(ll);

    const double eta_s = scale_threshold(ll, eta);
    mask = force_dense ? all_ones_mask(2 * feat.height(), 2 * feat.width())
                       : get_sparse_mask(head.level, eta_s);
    run.coeffs.push_back(std::move(head.level));
  }
  return run;
}

ArchConfig executed_arch_config(const LayerStack& stack, std::size_t full_h, std::size_t full_w) {
  stack.validate();
  if (full_h % 16 != 0 || full_w % 16 != 0)
    fail(Errc::invalid_argument, "output dims must be divisible by 16");

  ArchConfig cfg;
  auto add = [&](const std::string& name, const ConvSpec& spec, std::size_t h, std::size_t w,
                 bool maskable, int scale, unsigned dilation) {
    cfg.layers.push_back(
        ArchLayer{name, h, w, spec.c_in, spec.c_out, spec.k, maskable, scale, dilation});
  };

  for (std::size_t i = 0; i < stack.disp_head.size(); ++i)
    add("disp_" + std::to_string(i), stack.disp_head[i], full_h / 16, full_w / 16, false, -1, 0);

  for (int scale = 3; scale >= 0; --scale) {
    const std::size_t idx = static_cast<std::size_t>(3 - scale);
    const WaveHeadSpec& head = stack.wave_heads[idx];
    const std::size_t h = full_h >> (scale + 1), w = full_w >> (scale + 1);
    const std::string base = kHeadNames[idx];
    const unsigned reach = static_cast<unsigned>(head.plus_spatial.k / 2);
    add(base + "_plus_point", head.plus_point, h, w, true, scale, reach);
    add(base + "_plus_spatial", head.plus_spatial, h, w, true, scale, 0);
    if (head.kind == WaveHeadSpec::Kind::two_sigmoid_difference) {
      add(base + "_minus_point", head.minus_point, h, w, true, scale, reach);
      add(base + "_minus_spatial", head.minus_spatial, h, w, true, scale, 0);
    }
  }
  return cfg;
}

namespace {

json conv_to_json(const ConvSpec& spec, const std::string& stem, const std::string& dir) {
  Tensor weights(spec.c_out, spec.c_in * spec.k * spec.k, 1, spec.weights);
  Tensor bias(1, spec.c_out, 1, spec.bias);
  write_tensor(weights, (fs::path(dir) / (stem + "_w.wmdt")).string());
  write_tensor(bias, (fs::path(dir) / (stem + "_b.wmdt")).string());
  json j;
  j["c_in"] = spec.c_in;
  j["c_out"] = spec.c_out;
  j["k"] = spec.k;
  j["activation"] = activation_name(spec.activation);
  j["slope"] = spec.leaky_slope;
  j["weights"] = stem + "_w.wmdt";
  j["bias"] = stem + "_b.wmdt";
  return j;
}

ConvSpec conv_from_json(const json& j, const std::string& dir) {
  ConvSpec spec;
  spec.c_in = j.at("c_in").get<std::size_t>();
  spec.c_out = j.at("c_out").get<std::size_t>();
  spec.k = j.value("k", std::size_t{3});
  spec.activation = activation_from_name(j.value("activation", std::string("linear")));
  spec.leaky_slope = j.value("slope", 0.1f);

  for (const char* key : {"weights", "bias"}) {
    const fs::path blob = fs::path(dir) / j.at(key).get<std::string>();
    if (!fs::exists(blob)) fail(Errc::missing_blob, "missing weight blob " + blob.string());
  }
  const Tensor weights = read_tensor((fs::path(dir) / j.at("weights").get<std::string>()).string());
  const Tensor bias = read_tensor((fs::path(dir) / j.at("bias").get<std::string>()).string());
  if (weights.height() != spec.c_out || weights.width() != spec.c_in * spec.k * spec.k ||
      weights.channels() != 1)
    fail(Errc::shape_mismatch, "weight blob shape does not match conv spec");
  if (bias.height() != 1 || bias.width() != spec.c_out || bias.channels() != 1)
    fail(Errc::shape_mismatch, "bias blob shape does not match conv spec");
  spec.weights = weights.storage();
  spec.bias = bias.storage();
  spec.validate();
  return spec;
}

const char* kind_name(WaveHeadSpec::Kind k) {
  return k == WaveHeadSpec::Kind::two_sigmoid_difference ? "two_sigmoid_difference" : "linear";
}

WaveHeadSpec::Kind kind_from_name(const std::string& name) {
  if (name == "two_sigmoid_difference") return WaveHeadSpec::Kind::two_sigmoid_difference;
  if (name == "linear") return WaveHeadSpec::Kind::linear;
  fail(Errc::invalid_argument, "unknown head kind '" + name + "'");
}

}  // namespace

void save_stack(const LayerStack& stack, const std::string& dir) {
  stack.validate();
  fs::create_directories(dir);

  json manifest;
  manifest["scales"] = 4;
  manifest["disp_range"] = {stack.d_min, stack.d_max};
  json disp = json::array();
  for (std::size_t i = 0; i < stack.disp_head.size(); ++i)
    disp.push_back(conv_to_json(stack.disp_head[i], "disp_" + std::to_string(i), dir));
  manifest["disp_head"] = disp;

  json heads = json::array();
  for (int scale = 3; scale >= 0; --scale) {
    const WaveHeadSpec& head = stack.wave_heads[static_cast<std::size_t>(3 - scale)];
    const std::string base = kHeadNames[3 - scale];
    json h;
    h["scale"] = scale;
    h["kind"] = kind_name(head.kind);
    h["plus_point"] = conv_to_json(head.plus_point, base + "_plus_point", dir);
    h["plus_spatial"] = conv_to_json(head.plus_spatial, base + "_plus_spatial", dir);
    if (head.kind == WaveHeadSpec::Kind::two_sigmoid_difference) {
      h["minus_point"] = conv_to_json(head.minus_point, base + "_minus_point", dir);
      h["minus_spatial"] = conv_to_json(head.minus_spatial, base + "_minus_spatial", dir);
    }
    heads.push_back(std::move(h));
  }
  manifest["heads"] = heads;

  std::ofstream f(fs::path(dir) / "manifest.json");
  if (!f) fail(Errc::io, "cannot write stack manifest in " + dir);
  f << manifest.dump(2) << "\n";
}

LayerStack load_stack(const std::string& manifest_or_dir) {
  fs::path path(manifest_or_dir);
  if (fs::is_directory(path)) path /= "manifest.json";
  std::ifstream f(path);
  if (!f) fail(Errc::io, "cannot open stack manifest " + path.string());
  json manifest = json::parse(f, nullptr, false);
  if (manifest.is_discarded()) fail(Errc::malformed_header, "invalid stack manifest " + path.string());

  const std::string dir = path.parent_path().string().empty() ? "." : path.parent_path().string();
  LayerStack stack;
  const auto range = manifest.at("disp_range");
  stack.d_min = range.at(0).get<double>();
  stack.d_max = range.at(1).get<double>();

  for (const json& cj : manifest.at("disp_head")) stack.disp_head.push_back(conv_from_json(cj, dir));

  if (manifest.at("scales").get<int>() != 4)
    fail(Errc::invalid_argument, "stack must describe 4 scales");
  for (const json& hj : manifest.at("heads")) {
    const int scale = hj.at("scale").get<int>();
    if (scale < 0 || scale > 3) fail(Errc::invalid_argument, "head scale out of range");
    WaveHeadSpec head;
    head.kind = kind_from_name(hj.at("kind").get<std::string>());
    head.plus_point = conv_from_json(hj.at("plus_point"), dir);
    head.plus_spatial = conv_from_json(hj.at("plus_spatial"), dir);
    if (head.kind == WaveHeadSpec::Kind::two_sigmoid_difference) {
      head.minus_point = conv_from_json(hj.at("minus_point"), dir);
      head.minus_spatial = conv_from_json(hj.at("minus_spatial"), dir);
    }
    stack.wave_heads[static_cast<std::size_t>(3 - scale)] = std::move(head);
  }
  stack.validate();
  return stack;
}

namespace {

ConvSpec random_conv(SplitMix64& rng, std::size_t c_in, std::size_t c_out, std::size_t k,
                     Activation act, float slope = 0.1f) {
  ConvSpec spec;
  spec.c_in = c_in;
  spec.c_out = c_out;
  spec.k = k;
  spec.activation = act;
  spec.leaky_slope = slope;
  const float bound = 1.0f / std::sqrt(static_cast<float>(c_in * k * k));
  spec.weights.resize(c_out * c_in * k * k);
  for (float& w : spec.weights) w = rng.uniform(-bound, bound);
  spec.bias.assign(c_out, 0.0f);
  return spec;
}

}  // namespace

LayerStack random_stack(std::uint64_t seed, const std::vector<std::size_t>& channels,
                        WaveHeadSpec::Kind kind, double d_min, double d_max) {
  if (channels.size() != 4) fail(Errc::invalid_argument, "need one channel count per scale 3..0");
  SplitMix64 rng(seed);

  LayerStack stack;
  stack.d_min = d_min;
  stack.d_max = d_max;
  const std::size_t mid = std::max<std::size_t>(channels[0] / 4, 1);
  stack.disp_head.push_back(random_conv(rng, channels[0], mid, 1, Activation::leaky_relu));
  stack.disp_head.push_back(random_conv(rng, mid, 1, 3, Activation::sigmoid));

  for (std::size_t i = 0; i < 4; ++i) {
    WaveHeadSpec head;
    head.kind = kind;
    const std::size_t c = channels[i];
    if (kind == WaveHeadSpec::Kind::two_sigmoid_difference) {
      head.plus_point = random_conv(rng, c, c, 1, Activation::leaky_relu);
      head.plus_spatial = random_conv(rng, c, 3, 3, Activation::sigmoid);
      head.minus_point = random_conv(rng, c, c, 1, Activation::leaky_relu);
      head.minus_spatial = random_conv(rng, c, 3, 3, Activation::sigmoid);
    } else {
      head.plus_point = random_conv(rng, c, c, 1, Activation::linear);
      head.plus_spatial = random_conv(rng, c, 3, 3, Activation::linear);
    }
    stack.wave_heads[i] = std::move(head);
  }
  return stack;
}

FeaturePyramid synth_features(std::uint64_t seed, std::size_t full_h, std::size_t full_w,
                              const std::vector<std::size_t>& channels) {
  if (channels.size() != 4) fail(Errc::invalid_argument, "need one channel count per scale 3..0");
  if (full_h % 16 != 0 || full_w % 16 != 0)
    fail(Errc::dimension_mismatch, "output dims must be divisible by 16");

  SplitMix64 rng(seed);
  FeaturePyramid pyr;
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t div = std::size_t{16} >> i;
    Tensor t(full_h / div, full_w / div, channels[i]);
    for (std::size_t j = 0; j < t.size(); ++j) t.data()[j] = rng.next_symmetric();
    pyr.levels.push_back(std::move(t));
  }
  return pyr;
}

}  // namespace wavedepth
