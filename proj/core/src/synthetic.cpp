#include "wavedepth/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "wavedepth/rng.hpp"

namespace wavedepth {

Tensor render_scene(const SceneSpec& spec) {
  Tensor t(spec.height, spec.width, 1);
  for (std::size_t y = 0; y < spec.height; ++y)
    for (std::size_t x = 0; x < spec.width; ++x)
      t.at(y, x) = spec.base + spec.ramp_dx * static_cast<float>(x) + spec.ramp_dy * static_cast<float>(y);
  for (const SceneRect& r : spec.rects)
    for (std::size_t y = r.y; y < r.y + r.h; ++y)
      for (std::size_t x = r.x; x < r.x + r.w; ++x) t.at(y, x) = r.value;
  return t;
}

SceneSpec synth_scene_spec(std::uint64_t seed, std::size_t h, std::size_t w) {
  if (h < 8 || w < 8) fail(Errc::too_small, "scene needs at least 8x8");
  SplitMix64 rng(seed);

  SceneSpec spec;
  spec.height = h;
  spec.width = w;
  spec.base = rng.uniform(3.0f, 6.0f);
  // background spans about +-1.5 m corner to corner
  spec.ramp_dx = rng.uniform(-1.5f, 1.5f) / static_cast<float>(w);
  spec.ramp_dy = rng.uniform(-1.5f, 1.5f) / static_cast<float>(h);

  const std::size_t count = 6 + rng.below(7);
  for (std::size_t i = 0; i < count; ++i) {
    SceneRect r;
    r.w = 4 + rng.below(w / 2);
    r.h = 4 + rng.below(h / 2);
    r.x = rng.below(w - r.w);
    r.y = rng.below(h - r.h);
    r.value = rng.uniform(0.7f, 9.3f);
    spec.rects.push_back(r);
  }
  return spec;
}

Tensor synth_scene(std::uint64_t seed, std::size_t h, std::size_t w) {
  return render_scene(synth_scene_spec(seed, h, w));
}

SceneSpec synth_scene_dyadic_spec(std::uint64_t seed, std::size_t h, std::size_t w, std::size_t align) {
  if (align == 0 || h % align != 0 || w % align != 0)
    fail(Errc::invalid_argument, "scene dims must be multiples of align");
  SplitMix64 rng(seed);

  auto quantized = [&](float lo, float hi) {
    const long q = std::lround(rng.uniform(lo, hi) * 4.0f);
    return static_cast<float>(q) * 0.25f;
  };

  SceneSpec spec;
  spec.height = h;
  spec.width = w;
  spec.base = quantized(3.0f, 6.0f);

  const std::size_t count = 5 + rng.below(6);
  for (std::size_t i = 0; i < count; ++i) {
    SceneRect r;
    r.w = align * (1 + rng.below(std::max<std::size_t>(w / (2 * align), 1)));
    r.h = align * (1 + rng.below(std::max<std::size_t>(h / (2 * align), 1)));
    r.x = align * rng.below((w - r.w) / align + 1);
    r.y = align * rng.below((h - r.h) / align + 1);
    r.value = quantized(0.5f, 9.5f);
    spec.rects.push_back(r);
  }
  return spec;
}

std::vector<std::uint32_t> region_ids(const SceneSpec& spec) {
  std::vector<std::uint32_t> ids(spec.height * spec.width, 0);
  for (std::size_t i = 0; i < spec.rects.size(); ++i) {
    const SceneRect& r = spec.rects[i];
    for (std::size_t y = r.y; y < r.y + r.h; ++y)
      for (std::size_t x = r.x; x < r.x + r.w; ++x)
        ids[y * spec.width + x] = static_cast<std::uint32_t>(i + 1);
  }
  return ids;
}

}  // namespace wavedepth
