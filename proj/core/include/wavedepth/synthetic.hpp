#pragma once

#include <cstdint>
#include <vector>

#include "wavedepth/tensor.hpp"

namespace wavedepth {

struct SceneRect {
  std::size_t x = 0, y = 0, w = 0, h = 0;
  float value = 0.0f;
};

// Depth-like test scene: a planar background plus axis-aligned rectangles
// painted in order (later rectangles win). Keeping the generative parameters
// around lets tests derive expected coefficient structure without running
// the transform.
struct SceneSpec {
  std::size_t height = 0;
  std::size_t width = 0;
  float base = 0.0f;     // background value at (0, 0)
  float ramp_dx = 0.0f;  // background slope per pixel
  float ramp_dy = 0.0f;
  std::vector<SceneRect> rects;
};

Tensor render_scene(const SceneSpec& spec);

// Piecewise-constant rectangles over a gently sloped background, values in
// roughly [0.5, 9.5] meters. Deterministic in the seed.
SceneSpec synth_scene_spec(std::uint64_t seed, std::size_t h, std::size_t w);
Tensor synth_scene(std::uint64_t seed, std::size_t h, std::size_t w);

// Flat background, rectangle corners snapped to multiples of align and all
// values multiples of 0.25. With such inputs the Haar analysis is exact
// float arithmetic, so structurally-zero coefficients are bitwise zero.
SceneSpec synth_scene_dyadic_spec(std::uint64_t seed, std::size_t h, std::size_t w, std::size_t align);

// Region-id map of a piecewise-constant scene: background 0, rectangle i+1.
std::vector<std::uint32_t> region_ids(const SceneSpec& spec);

}  // namespace wavedepth
