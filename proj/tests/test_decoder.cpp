#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "wavedepth/decoder.hpp"
#include "wavedepth/io.hpp"
#include "wavedepth/rng.hpp"

using namespace wavedepth;
namespace fs = std::filesystem;

namespace {

const std::vector<std::size_t> kSmallChannels = {8, 8, 8, 8};

LayerStack small_stack(std::uint64_t seed) { return random_stack(seed, kSmallChannels); }

FeaturePyramid small_features(std::uint64_t seed) {
  return synth_features(seed, 64, 96, kSmallChannels);
}

}  // namespace

TEST_CASE("synth_features is deterministic and sized by the scale chain") {
  const FeaturePyramid a = synth_features(5, 320, 1024, {16, 8, 8, 4});
  const FeaturePyramid b = synth_features(5, 320, 1024, {16, 8, 8, 4});
  const FeaturePyramid c = synth_features(6, 320, 1024, {16, 8, 8, 4});

  REQUIRE(a.levels.size() == 4);
  CHECK(a.levels[0].height() == 20);
  CHECK(a.levels[0].width() == 64);
  CHECK(a.levels[3].height() == 160);
  CHECK(a.levels[3].width() == 512);
  for (std::size_t i = 0; i < 4; ++i) CHECK(tensor_equal(a.levels[i], b.levels[i]));
  CHECK_FALSE(tensor_equal(a.levels[0], c.levels[0]));
  for (const Tensor& t : a.levels) {
    CHECK(tensor_min(t) >= -1.0f);
    CHECK(tensor_max(t) <= 1.0f);
  }
}

TEST_CASE("sigmoid_to_disparity affine map") {
  Tensor raw(1, 3);
  raw.at(0, 0) = 0.5f;
  raw.at(0, 1) = 0.0f;
  raw.at(0, 2) = 1.0f;
  const Tensor d = sigmoid_to_disparity(raw, 0.0, 1.0);
  CHECK(d.at(0, 0) == 0.5f);
  CHECK(d.at(0, 1) == 0.0f);
  CHECK(d.at(0, 2) == 1.0f);

  Tensor q(1, 1);
  q.at(0, 0) = 0.25f;
  CHECK(sigmoid_to_disparity(q, 0.01, 10.0).at(0, 0) == doctest::Approx(2.5075).epsilon(1e-6));

  try {
    sigmoid_to_disparity(raw, 5.0, 1.0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::range_inverted);
  }
}

TEST_CASE("stack save/load roundtrip is bitwise") {
  const LayerStack stack = small_stack(7);
  const std::string dir = (fs::temp_directory_path() / "wavedepth_stack").string();
  save_stack(stack, dir);
  const LayerStack back = load_stack(dir);
  CHECK(back.d_min == stack.d_min);
  CHECK(back.d_max == stack.d_max);
  REQUIRE(back.disp_head.size() == stack.disp_head.size());
  for (std::size_t i = 0; i < stack.disp_head.size(); ++i) {
    CHECK(back.disp_head[i].weights == stack.disp_head[i].weights);
    CHECK(back.disp_head[i].bias == stack.disp_head[i].bias);
    CHECK(back.disp_head[i].activation == stack.disp_head[i].activation);
  }
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(back.wave_heads[i].kind == stack.wave_heads[i].kind);
    CHECK(back.wave_heads[i].plus_point.weights == stack.wave_heads[i].plus_point.weights);
    CHECK(back.wave_heads[i].minus_spatial.weights == stack.wave_heads[i].minus_spatial.weights);
  }
}

TEST_CASE("manifest with mismatched blob shape is rejected") {
  const LayerStack stack = small_stack(8);
  const std::string dir = (fs::temp_directory_path() / "wavedepth_stack_bad").string();
  save_stack(stack, dir);
  // overwrite one weight blob with the wrong shape
  write_tensor(Tensor(2, 2), (fs::path(dir) / "wave4_plus_point_w.wmdt").string());
  try {
    load_stack(dir);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::shape_mismatch);
  }
}

TEST_CASE("missing blob is reported as such") {
  const LayerStack stack = small_stack(9);
  const std::string dir = (fs::temp_directory_path() / "wavedepth_stack_missing").string();
  save_stack(stack, dir);
  fs::remove(fs::path(dir) / "wave2_minus_point_w.wmdt");
  try {
    load_stack(dir);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::missing_blob);
  }
}

TEST_CASE("run contract: five depth maps, four masks, doubling chain") {
  const DecoderRun run = run_decoder(small_features(10), small_stack(11), 0.05);
  REQUIRE(run.depth.size() == 5);
  REQUIRE(run.masks.size() == 4);
  REQUIRE(run.psi.size() == 4);
  REQUIRE(run.coeffs.size() == 4);
  CHECK(run.depth[0].height() == 4);   // 64/16
  CHECK(run.depth[0].width() == 6);    // 96/16
  CHECK(run.depth[4].height() == 64);
  CHECK(run.depth[4].width() == 96);
  for (std::size_t i = 1; i < 5; ++i) {
    CHECK(run.depth[i].height() == 2 * run.depth[i - 1].height());
    CHECK(run.depth[i].width() == 2 * run.depth[i - 1].width());
  }
  // scale-3 mask is the all-ones initialization
  CHECK(run.masks[0].active_count() == run.masks[0].bits.size());
  CHECK(run.psi[0] == 1.0);
}

TEST_CASE("eta = 0 gates only exact zeros, so depth equals the dense run") {
  const FeaturePyramid f = small_features(12);
  const LayerStack stack = small_stack(13);
  const DecoderRun sparse = run_decoder(f, stack, 0.0);
  const DecoderRun dense = run_decoder(f, stack, 0.0, /*force_dense=*/true);
  for (std::size_t i = 0; i < 5; ++i) CHECK(tensor_equal(sparse.depth[i], dense.depth[i]));
}

TEST_CASE("identical branches zero the details: output is a scaled block expansion") {
  LayerStack stack = small_stack(14);
  for (WaveHeadSpec& head : stack.wave_heads) {
    head.minus_point = head.plus_point;
    head.minus_spatial = head.plus_spatial;
  }
  const DecoderRun run = run_decoder(small_features(15), stack, 0.05);

  CoefficientPyramid pyr;
  pyr.ll = run.depth[0];
  std::size_t h = pyr.ll.height(), w = pyr.ll.width();
  for (int j = 0; j < 4; ++j) {
    pyr.levels.push_back(WaveletLevel{Tensor(h, w), Tensor(h, w), Tensor(h, w)});
    h *= 2;
    w *= 2;
  }
  CHECK(max_abs_diff(run.depth[4], idwt_pyramid(pyr)) == 0.0f);

  // masks after scale 3 are empty: no coefficient exceeds any threshold
  CHECK(run.psi[1] == 0.0);
  CHECK(run.psi[2] == 0.0);
  CHECK(run.psi[3] == 0.0);
}

TEST_CASE("huge eta empties every derived mask and its MACs") {
  const DecoderRun run = run_decoder(small_features(16), small_stack(17), 1e9);
  CHECK(run.psi[0] == 1.0);
  CHECK(run.psi[1] == 0.0);
  CHECK(run.psi[2] == 0.0);
  CHECK(run.psi[3] == 0.0);
  for (const MacEntry& e : run.macs.layers) {
    if (e.scale >= 0 && e.scale <= 2) {
      CHECK(e.active == 0);
      CHECK(e.mac_sparse == 0.0);
    }
  }
}

TEST_CASE("gated equivalence: sparse values match dense heads masked afterwards") {
  const FeaturePyramid f = small_features(18);
  const LayerStack stack = small_stack(19);
  const double eta = 0.08;
  const DecoderRun run = run_decoder(f, stack, eta);

  Tensor ll = run.depth[0];
  for (int scale = 3; scale >= 0; --scale) {
    const std::size_t idx = static_cast<std::size_t>(3 - scale);
    const WaveHeadResult dense =
        wave_head(f.levels[idx], stack.wave_heads[idx], all_ones_mask(f.levels[idx].height(), f.levels[idx].width()));
    const SparseMask& mask = run.masks[idx];

    WaveletLevel gated = dense.level;
    for (std::size_t y = 0; y < mask.height; ++y)
      for (std::size_t x = 0; x < mask.width; ++x)
        if (!mask.at(y, x)) {
          gated.lh.at(y, x) = 0.0f;
          gated.hl.at(y, x) = 0.0f;
          gated.hh.at(y, x) = 0.0f;
        }
    CHECK(tensor_equal(gated.lh, run.coeffs[idx].lh));
    CHECK(tensor_equal(gated.hl, run.coeffs[idx].hl));
    CHECK(tensor_equal(gated.hh, run.coeffs[idx].hh));

    ll = idwt_level(ll, gated.lh, gated.hl, gated.hh);
    CHECK(tensor_equal(ll, run.depth[idx + 1]));
  }
}

TEST_CASE("mask causality: each mask re-derives from the previous scale only") {
  const FeaturePyramid f = small_features(20);
  const LayerStack stack = small_stack(21);
  const double eta = 0.05;
  const DecoderRun run = run_decoder(f, stack, eta);

  for (std::size_t i = 0; i + 1 < 4; ++i) {
    const double eta_s = scale_threshold(run.depth[i + 1], eta);
    const SparseMask expect = get_sparse_mask(run.coeffs[i], eta_s);
    CHECK(expect.bits == run.masks[i + 1].bits);
  }
}

TEST_CASE("executed cost model reproduces the run ledger from its masks") {
  const FeaturePyramid f = small_features(22);
  const LayerStack stack = small_stack(23);
  const DecoderRun run = run_decoder(f, stack, 0.05);

  const ArchConfig cfg = executed_arch_config(stack, 64, 96);
  const MacReport replay = arch_report_from_masks(cfg, {run.masks[3], run.masks[2], run.masks[1], run.masks[0]});

  REQUIRE(replay.layers.size() == run.macs.layers.size());
  for (std::size_t i = 0; i < replay.layers.size(); ++i) {
    CHECK(replay.layers[i].name == run.macs.layers[i].name);
    CHECK(replay.layers[i].mac_dense == run.macs.layers[i].mac_dense);
    CHECK(replay.layers[i].mac_sparse == run.macs.layers[i].mac_sparse);
    CHECK(replay.layers[i].active == run.macs.layers[i].active);
  }
  CHECK(replay.total_dense() == run.macs.total_dense());
  CHECK(replay.ratio() == run.macs.ratio());
}

TEST_CASE("per-layer sparse MACs follow the exact active-count formula") {
  const DecoderRun run = run_decoder(small_features(24), small_stack(25), 0.03);
  for (const MacEntry& e : run.macs.layers) {
    const std::uint64_t unit = (e.c_in * e.k * e.k + 1) * e.c_out;
    CHECK(e.mac_sparse == static_cast<double>(e.active * unit));
    CHECK(e.mac_dense == e.h * e.w * unit);
  }
}

TEST_CASE("dimension chain violations are rejected") {
  FeaturePyramid f = small_features(26);
  f.levels[2] = Tensor(5, 5, 8);  // breaks the doubling chain
  try {
    run_decoder(f, small_stack(27), 0.05);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dimension_mismatch);
  }
}

TEST_CASE("feature channels must match the stack") {
  const FeaturePyramid f = synth_features(28, 64, 96, {8, 8, 8, 4});
  try {
    run_decoder(f, small_stack(29), 0.05);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::channel_mismatch);
  }
}
