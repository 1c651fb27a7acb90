#include <benchmark/benchmark.h>

#include "wavedepth/haar.hpp"
#include "wavedepth/synthetic.hpp"

using namespace wavedepth;

static void BM_DwtPyramid(benchmark::State& state) {
  const Tensor scene = synth_scene(7, 480, 640);
  const unsigned levels = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    CoefficientPyramid pyr = dwt_pyramid(scene, levels);
    benchmark::DoNotOptimize(pyr.ll.data());
  }
}
BENCHMARK(BM_DwtPyramid)->Arg(1)->Arg(4);

static void BM_IdwtPyramid(benchmark::State& state) {
  const Tensor scene = synth_scene(7, 480, 640);
  const CoefficientPyramid pyr = dwt_pyramid(scene, static_cast<unsigned>(state.range(0)));
  for (auto _ : state) {
    Tensor recon = idwt_pyramid(pyr);
    benchmark::DoNotOptimize(recon.data());
  }
}
BENCHMARK(BM_IdwtPyramid)->Arg(1)->Arg(4);

BENCHMARK_MAIN();
