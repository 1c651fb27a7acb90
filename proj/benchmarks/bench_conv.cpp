#include <benchmark/benchmark.h>

#include "wavedepth/conv.hpp"
#include "wavedepth/rng.hpp"

using namespace wavedepth;

namespace {

ConvSpec make_spec(std::size_t c_in, std::size_t c_out, std::size_t k) {
  SplitMix64 rng(11);
  ConvSpec spec;
  spec.c_in = c_in;
  spec.c_out = c_out;
  spec.k = k;
  spec.weights.resize(c_out * c_in * k * k);
  for (float& w : spec.weights) w = rng.next_symmetric();
  spec.bias.assign(c_out, 0.0f);
  return spec;
}

Tensor make_input(std::size_t h, std::size_t w, std::size_t c) {
  SplitMix64 rng(12);
  Tensor t(h, w, c);
  for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = rng.next_symmetric();
  return t;
}

SparseMask make_mask(std::size_t h, std::size_t w, double psi) {
  SplitMix64 rng(13);
  SparseMask m(h, w);
  for (auto& b : m.bits) b = rng.next_unit() < psi ? 1 : 0;
  return m;
}

}  // namespace

static void BM_ConvDense(benchmark::State& state) {
  const ConvSpec spec = make_spec(32, 32, 3);
  const Tensor x = make_input(120, 160, 32);
  for (auto _ : state) {
    Tensor y = conv2d_dense(x, spec);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_ConvDense);

static void BM_ConvSparse(benchmark::State& state) {
  const ConvSpec spec = make_spec(32, 32, 3);
  const Tensor x = make_input(120, 160, 32);
  const SparseMask mask = make_mask(120, 160, static_cast<double>(state.range(0)) / 100.0);
  for (auto _ : state) {
    SparseConvResult r = conv2d_sparse(x, spec, mask);
    benchmark::DoNotOptimize(r.output.data());
  }
}
BENCHMARK(BM_ConvSparse)->Arg(100)->Arg(25)->Arg(5);

BENCHMARK_MAIN();
