#include <benchmark/benchmark.h>

#include "thunder/biquad.hpp"
#include "thunder/convolve.hpp"
#include "thunder/noise.hpp"

using namespace thunder::dsp;

static void BM_BiquadStatic(benchmark::State& state) {
  const auto x = white_noise(1, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto y = biquad_process({FilterKind::bandpass, 333.0, 4.0}, x);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BiquadStatic)->Arg(1 << 12)->Arg(1 << 20);

// Cutoff redesigned every control block.
static void BM_BiquadRamped(benchmark::State& state) {
  const auto x = white_noise(2, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto y = biquad_ramp_cutoff({FilterKind::lowpass, 1000.0, kButterworthQ}, 1000.0, 0.0,
                                {0.0, 12.0}, x);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BiquadRamped)->Arg(1 << 12)->Arg(1 << 20);

static void BM_ConvolveFft(benchmark::State& state) {
  const auto x = white_noise(3, static_cast<std::size_t>(state.range(0)));
  const auto h = white_noise(4, static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    auto y = convolve_fft(x, h);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
// Up to a full render convolved with the 3 s beach IR.
BENCHMARK(BM_ConvolveFft)->Args({4096, 512})->Args({1 << 16, 1 << 14})->Args({970200, 132300})
    ->Unit(benchmark::kMillisecond);

static void BM_ConvolvePair(benchmark::State& state) {
  const auto x = white_noise(5, 970200);
  const auto a = white_noise(6, 132300);
  const auto b = white_noise(7, 132300);
  for (auto _ : state) {
    auto y = convolve_fft_pair(x, a, b);
    benchmark::DoNotOptimize(y[0].data());
  }
}
BENCHMARK(BM_ConvolvePair)->Unit(benchmark::kMillisecond);

static void BM_ConvolveDirect(benchmark::State& state) {
  const auto x = white_noise(8, 4096);
  const auto h = white_noise(9, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto y = convolve_direct(x, h);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_ConvolveDirect)->Arg(16)->Arg(64);
