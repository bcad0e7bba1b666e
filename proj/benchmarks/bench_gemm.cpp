#include <benchmark/benchmark.h>

#include "pandarl/nn/mat.hpp"
#include "pandarl/rng.hpp"

using namespace pandarl;

namespace {

void fill(nn::Mat& m, Rng& rng) {
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-1.0, 1.0);
}

void BM_gemm_nn(benchmark::State& state) {
  const int b = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const int n = static_cast<int>(state.range(2));
  Rng rng(1);
  nn::Mat a(b, k), w(k, n), c;
  fill(a, rng);
  fill(w, rng);
  for (auto _ : state) {
    nn::gemm_nn(a, w, c);
    benchmark::DoNotOptimize(c.data());
  }
  state.counters["GFLOP/s"] = benchmark::Counter(2.0 * b * k * n * state.iterations(),
                                                 benchmark::Counter::kIsRate,
                                                 benchmark::Counter::kIs1000);
}

}  // namespace

// Batch x hidden shapes the training loop actually runs.
BENCHMARK(BM_gemm_nn)->Args({256, 256, 256})->Args({256, 22, 256})->Args({128, 256, 256})->Args({1, 256, 256});
