#include <benchmark/benchmark.h>

#include "pandarl/env/env.hpp"
#include "pandarl/sim/world.hpp"

using namespace pandarl;

namespace {

void BM_advance(benchmark::State& state) {
  sim::WorldState w;
  sim::ObjectState cube;
  cube.pos = {0.05, 0.0, 0.02};
  w.objects.push_back(cube);
  sim::ObjectState puck;
  puck.shape = sim::ObjectShape::make_puck();
  puck.pos = {-0.05, 0.05, 0.01};
  w.objects.push_back(puck);
  const Vec3 cmd{0.01, -0.005, 0.002};
  for (auto _ : state) {
    w = sim::advance(w, cmd, 0.001);
    benchmark::DoNotOptimize(w.time);
  }
}

void BM_env_episode(benchmark::State& state) {
  env::Env e = env::make_env("PandaPush-v1");
  const std::vector<double> action{0.3, -0.2, 0.1};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    e.reset(seed++);
    for (int t = 0; t < 50; ++t) benchmark::DoNotOptimize(e.step(action).reward);
  }
}

}  // namespace

BENCHMARK(BM_advance);
BENCHMARK(BM_env_episode);
