#include <benchmark/benchmark.h>

#include "pandarl/env/env.hpp"
#include "pandarl/rl/agent.hpp"
#include "pandarl/train/harness.hpp"

using namespace pandarl;

namespace {

struct Fixture {
  env::Env env;
  rl::Agent agent;
  rl::ReplayBuffer buffer;
  Rng rng{7};

  Fixture(rl::Algorithm algo, int batch)
      : env(env::make_env("PandaPush-v1")),
        agent(env.env_spec(),
              [&] {
                rl::AgentConfig cfg;
                cfg.algorithm = algo;
                cfg.batch_size = batch;
                return cfg;
              }(),
              1),
        buffer(env.env_spec().obs_dim, env.env_spec().action_dim, env.env_spec().goal_dim,
               100'000,
               [spec = env.task_spec()](const task::Goal& a, const task::Goal& d) {
                 return task::compute_reward(spec, a, d);
               }) {
    for (int i = 0; i < 3; ++i) {
      buffer.store_episode(train::collect_episode(env, agent.policy(), true, rng).episode,
                           rng);
    }
  }
};

void BM_update(benchmark::State& state) {
  const auto algo = static_cast<rl::Algorithm>(state.range(0));
  const int batch = static_cast<int>(state.range(1));
  Fixture f(algo, batch);
  for (auto _ : state) {
    const rl::UpdateStats stats = f.agent.update(f.buffer.sample_batch(batch, f.rng));
    benchmark::DoNotOptimize(stats.critic_loss);
  }
}

void BM_select_action(benchmark::State& state) {
  Fixture f(rl::Algorithm::ddpg, 256);
  const env::GoalObservation obs = f.env.reset(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.agent.select_action(obs, true));
  }
}

}  // namespace

BENCHMARK(BM_update)
    ->Args({static_cast<int>(rl::Algorithm::ddpg), 256})
    ->Args({static_cast<int>(rl::Algorithm::td3), 256})
    ->Args({static_cast<int>(rl::Algorithm::sac), 256})
    ->Args({static_cast<int>(rl::Algorithm::ddpg), 128})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_select_action)->Unit(benchmark::kMicrosecond);
