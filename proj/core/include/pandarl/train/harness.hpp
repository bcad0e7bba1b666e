#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pandarl/env/env.hpp"
#include "pandarl/rl/agent.hpp"
#include "pandarl/rl/replay.hpp"

namespace pandarl::train {

struct RunConfig {
  std::string env_name = "PandaReach-v1";
  bool dense = false;
  rl::AgentConfig agent;
  bool her_enabled = true;
  int her_k = 4;
  std::size_t replay_capacity = 1'000'000;
  int n_workers = 8;
  std::uint64_t total_env_steps = 100'000;
  int eval_every_episodes = 80;  // counted globally across workers
  int eval_episodes = 80;
  int updates_per_episode = 40;
  // Actor updates between target syncs; 0 = once per update cycle
  // (updates_per_episode), the referenced off-policy convention.
  int target_sync_every = 0;
  std::uint64_t seed = 0;
  std::string out_dir = "run";
  // Wall time is environmental, not computed; disable to make the metrics
  // file a pure function of the seed.
  bool record_wall_time = true;
  // Stop as soon as an evaluation reaches this success rate (1.1 = never).
  double stop_at_success = 1.1;
};

struct MetricsRow {
  std::uint64_t total_env_steps = 0;
  double success_rate = 0.0;
  double wall_time_s = 0.0;
  double critic_loss = 0.0;
  double actor_loss = 0.0;
  std::size_t buffer_size = 0;
};

struct TrainResult {
  std::vector<MetricsRow> rows;
  std::string metrics_path;
  std::string diagnostics_path;
  std::string manifest_path;
  std::string checkpoint_path;
  std::uint64_t env_steps = 0;
  std::uint64_t episodes = 0;
};

// Runs the full training protocol: n_workers rollout collectors feed one
// replay buffer; the learner runs updates_per_episode batches after every
// stored episode and evaluates every eval_every_episodes episodes. Writes
// manifest.json, metrics.csv, diagnostics.csv and checkpoint.bin under
// cfg.out_dir. Single-worker runs are bit-deterministic in the seed.
TrainResult train(const RunConfig& cfg);

struct RolloutResult {
  rl::Episode episode;
  bool final_success = false;
};

RolloutResult collect_episode(env::Env& env, const rl::Policy& policy, bool explore, Rng& rng);

// Deterministic-policy success rate over full episodes; episode e reseeds the
// environment with seed + e, so a given seed always replays the same goals.
double evaluate(const rl::Policy& policy, env::Env& env, int episodes, std::uint64_t seed);
double evaluate(rl::Agent& agent, env::Env& env, int episodes, std::uint64_t seed);

struct AggregateRow {
  std::uint64_t total_env_steps = 0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

// Linear-interpolation percentile of values (p in [0,1]).
double percentile(std::vector<double> values, double p);

// Per-checkpoint median / interquartile range across runs that share eval
// checkpoints. Throws std::runtime_error when the checkpoint columns differ.
std::vector<AggregateRow> aggregate_curves(
    const std::vector<std::vector<MetricsRow>>& runs);
std::vector<AggregateRow> aggregate(const std::vector<std::string>& run_dirs);

std::vector<MetricsRow> read_metrics_csv(const std::string& path);
void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows);

// Groups runs by (env, algorithm) from their manifests and writes one
// "<env>_<algo>.dat" curve file per group (columns: timestep med lowq highq).
std::vector<std::string> write_plot_data(const std::vector<std::string>& run_dirs,
                                         const std::string& out_dir);

}  // namespace pandarl::train
