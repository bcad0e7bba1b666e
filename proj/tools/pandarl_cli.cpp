#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pandarl/env/env.hpp"
#include "pandarl/rl/agent.hpp"
#include "pandarl/train/harness.hpp"

using namespace pandarl;

namespace {

int cmd_train(const train::RunConfig& cfg) {
  const train::TrainResult result = train::train(cfg);
  std::printf("run complete: %llu env steps, %llu episodes\n",
              static_cast<unsigned long long>(result.env_steps),
              static_cast<unsigned long long>(result.episodes));
  if (!result.rows.empty()) {
    std::printf("final eval success rate: %.3f\n", result.rows.back().success_rate);
  }
  std::printf("metrics: %s\ncheckpoint: %s\n", result.metrics_path.c_str(),
              result.checkpoint_path.c_str());
  return 0;
}

int cmd_eval(const std::string& checkpoint, int episodes, std::uint64_t seed) {
  rl::LoadedAgent loaded = rl::Agent::load_checkpoint(checkpoint);
  env::Env e = env::make_env(loaded.env_name, loaded.dense_reward);
  const double rate = train::evaluate(loaded.agent, e, episodes, seed);
  std::printf("%s (%s): success rate %.4f over %d episodes\n", loaded.env_name.c_str(),
              rl::to_string(loaded.agent.config().algorithm).c_str(), rate, episodes);
  return 0;
}

int cmd_aggregate(const std::vector<std::string>& runs, const std::string& out) {
  const std::vector<train::AggregateRow> rows = train::aggregate(runs);
  if (out.empty()) {
    std::printf("total_env_steps,median,q25,q75\n");
    for (const train::AggregateRow& row : rows) {
      std::printf("%llu,%.6f,%.6f,%.6f\n", static_cast<unsigned long long>(row.total_env_steps),
                  row.median, row.q25, row.q75);
    }
  } else {
    train::write_aggregate_csv(out, rows);
    std::printf("wrote %s (%zu checkpoints, %zu runs)\n", out.c_str(), rows.size(),
                runs.size());
  }
  return 0;
}

int cmd_plot_data(const std::vector<std::string>& runs, const std::string& out_dir) {
  const std::vector<std::string> files = train::write_plot_data(runs, out_dir);
  for (const std::string& f : files) std::printf("wrote %s\n", f.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goal-conditioned RL suite for tabletop Panda manipulation"};
  app.require_subcommand(1);

  // train
  train::RunConfig cfg;
  std::string algo = "ddpg";
  bool no_her = false;
  bool no_clipped = false;
  bool no_wall_time = false;
  CLI::App* tr = app.add_subcommand("train", "Train an agent");
  tr->add_option("--env", cfg.env_name, "Environment name (PandaReach-v1, ...)")->required();
  tr->add_option("--algo", algo, "ddpg | td3 | sac")
      ->check(CLI::IsMember({"ddpg", "td3", "sac"}));
  tr->add_flag("--dense", cfg.dense, "Dense reward variant");
  tr->add_flag("--no-her", no_her, "Disable hindsight relabeling");
  tr->add_flag("--no-clipped-double-q", no_clipped, "Single-critic ablation of TD3/SAC");
  tr->add_option("--steps", cfg.total_env_steps, "Total environment steps")->required();
  tr->add_option("--seed", cfg.seed, "Run seed");
  tr->add_option("--workers", cfg.n_workers, "Rollout workers");
  tr->add_option("--out", cfg.out_dir, "Output directory")->required();
  tr->add_option("--updates-per-episode", cfg.updates_per_episode,
                 "Gradient batches after each stored episode");
  tr->add_option("--target-sync-every", cfg.target_sync_every,
                 "Actor updates between target syncs (0 = once per update cycle)");
  tr->add_option("--batch-size", cfg.agent.batch_size, "Batch size");
  tr->add_option("--eval-every", cfg.eval_every_episodes, "Episodes between evaluations");
  tr->add_option("--eval-episodes", cfg.eval_episodes, "Episodes per evaluation");
  tr->add_option("--her-k", cfg.her_k, "Relabeled copies per transition");
  tr->add_option("--replay-capacity", cfg.replay_capacity, "Replay buffer capacity");
  tr->add_option("--gamma", cfg.agent.gamma, "Discount factor");
  tr->add_flag("--no-wall-time", no_wall_time,
               "Write wall_time_s as 0.0 so the metrics file depends only on the seed");

  // eval
  std::string checkpoint;
  int eval_episodes = 80;
  std::uint64_t eval_seed = 0;
  CLI::App* ev = app.add_subcommand("eval", "Evaluate a checkpoint");
  ev->add_option("--checkpoint", checkpoint, "Path to checkpoint.bin")->required();
  ev->add_option("--episodes", eval_episodes, "Evaluation episodes");
  ev->add_option("--seed", eval_seed, "Evaluation seed");

  // aggregate
  std::vector<std::string> agg_runs;
  std::string agg_out;
  CLI::App* ag = app.add_subcommand("aggregate", "Median/IQR across runs");
  ag->add_option("--runs", agg_runs, "Run directories")->required()->expected(-1);
  ag->add_option("--out", agg_out, "Output CSV (stdout when omitted)");

  // plot-data
  std::vector<std::string> plot_runs;
  std::string plot_out = "plots";
  CLI::App* pd = app.add_subcommand("plot-data", "Per-task learning-curve files");
  pd->add_option("--runs", plot_runs, "Run directories")->required()->expected(-1);
  pd->add_option("--out", plot_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (tr->parsed()) {
      cfg.agent.algorithm = rl::algorithm_from_string(algo);
      cfg.her_enabled = !no_her;
      cfg.agent.clipped_double_q = !no_clipped;
      cfg.record_wall_time = !no_wall_time;
      return cmd_train(cfg);
    }
    if (ev->parsed()) return cmd_eval(checkpoint, eval_episodes, eval_seed);
    if (ag->parsed()) return cmd_aggregate(agg_runs, agg_out);
    if (pd->parsed()) return cmd_plot_data(plot_runs, plot_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
