#include "pandarl/train/harness.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace pandarl::train {

namespace {

constexpr std::uint64_t kEnvStream = 1;
constexpr std::uint64_t kActionStream = 2;
constexpr std::uint64_t kBufferStream = 3;
constexpr std::uint64_t kEvalStream = 4;

std::string format_csv_row(const MetricsRow& row) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%llu,%.6f,%.3f",
                static_cast<unsigned long long>(row.total_env_steps), row.success_rate,
                row.wall_time_s);
  return buf;
}

nlohmann::json run_manifest(const RunConfig& cfg) {
  return nlohmann::json{
      {"env", cfg.env_name},
      {"dense", cfg.dense},
      {"algorithm", rl::to_string(cfg.agent.algorithm)},
      {"her_enabled", cfg.her_enabled},
      {"her_k", cfg.her_k},
      {"clipped_double_q", cfg.agent.clipped_double_q},
      {"replay_capacity", cfg.replay_capacity},
      {"n_workers", cfg.n_workers},
      {"total_env_steps", cfg.total_env_steps},
      {"eval_every_episodes", cfg.eval_every_episodes},
      {"eval_episodes", cfg.eval_episodes},
      {"updates_per_episode", cfg.updates_per_episode},
      {"target_sync_every",
       cfg.target_sync_every > 0 ? cfg.target_sync_every : cfg.updates_per_episode},
      {"batch_size", cfg.agent.batch_size},
      {"gamma", cfg.agent.gamma},
      {"tau", cfg.agent.tau},
      {"lr", cfg.agent.lr},
      {"seed", cfg.seed},
      {"record_wall_time", cfg.record_wall_time},
      {"schedule",
       "workers collect full episodes; after each stored episode the learner "
       "runs updates_per_episode batches once the buffer holds batch_size "
       "transitions; evaluation every eval_every_episodes episodes"},
  };
}

// Hands finished episodes from workers to the learner. Bounded so workers
// cannot run far ahead of the policy they explore with.
class EpisodeQueue {
 public:
  explicit EpisodeQueue(std::size_t max_size) : max_size_(max_size) {}

  bool push(RolloutResult&& item) {
    std::unique_lock lock(mutex_);
    not_full_.wait(lock, [&] { return queue_.size() < max_size_ || stopped_; });
    if (stopped_) return false;
    queue_.push_back(std::move(item));
    not_empty_.notify_one();
    return true;
  }

  bool pop(RolloutResult& out) {
    std::unique_lock lock(mutex_);
    not_empty_.wait(lock, [&] { return !queue_.empty() || stopped_; });
    if (queue_.empty()) return false;
    out = std::move(queue_.front());
    queue_.pop_front();
    not_full_.notify_one();
    return true;
  }

  void stop() {
    std::lock_guard lock(mutex_);
    stopped_ = true;
    not_full_.notify_all();
    not_empty_.notify_all();
  }

 private:
  std::mutex mutex_;
  std::condition_variable not_full_;
  std::condition_variable not_empty_;
  std::deque<RolloutResult> queue_;
  std::size_t max_size_;
  bool stopped_ = false;
};

class PolicyBoard {
 public:
  void publish(rl::Policy policy) {
    auto next = std::make_shared<const rl::Policy>(std::move(policy));
    std::lock_guard lock(mutex_);
    current_ = std::move(next);
  }
  std::shared_ptr<const rl::Policy> latest() const {
    std::lock_guard lock(mutex_);
    return current_;
  }

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const rl::Policy> current_;
};

}  // namespace

RolloutResult collect_episode(env::Env& env, const rl::Policy& policy, bool explore,
                              Rng& rng) {
  RolloutResult result;
  env::GoalObservation obs = env.reset();
  const int horizon = env.env_spec().episode_length;
  result.episode.reserve(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) {
    std::vector<double> action =
        policy.act(obs.observation, obs.desired_goal.positions, explore, rng);
    env::StepResult step = env.step(action);
    rl::Transition tr;
    tr.obs = std::move(obs.observation);
    tr.action = std::move(action);
    tr.reward = step.reward;
    tr.next_obs = step.obs.observation;
    // Fixed-length episodes: the time limit is not a terminal state.
    tr.done = false;
    tr.achieved_goal = std::move(obs.achieved_goal);
    tr.next_achieved_goal = step.obs.achieved_goal;
    tr.desired_goal = std::move(obs.desired_goal);
    result.episode.push_back(std::move(tr));
    result.final_success = step.is_success;
    obs = std::move(step.obs);
  }
  return result;
}

double evaluate(const rl::Policy& policy, env::Env& env, int episodes, std::uint64_t seed) {
  Rng unused(0);
  int successes = 0;
  for (int e = 0; e < episodes; ++e) {
    env::GoalObservation cur = env.reset(seed + static_cast<std::uint64_t>(e));
    const int horizon = env.env_spec().episode_length;
    bool success = false;
    for (int t = 0; t < horizon; ++t) {
      const std::vector<double> action =
          policy.act(cur.observation, cur.desired_goal.positions, /*explore=*/false, unused);
      env::StepResult step = env.step(action);
      success = step.is_success;
      cur = std::move(step.obs);
    }
    if (success) ++successes;
  }
  return static_cast<double>(successes) / episodes;
}

double evaluate(rl::Agent& agent, env::Env& env, int episodes, std::uint64_t seed) {
  return evaluate(agent.policy(), env, episodes, seed);
}

TrainResult train(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  if (cfg.n_workers < 1) throw std::invalid_argument("train: n_workers must be >= 1");
  if (cfg.total_env_steps == 0) throw std::invalid_argument("train: empty step budget");

  fs::create_directories(cfg.out_dir);
  const std::string metrics_path = cfg.out_dir + "/metrics.csv";
  const std::string diagnostics_path = cfg.out_dir + "/diagnostics.csv";
  const std::string manifest_path = cfg.out_dir + "/manifest.json";
  const std::string checkpoint_path = cfg.out_dir + "/checkpoint.bin";

  {
    std::ofstream manifest(manifest_path);
    manifest << run_manifest(cfg).dump(2) << "\n";
  }

  env::Env probe = env::make_env(cfg.env_name, cfg.dense);
  const env::EnvSpec spec = probe.env_spec();
  const task::TaskSpec reward_spec = probe.task_spec();

  rl::AgentConfig agent_cfg = cfg.agent;
  if (cfg.dense) agent_cfg.clip_return = false;  // dense returns exceed -1/(1-gamma)
  agent_cfg.target_sync_every =
      cfg.target_sync_every > 0 ? cfg.target_sync_every : cfg.updates_per_episode;
  rl::Agent agent(spec, agent_cfg, cfg.seed);
  rl::ReplayBuffer buffer(
      spec.obs_dim, spec.action_dim, spec.goal_dim, cfg.replay_capacity,
      [reward_spec](const task::Goal& achieved, const task::Goal& desired) {
        return task::compute_reward(reward_spec, achieved, desired);
      },
      cfg.her_k, cfg.her_enabled);
  Rng buffer_rng(Rng::derive(cfg.seed, kBufferStream));

  env::Env eval_env = env::make_env(cfg.env_name, cfg.dense);
  const std::uint64_t eval_seed = Rng::derive(cfg.seed, kEvalStream);

  const auto t_start = std::chrono::steady_clock::now();
  const auto wall_seconds = [&] {
    if (!cfg.record_wall_time) return 0.0;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };

  TrainResult result;
  result.metrics_path = metrics_path;
  result.diagnostics_path = diagnostics_path;
  result.manifest_path = manifest_path;
  result.checkpoint_path = checkpoint_path;

  // Rows are appended as they happen so an aborted run keeps its metrics.
  std::ofstream metrics(metrics_path);
  metrics << "total_env_steps,success_rate,wall_time_s\n" << std::flush;
  std::ofstream diag(diagnostics_path);
  diag << "total_env_steps,critic_loss,actor_loss,buffer_size\n" << std::flush;

  std::uint64_t steps_collected = 0;
  std::uint64_t episodes_done = 0;
  double last_critic_loss = 0.0;
  double last_actor_loss = 0.0;
  bool stop_requested = false;

  const auto run_eval = [&] {
    const double sr = evaluate(agent, eval_env, cfg.eval_episodes, eval_seed);
    MetricsRow row;
    row.total_env_steps = steps_collected;
    row.success_rate = sr;
    row.wall_time_s = wall_seconds();
    row.critic_loss = last_critic_loss;
    row.actor_loss = last_actor_loss;
    row.buffer_size = buffer.size();
    result.rows.push_back(row);
    metrics << format_csv_row(row) << "\n" << std::flush;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%llu,%.6g,%.6g,%zu",
                  static_cast<unsigned long long>(row.total_env_steps), row.critic_loss,
                  row.actor_loss, row.buffer_size);
    diag << buf << "\n" << std::flush;
    if (sr >= cfg.stop_at_success) stop_requested = true;
  };

  const auto process_episode = [&](RolloutResult&& rollout) {
    steps_collected += rollout.episode.size();
    buffer.store_episode(rollout.episode, buffer_rng);
    agent.observe_episode(rollout.episode);
    ++episodes_done;
    if (buffer.size() >= static_cast<std::size_t>(cfg.agent.batch_size)) {
      for (int u = 0; u < cfg.updates_per_episode; ++u) {
        const rl::UpdateStats stats =
            agent.update(buffer.sample_batch(cfg.agent.batch_size, buffer_rng));
        last_critic_loss = stats.critic_loss;
        if (stats.actor_loss) last_actor_loss = *stats.actor_loss;
      }
    }
    if (episodes_done % static_cast<std::uint64_t>(cfg.eval_every_episodes) == 0) {
      run_eval();
    }
  };

  if (cfg.n_workers == 1) {
    env::Env worker_env =
        env::make_env(cfg.env_name, cfg.dense, Rng::derive(cfg.seed + 0, kEnvStream));
    Rng action_rng(Rng::derive(cfg.seed + 0, kActionStream));
    while (steps_collected < cfg.total_env_steps && !stop_requested) {
      const rl::Policy policy = agent.policy();
      process_episode(collect_episode(worker_env, policy, /*explore=*/true, action_rng));
    }
  } else {
    EpisodeQueue queue(static_cast<std::size_t>(2 * cfg.n_workers));
    PolicyBoard board;
    board.publish(agent.policy());
    std::atomic<bool> done{false};

    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(cfg.n_workers));
    for (int w = 0; w < cfg.n_workers; ++w) {
      workers.emplace_back([&, w] {
        env::Env worker_env = env::make_env(
            cfg.env_name, cfg.dense,
            Rng::derive(cfg.seed + static_cast<std::uint64_t>(w), kEnvStream));
        Rng action_rng(Rng::derive(cfg.seed + static_cast<std::uint64_t>(w), kActionStream));
        while (!done.load(std::memory_order_relaxed)) {
          const std::shared_ptr<const rl::Policy> policy = board.latest();
          RolloutResult rollout =
              collect_episode(worker_env, *policy, /*explore=*/true, action_rng);
          if (!queue.push(std::move(rollout))) break;
        }
      });
    }

    while (steps_collected < cfg.total_env_steps && !stop_requested) {
      RolloutResult rollout;
      if (!queue.pop(rollout)) break;
      process_episode(std::move(rollout));
      board.publish(agent.policy());
    }
    done.store(true);
    queue.stop();
    for (std::thread& t : workers) t.join();
  }

  if (result.rows.empty() || result.rows.back().total_env_steps != steps_collected) {
    run_eval();
  }
  agent.save_checkpoint(checkpoint_path, cfg.env_name, cfg.dense);

  result.env_steps = steps_collected;
  result.episodes = episodes_done;
  return result;
}

}  // namespace pandarl::train
