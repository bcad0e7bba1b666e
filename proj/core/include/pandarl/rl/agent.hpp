#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pandarl/env/env.hpp"
#include "pandarl/nn/mlp.hpp"
#include "pandarl/rl/normalizer.hpp"
#include "pandarl/rl/replay.hpp"
#include "pandarl/rng.hpp"

namespace pandarl::rl {

enum class Algorithm { ddpg, td3, sac };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

struct AgentConfig {
  Algorithm algorithm = Algorithm::ddpg;
  double gamma = 0.98;
  double tau = 0.95;  // target <- tau * target + (1 - tau) * online
  double lr = 0.001;
  double random_action_prob = 0.3;    // DDPG/TD3
  double gaussian_noise_scale = 0.2;  // DDPG/TD3
  int policy_delay = 2;               // TD3
  double policy_noise = 0.2;          // TD3
  double policy_noise_clip = 0.5;     // TD3
  double alpha = 0.2;                 // SAC
  double action_l2 = 1.0;
  double obs_clip = 200.0;
  double norm_clip = 5.0;
  bool clipped_double_q = true;  // TD3/SAC; false drops the second critic
  bool normalize_inputs = true;
  // Clip bootstrap targets to [-1/(1-gamma), 0] inside update(); matches the
  // sparse reward range. Disabled by the harness for dense-reward runs.
  bool clip_return = true;
  // Actor updates between target-network syncs. 1 polyaks after every actor
  // update; the training harness raises it to its per-episode batch count so
  // targets move once per update cycle.
  int target_sync_every = 1;
  int batch_size = 256;
  int hidden_units = 256;
  int hidden_layers = 3;

  int critic_count() const {
    if (algorithm == Algorithm::ddpg) return 1;
    return clipped_double_q ? 2 : 1;
  }
};

// y = r + gamma * (1 - d) * q_next
inline double bootstrap_target(double reward, bool done, double gamma, double q_next) {
  return reward + gamma * (done ? 0.0 : 1.0) * q_next;
}

// q_next for the entropy-regularized bootstrap: min-Q minus alpha * log pi.
inline double entropy_regularized_q(double q_min, double alpha, double log_pi) {
  return q_min - alpha * log_pi;
}

struct UpdateStats {
  double critic_loss = 0.0;
  std::optional<double> actor_loss;  // absent on delayed steps
  double mean_q = 0.0;
  bool actor_updated = false;
};

// Squashed-Gaussian machinery shared by the SAC target and actor update.
// Kept as free functions so the hand-derived gradients stay verifiable
// against finite differences.
namespace sac {

struct Sample {
  nn::Mat u;        // pre-squash action
  nn::Mat action;   // tanh(u)
  nn::Mat eps;      // standard normal draws
  nn::Mat log_std;  // clamped
  std::vector<double> log_pi;
  std::vector<std::uint8_t> clamped;  // elementwise: raw log_std hit the clamp
};

inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;
inline constexpr double kSquashEps = 1e-6;

// actor_out is B x 2*action_dim: means then raw log-stds per row.
void sample_squashed(const nn::Mat& actor_out, int action_dim, Rng& rng, Sample& out);

// dL/d(actor_out) for L = (alpha / B) * sum_i log_pi_i + (Q path), where
// dq_da already carries dL/da through the critics including its batch
// scaling. eps is treated as a constant (reparameterization).
void actor_output_gradient(const Sample& s, const nn::Mat& actor_out, const nn::Mat& dq_da,
                           double alpha, nn::Mat& upstream);

}  // namespace sac

// Deterministic-actor snapshot handed to rollout workers; owns copies of
// everything action selection needs.
struct Policy {
  Algorithm algorithm = Algorithm::ddpg;
  nn::Mlp actor;
  Normalizer obs_norm;
  Normalizer goal_norm;
  AgentConfig cfg;

  std::vector<double> act(std::span<const double> observation, std::span<const double> goal,
                          bool explore, Rng& rng) const;
};

struct LoadedAgent;

class Agent {
 public:
  Agent(const env::EnvSpec& dims, const AgentConfig& cfg, std::uint64_t seed);

  std::vector<double> select_action(const env::GoalObservation& obs, bool explore);

  // One gradient step on a sampled batch. Throws std::runtime_error when a
  // loss turns non-finite.
  UpdateStats update(const Batch& batch);

  // Bootstrap targets for a batch; exposed separately so the target
  // equations are testable in isolation. td3_target draws smoothing noise
  // and sac_target samples next actions from the current policy.
  std::vector<double> ddpg_target(const Batch& batch);
  std::vector<double> td3_target(const Batch& batch);
  std::vector<double> sac_target(const Batch& batch);
  std::vector<double> compute_targets(const Batch& batch);

  // Accumulates running statistics from rollout data (never from eval).
  void observe_episode(const Episode& episode);

  Policy policy() const;

  void save_checkpoint(const std::string& path, const std::string& env_name,
                       bool dense_reward) const;
  static LoadedAgent load_checkpoint(const std::string& path);

  // Network names in checkpoint order ("actor", "critic1", ...).
  std::vector<std::string> network_names() const;
  nn::Mlp& network(const std::string& name);
  const AgentConfig& config() const { return cfg_; }
  const env::EnvSpec& dims() const { return dims_; }
  const Normalizer& obs_normalizer() const { return obs_norm_; }
  const Normalizer& goal_normalizer() const { return goal_norm_; }
  std::uint64_t total_updates() const { return total_updates_; }
  std::uint64_t actor_updates() const { return actor_updates_; }

  // Critic 1 evaluation on raw (unnormalized) inputs; diagnostics and tests.
  double q_value(std::span<const double> observation, std::span<const double> goal,
                 std::span<const double> action);

 private:
  void build_inputs(const Batch& batch);
  void normalized_input(std::span<const double> observation, std::span<const double> goal,
                        std::vector<double>& out) const;
  void critic_update(const Batch& batch, const std::vector<double>& y, UpdateStats& stats);
  void actor_update_deterministic(UpdateStats& stats);
  void actor_update_sac(UpdateStats& stats);
  void polyak_all();

  env::EnvSpec dims_;
  AgentConfig cfg_;
  Rng rng_;

  nn::Mlp actor_;
  nn::Mlp actor_target_;  // unused by SAC
  std::vector<nn::Mlp> critics_;
  std::vector<nn::Mlp> critic_targets_;

  Normalizer obs_norm_;
  Normalizer goal_norm_;

  std::uint64_t total_updates_ = 0;
  std::uint64_t actor_updates_ = 0;

  // Scratch reused across updates.
  nn::Mat state_in_;       // [norm obs ++ norm goal]
  nn::Mat next_state_in_;
  nn::Mat critic_in_;
  nn::Mat next_critic_in_;
  nn::Mat upstream_;
  nn::Mat dq_input_;
  nn::Mat actor_upstream_;
  sac::Sample sac_next_;
  sac::Sample sac_cur_;
  nn::Workspace actor_ws_;
  nn::Workspace actor_target_ws_;
  std::vector<nn::Workspace> critic_ws_;
  std::vector<nn::Workspace> critic_target_ws_;
  nn::Grads grads_;
  std::vector<double> y_;
};

struct LoadedAgent {
  Agent agent;
  std::string env_name;
  bool dense_reward = false;
};

}  // namespace pandarl::rl
