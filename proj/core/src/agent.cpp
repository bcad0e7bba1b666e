#include "pandarl/rl/agent.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "pandarl/nn/checkpoint.hpp"

namespace pandarl::rl {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // 0.5 * log(2 * pi)

void append_prepared(const Normalizer& norm, bool normalize, std::span<const double> x,
                     double* out) {
  if (normalize) {
    norm.normalize(x, std::span<double>(out, x.size()));
  } else {
    for (std::size_t i = 0; i < x.size(); ++i) {
      out[i] = clamp(x[i], -norm.raw_clip(), norm.raw_clip());
    }
  }
}

// Shared action-selection path for the learner and worker snapshots.
std::vector<double> act_impl(const AgentConfig& cfg, const nn::Mlp& actor,
                             const Normalizer& obs_norm, const Normalizer& goal_norm,
                             std::span<const double> observation, std::span<const double> goal,
                             bool explore, Rng& rng, nn::Workspace& ws) {
  std::vector<double> input(observation.size() + goal.size());
  append_prepared(obs_norm, cfg.normalize_inputs, observation, input.data());
  append_prepared(goal_norm, cfg.normalize_inputs, goal, input.data() + observation.size());

  const std::vector<double> out = actor.forward(input, ws);

  std::vector<double> action;
  if (cfg.algorithm == Algorithm::sac) {
    const std::size_t act_dim = out.size() / 2;
    action.resize(act_dim);
    for (std::size_t j = 0; j < act_dim; ++j) {
      double u = out[j];
      if (explore) {
        const double log_std = clamp(out[act_dim + j], sac::kLogStdMin, sac::kLogStdMax);
        u += std::exp(log_std) * rng.normal();
      }
      action[j] = std::tanh(u);
    }
  } else {
    action = out;  // tanh head
    if (explore) {
      if (rng.uniform() < cfg.random_action_prob) {
        for (double& a : action) a = rng.uniform(-1.0, 1.0);
      } else {
        for (double& a : action) a += cfg.gaussian_noise_scale * rng.normal();
      }
    }
  }
  for (double& a : action) a = clamp(a, -1.0, 1.0);
  return action;
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::ddpg: return "ddpg";
    case Algorithm::td3: return "td3";
    case Algorithm::sac: return "sac";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "ddpg") return Algorithm::ddpg;
  if (s == "td3") return Algorithm::td3;
  if (s == "sac") return Algorithm::sac;
  throw std::invalid_argument("unknown algorithm: " + s);
}

std::vector<double> Policy::act(std::span<const double> observation,
                                std::span<const double> goal, bool explore, Rng& rng) const {
  nn::Workspace ws;
  return act_impl(cfg, actor, obs_norm, goal_norm, observation, goal, explore, rng, ws);
}

Agent::Agent(const env::EnvSpec& dims, const AgentConfig& cfg, std::uint64_t seed)
    : dims_(dims), cfg_(cfg), rng_(seed) {
  const int state_dim = dims.obs_dim + dims.goal_dim;
  std::vector<int> actor_dims{state_dim};
  std::vector<int> critic_dims{state_dim + dims.action_dim};
  for (int i = 0; i < cfg.hidden_layers; ++i) {
    actor_dims.push_back(cfg.hidden_units);
    critic_dims.push_back(cfg.hidden_units);
  }
  const bool sac = cfg.algorithm == Algorithm::sac;
  actor_dims.push_back(sac ? 2 * dims.action_dim : dims.action_dim);
  critic_dims.push_back(1);

  actor_ = nn::Mlp::make(actor_dims, sac ? nn::Head::linear : nn::Head::bounded, rng_);
  if (!sac) actor_target_ = actor_;
  for (int c = 0; c < cfg.critic_count(); ++c) {
    critics_.push_back(nn::Mlp::make(critic_dims, nn::Head::linear, rng_));
    critic_targets_.push_back(critics_.back());
  }
  critic_ws_.resize(critics_.size());
  critic_target_ws_.resize(critic_targets_.size());

  obs_norm_ = Normalizer(dims.obs_dim, cfg.obs_clip, cfg.norm_clip);
  goal_norm_ = Normalizer(dims.goal_dim, cfg.obs_clip, cfg.norm_clip);
}

std::vector<double> Agent::select_action(const env::GoalObservation& obs, bool explore) {
  return act_impl(cfg_, actor_, obs_norm_, goal_norm_, obs.observation,
                  obs.desired_goal.positions, explore, rng_, actor_ws_);
}

void Agent::normalized_input(std::span<const double> observation, std::span<const double> goal,
                             std::vector<double>& out) const {
  out.resize(observation.size() + goal.size());
  append_prepared(obs_norm_, cfg_.normalize_inputs, observation, out.data());
  append_prepared(goal_norm_, cfg_.normalize_inputs, goal, out.data() + observation.size());
}

void Agent::build_inputs(const Batch& batch) {
  const int state_dim = dims_.obs_dim + dims_.goal_dim;
  state_in_.resize(batch.size, state_dim);
  next_state_in_.resize(batch.size, state_dim);
  for (int i = 0; i < batch.size; ++i) {
    std::span<const double> goal(batch.desired.row(i), static_cast<std::size_t>(dims_.goal_dim));
    append_prepared(obs_norm_, cfg_.normalize_inputs,
                    std::span<const double>(batch.obs.row(i), static_cast<std::size_t>(dims_.obs_dim)),
                    state_in_.row(i));
    append_prepared(goal_norm_, cfg_.normalize_inputs, goal, state_in_.row(i) + dims_.obs_dim);
    append_prepared(obs_norm_, cfg_.normalize_inputs,
                    std::span<const double>(batch.next_obs.row(i), static_cast<std::size_t>(dims_.obs_dim)),
                    next_state_in_.row(i));
    append_prepared(goal_norm_, cfg_.normalize_inputs, goal,
                    next_state_in_.row(i) + dims_.obs_dim);
  }
}

namespace {

void concat_cols(const nn::Mat& left, const nn::Mat& right, nn::Mat& out) {
  out.resize(left.rows(), left.cols() + right.cols());
  for (int i = 0; i < left.rows(); ++i) {
    std::memcpy(out.row(i), left.row(i), static_cast<std::size_t>(left.cols()) * sizeof(double));
    std::memcpy(out.row(i) + left.cols(), right.row(i),
                static_cast<std::size_t>(right.cols()) * sizeof(double));
  }
}

}  // namespace

std::vector<double> Agent::ddpg_target(const Batch& batch) {
  build_inputs(batch);
  const nn::Mat& a2 = actor_target_.forward(next_state_in_, actor_target_ws_);
  concat_cols(next_state_in_, a2, next_critic_in_);
  const nn::Mat& q1 = critic_targets_[0].forward(next_critic_in_, critic_target_ws_[0]);
  std::vector<double> y(static_cast<std::size_t>(batch.size));
  for (int i = 0; i < batch.size; ++i) {
    y[static_cast<std::size_t>(i)] =
        bootstrap_target(batch.reward[static_cast<std::size_t>(i)],
                         batch.done[static_cast<std::size_t>(i)] != 0, cfg_.gamma, q1(i, 0));
  }
  return y;
}

std::vector<double> Agent::td3_target(const Batch& batch) {
  build_inputs(batch);
  nn::Mat a2 = actor_target_.forward(next_state_in_, actor_target_ws_);
  for (int i = 0; i < a2.rows(); ++i) {
    for (int j = 0; j < a2.cols(); ++j) {
      const double noise = clamp(cfg_.policy_noise * rng_.normal(), -cfg_.policy_noise_clip,
                                 cfg_.policy_noise_clip);
      a2(i, j) = clamp(a2(i, j) + noise, -1.0, 1.0);
    }
  }
  concat_cols(next_state_in_, a2, next_critic_in_);
  const nn::Mat& q1 = critic_targets_[0].forward(next_critic_in_, critic_target_ws_[0]);
  const nn::Mat* q2 = nullptr;
  if (critic_targets_.size() > 1) {
    q2 = &critic_targets_[1].forward(next_critic_in_, critic_target_ws_[1]);
  }
  std::vector<double> y(static_cast<std::size_t>(batch.size));
  for (int i = 0; i < batch.size; ++i) {
    const double q = q2 ? std::min(q1(i, 0), (*q2)(i, 0)) : q1(i, 0);
    y[static_cast<std::size_t>(i)] =
        bootstrap_target(batch.reward[static_cast<std::size_t>(i)],
                         batch.done[static_cast<std::size_t>(i)] != 0, cfg_.gamma, q);
  }
  return y;
}

std::vector<double> Agent::sac_target(const Batch& batch) {
  build_inputs(batch);
  const nn::Mat& out2 = actor_.forward(next_state_in_, actor_target_ws_);
  sac::sample_squashed(out2, dims_.action_dim, rng_, sac_next_);
  concat_cols(next_state_in_, sac_next_.action, next_critic_in_);
  const nn::Mat& q1 = critic_targets_[0].forward(next_critic_in_, critic_target_ws_[0]);
  const nn::Mat* q2 = nullptr;
  if (critic_targets_.size() > 1) {
    q2 = &critic_targets_[1].forward(next_critic_in_, critic_target_ws_[1]);
  }
  std::vector<double> y(static_cast<std::size_t>(batch.size));
  for (int i = 0; i < batch.size; ++i) {
    const double q_min = q2 ? std::min(q1(i, 0), (*q2)(i, 0)) : q1(i, 0);
    const double q_next = entropy_regularized_q(
        q_min, cfg_.alpha, sac_next_.log_pi[static_cast<std::size_t>(i)]);
    y[static_cast<std::size_t>(i)] =
        bootstrap_target(batch.reward[static_cast<std::size_t>(i)],
                         batch.done[static_cast<std::size_t>(i)] != 0, cfg_.gamma, q_next);
  }
  return y;
}

std::vector<double> Agent::compute_targets(const Batch& batch) {
  switch (cfg_.algorithm) {
    case Algorithm::ddpg: return ddpg_target(batch);
    case Algorithm::td3: return td3_target(batch);
    case Algorithm::sac: return sac_target(batch);
  }
  throw std::logic_error("unknown algorithm");
}

namespace sac {

void sample_squashed(const nn::Mat& actor_out, int action_dim, Rng& rng, Sample& s) {
  const int batch = actor_out.rows();
  const int act = action_dim;
  s.u.resize(batch, act);
  s.action.resize(batch, act);
  s.eps.resize(batch, act);
  s.log_std.resize(batch, act);
  s.log_pi.assign(static_cast<std::size_t>(batch), 0.0);
  s.clamped.assign(static_cast<std::size_t>(batch) * act, 0);
  for (int i = 0; i < batch; ++i) {
    double log_pi = 0.0;
    for (int j = 0; j < act; ++j) {
      const double mean = actor_out(i, j);
      const double raw_log_std = actor_out(i, act + j);
      const double log_std = clamp(raw_log_std, kLogStdMin, kLogStdMax);
      if (raw_log_std != log_std) s.clamped[static_cast<std::size_t>(i) * act + j] = 1;
      const double eps = rng.normal();
      const double u = mean + std::exp(log_std) * eps;
      const double a = std::tanh(u);
      s.u(i, j) = u;
      s.action(i, j) = a;
      s.eps(i, j) = eps;
      s.log_std(i, j) = log_std;
      log_pi += -kHalfLog2Pi - log_std - 0.5 * eps * eps - std::log(1.0 - a * a + kSquashEps);
    }
    s.log_pi[static_cast<std::size_t>(i)] = log_pi;
  }
}

void actor_output_gradient(const Sample& s, const nn::Mat& actor_out, const nn::Mat& dq_da,
                           double alpha, nn::Mat& upstream) {
  const int batch = s.u.rows();
  const int act = s.u.cols();
  upstream.resize(batch, 2 * act);
  for (int i = 0; i < batch; ++i) {
    for (int j = 0; j < act; ++j) {
      const double a = s.action(i, j);
      const double one_m_a2 = 1.0 - a * a;
      const double dlogp_du = 2.0 * a * one_m_a2 / (one_m_a2 + kSquashEps);
      const double du = dq_da(i, j) * one_m_a2 + (alpha / batch) * dlogp_du;
      const double sigma_eps = s.u(i, j) - actor_out(i, j);  // sigma * eps
      double dlog_std = du * sigma_eps - alpha / batch;
      if (s.clamped[static_cast<std::size_t>(i) * act + j]) dlog_std = 0.0;
      upstream(i, j) = du;
      upstream(i, act + j) = dlog_std;
    }
  }
}

}  // namespace sac

void Agent::critic_update(const Batch& batch, const std::vector<double>& y,
                          UpdateStats& stats) {
  concat_cols(state_in_, batch.action, critic_in_);
  const nn::AdamConfig adam{cfg_.lr, 0.9, 0.999, 1e-8};
  double loss_sum = 0.0;
  double q_sum = 0.0;
  upstream_.resize(batch.size, 1);
  for (std::size_t c = 0; c < critics_.size(); ++c) {
    const nn::Mat& q = critics_[c].forward(critic_in_, critic_ws_[c]);
    double loss = 0.0;
    for (int i = 0; i < batch.size; ++i) {
      const double err = q(i, 0) - y[static_cast<std::size_t>(i)];
      loss += err * err;
      upstream_(i, 0) = 2.0 * err / batch.size;
      if (c == 0) q_sum += q(i, 0);
    }
    loss /= batch.size;
    if (!std::isfinite(loss)) {
      throw std::runtime_error("critic update diverged: non-finite loss");
    }
    loss_sum += loss;
    critics_[c].backward(critic_ws_[c], upstream_, grads_);
    critics_[c].adam_step(grads_, adam);
  }
  stats.critic_loss = loss_sum / static_cast<double>(critics_.size());
  stats.mean_q = q_sum / batch.size;
}

void Agent::actor_update_deterministic(UpdateStats& stats) {
  const int batch = state_in_.rows();
  const int act = dims_.action_dim;
  const nn::Mat& pi = actor_.forward(state_in_, actor_ws_);
  concat_cols(state_in_, pi, critic_in_);
  const nn::Mat& q = critics_[0].forward(critic_in_, critic_ws_[0]);

  double q_mean = 0.0;
  double l2_mean = 0.0;
  for (int i = 0; i < batch; ++i) {
    q_mean += q(i, 0);
    for (int j = 0; j < act; ++j) l2_mean += pi(i, j) * pi(i, j);
  }
  q_mean /= batch;
  l2_mean /= static_cast<double>(batch) * act;
  const double loss = -q_mean + cfg_.action_l2 * l2_mean;
  if (!std::isfinite(loss)) {
    throw std::runtime_error("actor update diverged: non-finite loss");
  }
  stats.actor_loss = loss;

  upstream_.resize(batch, 1);
  for (int i = 0; i < batch; ++i) upstream_(i, 0) = -1.0 / batch;
  critics_[0].backward(critic_ws_[0], upstream_, grads_, &dq_input_);

  actor_upstream_.resize(batch, act);
  const int state_dim = state_in_.cols();
  const double l2_scale = 2.0 * cfg_.action_l2 / (static_cast<double>(batch) * act);
  for (int i = 0; i < batch; ++i) {
    for (int j = 0; j < act; ++j) {
      actor_upstream_(i, j) = dq_input_(i, state_dim + j) + l2_scale * pi(i, j);
    }
  }
  actor_.backward(actor_ws_, actor_upstream_, grads_);
  actor_.adam_step(grads_, nn::AdamConfig{cfg_.lr, 0.9, 0.999, 1e-8});
}

void Agent::actor_update_sac(UpdateStats& stats) {
  const int batch = state_in_.rows();
  const nn::Mat& out = actor_.forward(state_in_, actor_ws_);
  sac::sample_squashed(out, dims_.action_dim, rng_, sac_cur_);
  concat_cols(state_in_, sac_cur_.action, critic_in_);

  const nn::Mat& q1 = critics_[0].forward(critic_in_, critic_ws_[0]);
  const nn::Mat* q2 = nullptr;
  if (critics_.size() > 1) q2 = &critics_[1].forward(critic_in_, critic_ws_[1]);

  std::vector<std::uint8_t> use_second(static_cast<std::size_t>(batch), 0);
  double loss = 0.0;
  for (int i = 0; i < batch; ++i) {
    double q_min = q1(i, 0);
    if (q2 && (*q2)(i, 0) < q_min) {
      q_min = (*q2)(i, 0);
      use_second[static_cast<std::size_t>(i)] = 1;
    }
    loss += cfg_.alpha * sac_cur_.log_pi[static_cast<std::size_t>(i)] - q_min;
  }
  loss /= batch;
  if (!std::isfinite(loss)) {
    throw std::runtime_error("actor update diverged: non-finite loss");
  }
  stats.actor_loss = loss;

  // dL/d(critic input) through the per-row min critic.
  upstream_.resize(batch, 1);
  for (int i = 0; i < batch; ++i) {
    upstream_(i, 0) = use_second[static_cast<std::size_t>(i)] ? 0.0 : -1.0 / batch;
  }
  critics_[0].backward(critic_ws_[0], upstream_, grads_, &dq_input_);
  if (q2) {
    for (int i = 0; i < batch; ++i) {
      upstream_(i, 0) = use_second[static_cast<std::size_t>(i)] ? -1.0 / batch : 0.0;
    }
    nn::Mat dq2;
    critics_[1].backward(critic_ws_[1], upstream_, grads_, &dq2);
    for (std::size_t i = 0; i < dq_input_.size(); ++i) {
      dq_input_.data()[i] += dq2.data()[i];
    }
  }

  // Slice dL/da out of the critic-input gradient.
  const int state_dim = state_in_.cols();
  const int act = dims_.action_dim;
  nn::Mat dq_da(batch, act);
  for (int i = 0; i < batch; ++i) {
    for (int j = 0; j < act; ++j) dq_da(i, j) = dq_input_(i, state_dim + j);
  }
  sac::actor_output_gradient(sac_cur_, out, dq_da, cfg_.alpha, actor_upstream_);
  actor_.backward(actor_ws_, actor_upstream_, grads_);
  actor_.adam_step(grads_, nn::AdamConfig{cfg_.lr, 0.9, 0.999, 1e-8});
}

void Agent::polyak_all() {
  if (cfg_.algorithm != Algorithm::sac) actor_target_.polyak_from(actor_, cfg_.tau);
  for (std::size_t c = 0; c < critics_.size(); ++c) {
    critic_targets_[c].polyak_from(critics_[c], cfg_.tau);
  }
}

UpdateStats Agent::update(const Batch& batch) {
  UpdateStats stats;
  y_ = compute_targets(batch);  // also fills state_in_ / next_state_in_
  if (cfg_.clip_return) {
    const double floor = -1.0 / (1.0 - cfg_.gamma);
    for (double& y : y_) y = clamp(y, floor, 0.0);
  }
  critic_update(batch, y_, stats);
  ++total_updates_;

  const bool delayed = cfg_.algorithm == Algorithm::td3;
  const bool do_actor =
      !delayed || (total_updates_ % static_cast<std::uint64_t>(cfg_.policy_delay) == 0);
  if (do_actor) {
    if (cfg_.algorithm == Algorithm::sac) {
      actor_update_sac(stats);
    } else {
      actor_update_deterministic(stats);
    }
    ++actor_updates_;
    stats.actor_updated = true;
    if (actor_updates_ % static_cast<std::uint64_t>(std::max(cfg_.target_sync_every, 1)) ==
        0) {
      polyak_all();
    }
  }
  return stats;
}

void Agent::observe_episode(const Episode& episode) {
  for (const Transition& t : episode) {
    obs_norm_.observe(t.obs);
    goal_norm_.observe(t.desired_goal.positions);
    goal_norm_.observe(t.next_achieved_goal.positions);
  }
}

Policy Agent::policy() const {
  Policy p;
  p.algorithm = cfg_.algorithm;
  p.actor = actor_;
  p.obs_norm = obs_norm_;
  p.goal_norm = goal_norm_;
  p.cfg = cfg_;
  return p;
}

double Agent::q_value(std::span<const double> observation, std::span<const double> goal,
                      std::span<const double> action) {
  std::vector<double> input;
  normalized_input(observation, goal, input);
  input.insert(input.end(), action.begin(), action.end());
  return critics_[0].forward(input, critic_ws_[0])[0];
}

std::vector<std::string> Agent::network_names() const {
  std::vector<std::string> names{"actor"};
  if (cfg_.algorithm != Algorithm::sac) names.push_back("actor_target");
  for (std::size_t c = 0; c < critics_.size(); ++c) {
    names.push_back("critic" + std::to_string(c + 1));
    names.push_back("critic" + std::to_string(c + 1) + "_target");
  }
  return names;
}

nn::Mlp& Agent::network(const std::string& name) {
  if (name == "actor") return actor_;
  if (name == "actor_target" && cfg_.algorithm != Algorithm::sac) return actor_target_;
  for (std::size_t c = 0; c < critics_.size(); ++c) {
    if (name == "critic" + std::to_string(c + 1)) return critics_[c];
    if (name == "critic" + std::to_string(c + 1) + "_target") return critic_targets_[c];
  }
  throw std::invalid_argument("unknown network: " + name);
}

namespace {

nlohmann::json config_to_json(const AgentConfig& cfg) {
  return nlohmann::json{{"algorithm", to_string(cfg.algorithm)},
                        {"gamma", cfg.gamma},
                        {"tau", cfg.tau},
                        {"lr", cfg.lr},
                        {"random_action_prob", cfg.random_action_prob},
                        {"gaussian_noise_scale", cfg.gaussian_noise_scale},
                        {"policy_delay", cfg.policy_delay},
                        {"policy_noise", cfg.policy_noise},
                        {"policy_noise_clip", cfg.policy_noise_clip},
                        {"alpha", cfg.alpha},
                        {"action_l2", cfg.action_l2},
                        {"obs_clip", cfg.obs_clip},
                        {"norm_clip", cfg.norm_clip},
                        {"clipped_double_q", cfg.clipped_double_q},
                        {"normalize_inputs", cfg.normalize_inputs},
                        {"clip_return", cfg.clip_return},
                        {"target_sync_every", cfg.target_sync_every},
                        {"batch_size", cfg.batch_size},
                        {"hidden_units", cfg.hidden_units},
                        {"hidden_layers", cfg.hidden_layers}};
}

AgentConfig config_from_json(const nlohmann::json& j) {
  AgentConfig cfg;
  cfg.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
  cfg.gamma = j.at("gamma");
  cfg.tau = j.at("tau");
  cfg.lr = j.at("lr");
  cfg.random_action_prob = j.at("random_action_prob");
  cfg.gaussian_noise_scale = j.at("gaussian_noise_scale");
  cfg.policy_delay = j.at("policy_delay");
  cfg.policy_noise = j.at("policy_noise");
  cfg.policy_noise_clip = j.at("policy_noise_clip");
  cfg.alpha = j.at("alpha");
  cfg.action_l2 = j.at("action_l2");
  cfg.obs_clip = j.at("obs_clip");
  cfg.norm_clip = j.at("norm_clip");
  cfg.clipped_double_q = j.at("clipped_double_q");
  cfg.normalize_inputs = j.at("normalize_inputs");
  cfg.clip_return = j.at("clip_return");
  cfg.target_sync_every = j.at("target_sync_every");
  cfg.batch_size = j.at("batch_size");
  cfg.hidden_units = j.at("hidden_units");
  cfg.hidden_layers = j.at("hidden_layers");
  return cfg;
}

nlohmann::json normalizer_to_json(const Normalizer& n) {
  return nlohmann::json{
      {"count", n.count()}, {"mean", n.raw_mean()}, {"m2", n.raw_m2()}};
}

constexpr char kAgentMagic[8] = {'P', 'R', 'L', 'A', 'G', 'T', '0', '1'};

}  // namespace

void Agent::save_checkpoint(const std::string& path, const std::string& env_name,
                            bool dense_reward) const {
  nlohmann::json header{
      {"version", 1},
      {"env", env_name},
      {"dense", dense_reward},
      {"dims",
       {{"obs_dim", dims_.obs_dim},
        {"goal_dim", dims_.goal_dim},
        {"action_dim", dims_.action_dim},
        {"episode_length", dims_.episode_length}}},
      {"config", config_to_json(cfg_)},
      {"normalizers",
       {{"obs", normalizer_to_json(obs_norm_)}, {"goal", normalizer_to_json(goal_norm_)}}},
      {"networks", network_names()},
      {"total_updates", total_updates_},
      {"actor_updates", actor_updates_},
  };
  const std::string header_str = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out.write(kAgentMagic, sizeof(kAgentMagic));
  const std::uint64_t len = header_str.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));

  std::vector<nn::NamedNet> nets;
  Agent& self = const_cast<Agent&>(*this);
  for (const std::string& name : network_names()) {
    nets.push_back({name, &self.network(name)});
  }
  nn::save_networks(out, nets);
}

LoadedAgent Agent::load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kAgentMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("load_checkpoint: bad magic in " + path);
  }
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  std::string header_str(len, '\0');
  in.read(header_str.data(), static_cast<std::streamsize>(len));
  if (!in) throw std::runtime_error("load_checkpoint: truncated header");
  const nlohmann::json header = nlohmann::json::parse(header_str);

  env::EnvSpec dims;
  dims.obs_dim = header.at("dims").at("obs_dim");
  dims.goal_dim = header.at("dims").at("goal_dim");
  dims.action_dim = header.at("dims").at("action_dim");
  dims.episode_length = header.at("dims").at("episode_length");
  const AgentConfig cfg = config_from_json(header.at("config"));

  LoadedAgent loaded{Agent(dims, cfg, 0), header.at("env").get<std::string>(),
                header.at("dense").get<bool>()};
  Agent& agent = loaded.agent;

  const auto& obs_n = header.at("normalizers").at("obs");
  agent.obs_norm_.restore(obs_n.at("count"), obs_n.at("mean").get<std::vector<double>>(),
                          obs_n.at("m2").get<std::vector<double>>());
  const auto& goal_n = header.at("normalizers").at("goal");
  agent.goal_norm_.restore(goal_n.at("count"), goal_n.at("mean").get<std::vector<double>>(),
                           goal_n.at("m2").get<std::vector<double>>());
  agent.total_updates_ = header.at("total_updates");
  agent.actor_updates_ = header.at("actor_updates");

  auto nets = nn::load_networks(in);
  const auto expected = header.at("networks").get<std::vector<std::string>>();
  if (nets.size() != expected.size()) {
    throw std::runtime_error("load_checkpoint: network count mismatch");
  }
  for (auto& [name, net] : nets) {
    nn::Mlp& dst = agent.network(name);
    if (dst.dims() != net.dims()) {
      throw std::runtime_error("load_checkpoint: shape mismatch for " + name);
    }
    dst = std::move(net);
  }
  return loaded;
}

}  // namespace pandarl::rl
