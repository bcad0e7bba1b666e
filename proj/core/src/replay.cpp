#include "pandarl/rl/replay.hpp"

#include <cstring>

namespace pandarl::rl {

namespace {

void copy_into(std::vector<double>& dst, std::size_t slot, int dim, const double* src) {
  std::memcpy(dst.data() + slot * static_cast<std::size_t>(dim), src,
              static_cast<std::size_t>(dim) * sizeof(double));
}

}  // namespace

ReplayBuffer::ReplayBuffer(int obs_dim, int action_dim, int goal_dim, std::size_t capacity,
                           RewardFn reward_fn, int her_k, bool her_enabled)
    : obs_dim_(obs_dim),
      action_dim_(action_dim),
      goal_dim_(goal_dim),
      capacity_(capacity),
      reward_fn_(std::move(reward_fn)),
      her_k_(her_k),
      her_enabled_(her_enabled) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
  obs_.resize(capacity * static_cast<std::size_t>(obs_dim));
  action_.resize(capacity * static_cast<std::size_t>(action_dim));
  next_obs_.resize(capacity * static_cast<std::size_t>(obs_dim));
  achieved_.resize(capacity * static_cast<std::size_t>(goal_dim));
  next_achieved_.resize(capacity * static_cast<std::size_t>(goal_dim));
  desired_.resize(capacity * static_cast<std::size_t>(goal_dim));
  reward_.resize(capacity);
  done_.resize(capacity);
}

void ReplayBuffer::push(const Transition& t, const task::Goal& desired, double reward) {
  copy_into(obs_, head_, obs_dim_, t.obs.data());
  copy_into(action_, head_, action_dim_, t.action.data());
  copy_into(next_obs_, head_, obs_dim_, t.next_obs.data());
  copy_into(achieved_, head_, goal_dim_, t.achieved_goal.positions.data());
  copy_into(next_achieved_, head_, goal_dim_, t.next_achieved_goal.positions.data());
  copy_into(desired_, head_, goal_dim_, desired.positions.data());
  reward_[head_] = reward;
  done_[head_] = t.done ? 1 : 0;
  head_ = (head_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

void ReplayBuffer::store_episode(const Episode& episode, Rng& rng) {
  if (episode.empty()) throw std::invalid_argument("store_episode: empty episode");
  const std::size_t horizon = episode.size();
  for (std::size_t t = 0; t < horizon; ++t) {
    const Transition& tr = episode[t];
    if (static_cast<int>(tr.obs.size()) != obs_dim_ ||
        static_cast<int>(tr.action.size()) != action_dim_ ||
        tr.desired_goal.dim() != goal_dim_) {
      throw std::invalid_argument("store_episode: transition dimension mismatch");
    }
    push(tr, tr.desired_goal, tr.reward);
    if (!her_enabled_) continue;
    for (int j = 0; j < her_k_; ++j) {
      // Future strategy: a goal achieved at this step or later in the episode.
      const std::size_t future = t + rng.uniform_index(horizon - t);
      const task::Goal& relabel = episode[future].next_achieved_goal;
      push(tr, relabel, reward_fn_(tr.next_achieved_goal, relabel));
    }
  }
}

std::size_t ReplayBuffer::slot(std::size_t logical) const {
  return (head_ + capacity_ - size_ + logical) % capacity_;
}

const Batch& ReplayBuffer::sample_batch(int n, Rng& rng) {
  if (size_ < static_cast<std::size_t>(n)) {
    throw NotReadyError("sample_batch: buffer holds " + std::to_string(size_) +
                        " transitions, need " + std::to_string(n));
  }
  Batch& b = batch_;
  b.size = n;
  b.obs.resize(n, obs_dim_);
  b.action.resize(n, action_dim_);
  b.next_obs.resize(n, obs_dim_);
  b.achieved.resize(n, goal_dim_);
  b.next_achieved.resize(n, goal_dim_);
  b.desired.resize(n, goal_dim_);
  b.reward.resize(static_cast<std::size_t>(n));
  b.done.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::size_t s = slot(rng.uniform_index(size_));
    std::memcpy(b.obs.row(i), obs_.data() + s * obs_dim_, obs_dim_ * sizeof(double));
    std::memcpy(b.action.row(i), action_.data() + s * action_dim_,
                action_dim_ * sizeof(double));
    std::memcpy(b.next_obs.row(i), next_obs_.data() + s * obs_dim_, obs_dim_ * sizeof(double));
    std::memcpy(b.achieved.row(i), achieved_.data() + s * goal_dim_,
                goal_dim_ * sizeof(double));
    std::memcpy(b.next_achieved.row(i), next_achieved_.data() + s * goal_dim_,
                goal_dim_ * sizeof(double));
    std::memcpy(b.desired.row(i), desired_.data() + s * goal_dim_, goal_dim_ * sizeof(double));
    b.reward[static_cast<std::size_t>(i)] = reward_[s];
    b.done[static_cast<std::size_t>(i)] = done_[s];
  }
  return batch_;
}

Transition ReplayBuffer::transition(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("ReplayBuffer::transition");
  const std::size_t s = slot(i);
  Transition t;
  t.obs.assign(obs_.begin() + s * obs_dim_, obs_.begin() + (s + 1) * obs_dim_);
  t.action.assign(action_.begin() + s * action_dim_, action_.begin() + (s + 1) * action_dim_);
  t.next_obs.assign(next_obs_.begin() + s * obs_dim_, next_obs_.begin() + (s + 1) * obs_dim_);
  t.achieved_goal.positions.assign(achieved_.begin() + s * goal_dim_,
                                   achieved_.begin() + (s + 1) * goal_dim_);
  t.next_achieved_goal.positions.assign(next_achieved_.begin() + s * goal_dim_,
                                        next_achieved_.begin() + (s + 1) * goal_dim_);
  t.desired_goal.positions.assign(desired_.begin() + s * goal_dim_,
                                  desired_.begin() + (s + 1) * goal_dim_);
  t.reward = reward_[s];
  t.done = done_[s] != 0;
  return t;
}

}  // namespace pandarl::rl
