#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "pandarl/nn/mat.hpp"
#include "pandarl/rng.hpp"
#include "pandarl/sim/task.hpp"

namespace pandarl::rl {

struct Transition {
  std::vector<double> obs;
  std::vector<double> action;
  double reward = 0.0;
  std::vector<double> next_obs;
  bool done = false;
  task::Goal achieved_goal;
  task::Goal next_achieved_goal;
  task::Goal desired_goal;
};

using Episode = std::vector<Transition>;

// Thrown when the buffer cannot yet serve a batch of the requested size.
class NotReadyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Batch-major sample, ready for matrix products.
struct Batch {
  int size = 0;
  nn::Mat obs;
  nn::Mat action;
  nn::Mat next_obs;
  nn::Mat achieved;       // achieved goal at obs
  nn::Mat next_achieved;  // achieved goal at next_obs
  nn::Mat desired;
  std::vector<double> reward;
  std::vector<std::uint8_t> done;
};

// FIFO ring of transitions grouped-at-insert by episode. With HER enabled,
// store_episode adds k extra copies of every transition whose goal is
// replaced by an achieved goal from the same episode at the same or a later
// index (future strategy) and whose reward is recomputed accordingly.
class ReplayBuffer {
 public:
  using RewardFn = std::function<double(const task::Goal& achieved, const task::Goal& desired)>;

  ReplayBuffer(int obs_dim, int action_dim, int goal_dim, std::size_t capacity,
               RewardFn reward_fn, int her_k = 4, bool her_enabled = true);

  void store_episode(const Episode& episode, Rng& rng);

  // n uniform draws with replacement. Throws NotReadyError while size() < n.
  const Batch& sample_batch(int n, Rng& rng);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  int her_k() const { return her_k_; }
  bool her_enabled() const { return her_enabled_; }

  // i-th stored transition from oldest to newest (test introspection).
  Transition transition(std::size_t i) const;

 private:
  void push(const Transition& t, const task::Goal& desired, double reward);
  std::size_t slot(std::size_t logical) const;

  int obs_dim_;
  int action_dim_;
  int goal_dim_;
  std::size_t capacity_;
  RewardFn reward_fn_;
  int her_k_;
  bool her_enabled_;

  std::size_t head_ = 0;  // next slot to write
  std::size_t size_ = 0;

  std::vector<double> obs_;
  std::vector<double> action_;
  std::vector<double> next_obs_;
  std::vector<double> achieved_;
  std::vector<double> next_achieved_;
  std::vector<double> desired_;
  std::vector<double> reward_;
  std::vector<std::uint8_t> done_;

  Batch batch_;
};

}  // namespace pandarl::rl
