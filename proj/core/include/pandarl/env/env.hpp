#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pandarl/rng.hpp"
#include "pandarl/sim/robot.hpp"
#include "pandarl/sim/task.hpp"
#include "pandarl/sim/world.hpp"

namespace pandarl::env {

// The robot half of the robot/task composition. Any implementation can be
// paired with any task; the environment only relies on this surface.
class RobotBase {
 public:
  virtual ~RobotBase() = default;
  virtual int action_dim() const = 0;
  virtual int obs_dim() const = 0;
  virtual sim::WorldState reset(const sim::WorldState& world) const = 0;
  virtual sim::WorldState apply(const sim::WorldState& world,
                                std::span<const double> action) const = 0;
  virtual std::vector<double> observation(const sim::WorldState& world) const = 0;
};

class PandaRobot final : public RobotBase {
 public:
  explicit PandaRobot(robot::RobotConfig cfg) : cfg_(cfg) {}

  int action_dim() const override { return cfg_.action_dim(); }
  int obs_dim() const override { return cfg_.obs_dim(); }
  sim::WorldState reset(const sim::WorldState& world) const override {
    return robot::reset_robot(world, cfg_);
  }
  sim::WorldState apply(const sim::WorldState& world,
                        std::span<const double> action) const override {
    return robot::apply_action(world, cfg_, action);
  }
  std::vector<double> observation(const sim::WorldState& world) const override {
    return robot::robot_observation(world, cfg_);
  }

 private:
  robot::RobotConfig cfg_;
};

struct GoalObservation {
  std::vector<double> observation;  // robot slice ++ task slice
  task::Goal achieved_goal;
  task::Goal desired_goal;

  bool operator==(const GoalObservation&) const = default;
};

struct StepResult {
  GoalObservation obs;
  double reward = 0.0;
  bool terminated = false;  // time limit only; episodes have fixed length
  bool is_success = false;
};

struct EnvSpec {
  int obs_dim = 0;
  int goal_dim = 0;
  int action_dim = 0;
  int episode_length = 0;
};

class Env {
 public:
  Env(task::TaskSpec spec, std::unique_ptr<RobotBase> robot, std::uint64_t seed = 0);

  // Starts a fresh episode: robot reset, task reset, new goal. Optionally
  // reseeds the episode stream.
  GoalObservation reset();
  GoalObservation reset(std::uint64_t seed);

  // One 40 ms control step. The action is clipped to [-1,1] before use.
  // Throws std::logic_error when called after termination without a reset,
  // std::invalid_argument on a wrong action dimension.
  StepResult step(std::span<const double> action);

  EnvSpec env_spec() const;

  const task::TaskSpec& task_spec() const { return task_; }
  const sim::WorldState& world() const { return world_; }
  const task::Goal& desired_goal() const { return desired_; }
  int steps_taken() const { return step_count_; }

  // Replaces the episode goal; intended for scripted tests and demos.
  void set_desired_goal(task::Goal goal);

 private:
  GoalObservation observe() const;

  task::TaskSpec task_;
  std::unique_ptr<RobotBase> robot_;
  sim::WorldState world_;
  task::Goal desired_;
  Rng rng_;
  int step_count_ = 0;
  bool needs_reset_ = true;
};

// Environment names: PandaReach-v1, PandaPush-v1, PandaSlide-v1,
// PandaPickAndPlace-v1, PandaStack-v1. Throws std::invalid_argument for
// anything else.
Env make_env(const std::string& name, bool dense = false, std::uint64_t seed = 0);

task::TaskName task_name_from_env_name(const std::string& name);
std::string env_name(task::TaskName name);

}  // namespace pandarl::env
