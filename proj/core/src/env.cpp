#include "pandarl/env/env.hpp"

#include <stdexcept>
#include <utility>

namespace pandarl::env {

Env::Env(task::TaskSpec spec, std::unique_ptr<RobotBase> robot, std::uint64_t seed)
    : task_(spec), robot_(std::move(robot)), rng_(seed) {}

GoalObservation Env::reset() {
  world_ = robot_->reset(world_);
  world_ = task::reset_task(task_, world_, rng_);
  desired_ = task::sample_goal(task_, rng_);
  step_count_ = 0;
  needs_reset_ = false;
  return observe();
}

GoalObservation Env::reset(std::uint64_t seed) {
  rng_.reseed(seed);
  return reset();
}

StepResult Env::step(std::span<const double> action) {
  if (needs_reset_) {
    throw std::logic_error("step: episode is over, call reset() first");
  }
  std::vector<double> clipped(action.begin(), action.end());
  for (double& a : clipped) a = clamp(a, -1.0, 1.0);
  world_ = robot_->apply(world_, clipped);
  ++step_count_;

  StepResult result;
  result.obs = observe();
  result.reward = task::compute_reward(task_, result.obs.achieved_goal, desired_);
  result.terminated = step_count_ >= task_.episode_length;
  result.is_success = task::is_success(task_, result.obs.achieved_goal, desired_);
  if (result.terminated) needs_reset_ = true;
  return result;
}

EnvSpec Env::env_spec() const {
  return EnvSpec{robot_->obs_dim() + task_.observation_dim(), task_.goal_dim,
                 robot_->action_dim(), task_.episode_length};
}

void Env::set_desired_goal(task::Goal goal) {
  if (goal.dim() != task_.goal_dim) {
    throw std::invalid_argument("set_desired_goal: wrong goal dimension");
  }
  desired_ = std::move(goal);
}

GoalObservation Env::observe() const {
  GoalObservation obs;
  obs.observation = robot_->observation(world_);
  const std::vector<double> task_slice = task::task_observation(task_, world_);
  obs.observation.insert(obs.observation.end(), task_slice.begin(), task_slice.end());
  obs.achieved_goal = task::achieved_goal(task_, world_);
  obs.desired_goal = desired_;
  return obs;
}

task::TaskName task_name_from_env_name(const std::string& name) {
  if (name == "PandaReach-v1") return task::TaskName::reach;
  if (name == "PandaPush-v1") return task::TaskName::push;
  if (name == "PandaSlide-v1") return task::TaskName::slide;
  if (name == "PandaPickAndPlace-v1") return task::TaskName::pick_and_place;
  if (name == "PandaStack-v1") return task::TaskName::stack;
  throw std::invalid_argument("unknown environment name: " + name);
}

std::string env_name(task::TaskName name) {
  return "Panda" + task::to_string(name) + "-v1";
}

Env make_env(const std::string& name, bool dense, std::uint64_t seed) {
  const task::TaskName task_name = task_name_from_env_name(name);
  const task::TaskSpec spec =
      task::task_spec(task_name, dense ? task::RewardMode::dense : task::RewardMode::sparse);
  robot::RobotConfig cfg;
  cfg.block_gripper = spec.block_gripper;
  return Env(spec, std::make_unique<PandaRobot>(cfg), seed);
}

}  // namespace pandarl::env
