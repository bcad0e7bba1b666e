#pragma once

#include <span>
#include <vector>

#include "pandarl/sim/world.hpp"

namespace pandarl::robot {

struct RobotConfig {
  bool block_gripper = false;
  double displacement_scale = 0.05;  // meters per control step at |action| = 1
  double finger_scale = 0.02;        // opening change per control step at |action| = 1
  Vec3 neutral_pos = sim::kNeutralGripperPos;

  int action_dim() const { return block_gripper ? 3 : 4; }
  int obs_dim() const { return block_gripper ? 6 : 7; }
};

// Scales an agent action in [-1,1]^n into physical commands and advances the
// world one control step. Components are clipped to [-1,1] first, so passing
// an unclipped action is equivalent to passing its clipped form.
// Throws std::invalid_argument when the action dimension is wrong.
sim::WorldState apply_action(const sim::WorldState& world, const RobotConfig& cfg,
                             std::span<const double> action);

// [gripper_pos, gripper_vel] plus the finger opening when the gripper is not
// blocked; length 6 or 7.
std::vector<double> robot_observation(const sim::WorldState& world, const RobotConfig& cfg);

// Gripper to the neutral pose at rest; fingers closed when blocked, fully
// open otherwise.
sim::WorldState reset_robot(const sim::WorldState& world, const RobotConfig& cfg);

}  // namespace pandarl::robot
