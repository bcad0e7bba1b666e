#include "pandarl/sim/robot.hpp"

#include <stdexcept>

namespace pandarl::robot {

sim::WorldState apply_action(const sim::WorldState& world, const RobotConfig& cfg,
                             std::span<const double> action) {
  if (static_cast<int>(action.size()) != cfg.action_dim()) {
    throw std::invalid_argument("apply_action: expected action dimension " +
                                std::to_string(cfg.action_dim()) + ", got " +
                                std::to_string(action.size()));
  }
  const Vec3 gripper_cmd{clamp(action[0], -1.0, 1.0) * cfg.displacement_scale,
                         clamp(action[1], -1.0, 1.0) * cfg.displacement_scale,
                         clamp(action[2], -1.0, 1.0) * cfg.displacement_scale};
  const double finger_cmd =
      cfg.block_gripper ? 0.0 : clamp(action[3], -1.0, 1.0) * cfg.finger_scale;
  return sim::advance(world, gripper_cmd, finger_cmd);
}

std::vector<double> robot_observation(const sim::WorldState& world, const RobotConfig& cfg) {
  std::vector<double> obs = {world.gripper_pos.x, world.gripper_pos.y, world.gripper_pos.z,
                             world.gripper_vel.x, world.gripper_vel.y, world.gripper_vel.z};
  if (!cfg.block_gripper) obs.push_back(world.finger_opening);
  return obs;
}

sim::WorldState reset_robot(const sim::WorldState& world, const RobotConfig& cfg) {
  sim::WorldState w = world;
  w.gripper_pos = cfg.neutral_pos;
  w.gripper_vel = Vec3{};
  w.finger_opening = cfg.block_gripper ? 0.0 : sim::kMaxFingerOpening;
  w.attached.reset();
  return w;
}

}  // namespace pandarl::robot
