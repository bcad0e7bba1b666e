#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pandarl/math.hpp"

namespace pandarl::sim {

// One agent interaction advances the world by kSubsteps * kSubDt = 40 ms,
// i.e. 25 control steps per simulated second.
inline constexpr int kSubsteps = 20;
inline constexpr double kSubDt = 0.002;
inline constexpr double kControlDt = kSubsteps * kSubDt;

inline constexpr double kGravity = 9.81;
inline constexpr double kTableHeight = 0.0;
// Sliding friction is per material: the puck glides (that is the point of
// the slide task), the rubber-faced cube grips and stops where pushed.
inline constexpr double kPuckFrictionMu = 0.1;
inline constexpr double kCubeFrictionMu = 0.5;
inline constexpr double kMaxFingerOpening = 0.08;

inline constexpr double kCubeEdge = 0.04;
inline constexpr double kPuckRadius = 0.03;
inline constexpr double kPuckHeight = 0.02;

// Effective lateral radius and vertical half-extent of the closed finger
// assembly for push contacts (two finger bodies plus their spacing).
inline constexpr double kGripperRadius = 0.015;
inline constexpr double kGripperHalfHeight = 0.01;

// Grasp tolerances: the fingers must straddle the object this closely while
// closing past its width for an attachment to form.
inline constexpr double kGraspMaxHorizontal = 0.01;
inline constexpr double kGraspMaxVertical = 0.015;

// A cube rests on another cube only if the horizontal center offset is
// below this; otherwise it falls through to the table.
inline constexpr double kStackSupportOffset = 0.02;

inline constexpr Vec3 kWorkspaceLo{-0.30, -0.30, 0.0};
inline constexpr Vec3 kWorkspaceHi{0.30, 0.30, 0.30};
inline constexpr Vec3 kNeutralGripperPos{0.0, 0.0, 0.10};

enum class ShapeKind { cube, puck };

enum class ColorTag { red, green, blue };

struct ObjectShape {
  ShapeKind kind = ShapeKind::cube;

  constexpr bool operator==(const ObjectShape&) const = default;

  static constexpr ObjectShape make_cube() { return {ShapeKind::cube}; }
  static constexpr ObjectShape make_puck() { return {ShapeKind::puck}; }

  constexpr double half_height() const {
    return kind == ShapeKind::cube ? kCubeEdge / 2.0 : kPuckHeight / 2.0;
  }
  // Lateral extent presented to a pushing gripper; a cube counts corner
  // contacts, so its footprint is the circumscribed circle.
  constexpr double lateral_radius() const {
    return kind == ShapeKind::cube ? kCubeEdge * 0.70710678118654752 : kPuckRadius;
  }
  // Distance the fingers must close below to pinch the object.
  constexpr double grasp_width() const {
    return kind == ShapeKind::cube ? kCubeEdge : 2.0 * kPuckRadius;
  }
  constexpr double friction_mu() const {
    return kind == ShapeKind::cube ? kCubeFrictionMu : kPuckFrictionMu;
  }
};

struct ObjectState {
  Vec3 pos;
  Vec3 orient;   // XYZ Euler angles, radians
  Vec3 lin_vel;
  Vec3 ang_vel;
  ObjectShape shape;
  ColorTag color = ColorTag::blue;

  bool operator==(const ObjectState&) const = default;
};

struct WorldState {
  double time = 0.0;
  Vec3 gripper_pos = kNeutralGripperPos;
  Vec3 gripper_vel;
  double finger_opening = 0.0;
  std::vector<ObjectState> objects;
  std::optional<std::size_t> attached;
  // Grip point of the attached object relative to the gripper, frozen at
  // attach time.
  Vec3 attach_offset;

  bool operator==(const WorldState&) const = default;
};

double distance(const Vec3& a, const Vec3& b);

// Runs one 40 ms control step: 20 semi-implicit Euler substeps of 2 ms.
// The gripper tracks a straight line toward gripper_pos + gripper_cmd
// (clipped to the workspace box) and the fingers toward
// finger_opening + finger_cmd (clamped to [0, 0.08]). Free objects fall
// under gravity, land inelastically, decelerate under sliding friction
// (mu*g) while on a support, and are displaced quasi-statically when the
// closed gripper sweeps into them. An attached object tracks the gripper
// rigidly. Grasping happens when the fingers close past the object's width
// while straddling it; opening past the width detaches.
//
// Throws std::invalid_argument when a command component is not finite.
WorldState advance(const WorldState& world, const Vec3& gripper_cmd, double finger_cmd);

}  // namespace pandarl::sim
