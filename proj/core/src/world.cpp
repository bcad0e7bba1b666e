#include "pandarl/sim/world.hpp"

#include <cmath>
#include <stdexcept>

namespace pandarl::sim {

namespace {

constexpr double kRestTol = 1e-9;

// Height at which object i comes to rest: the table, or the top of another
// object whose center is horizontally within kStackSupportOffset and whose
// top is not above the object itself.
double resting_height(const WorldState& w, std::size_t i) {
  const ObjectState& obj = w.objects[i];
  double rest = kTableHeight + obj.shape.half_height();
  for (std::size_t j = 0; j < w.objects.size(); ++j) {
    if (j == i) continue;
    const ObjectState& other = w.objects[j];
    if (horizontal_distance(obj.pos, other.pos) >= kStackSupportOffset) continue;
    const double candidate = other.pos.z + other.shape.half_height() + obj.shape.half_height();
    if (candidate <= obj.pos.z + kRestTol && candidate > rest) rest = candidate;
  }
  return rest;
}

void resolve_push(ObjectState& obj, const Vec3& gripper_pos, const Vec3& gripper_vel) {
  const double contact_r = kGripperRadius + obj.shape.lateral_radius();
  const double dx = obj.pos.x - gripper_pos.x;
  const double dy = obj.pos.y - gripper_pos.y;
  const double d = std::sqrt(dx * dx + dy * dy);
  double nx;
  double ny;
  if (d > 1e-12) {
    nx = dx / d;
    ny = dy / d;
  } else if (gripper_vel.horizontal_norm() > 1e-12) {
    const double s = gripper_vel.horizontal_norm();
    nx = gripper_vel.x / s;
    ny = gripper_vel.y / s;
  } else {
    nx = 1.0;
    ny = 0.0;
  }
  obj.pos.x = gripper_pos.x + nx * contact_r;
  obj.pos.y = gripper_pos.y + ny * contact_r;
  // Point contact: only the velocity component along the contact normal
  // transfers; a tangential sweep slides past without dragging.
  const double vn = std::max(0.0, gripper_vel.x * nx + gripper_vel.y * ny);
  obj.lin_vel.x = vn * nx;
  obj.lin_vel.y = vn * ny;
}

void integrate_object(ObjectState& obj, double rest_z) {
  if (obj.pos.z > rest_z + kRestTol) {
    // Free fall.
    obj.lin_vel.z -= kGravity * kSubDt;
    obj.pos += obj.lin_vel * kSubDt;
    obj.orient += obj.ang_vel * kSubDt;
    if (obj.pos.z <= rest_z) {
      // Inelastic landing: vertical velocity is absorbed, the remaining
      // horizontal velocity is handed to sliding friction.
      obj.pos.z = rest_z;
      obj.lin_vel.z = 0.0;
      obj.ang_vel = Vec3{};
    }
    return;
  }
  // Resting: sliding friction decelerates the horizontal velocity.
  obj.pos.z = rest_z;
  obj.lin_vel.z = 0.0;
  obj.ang_vel = Vec3{};
  const double speed = obj.lin_vel.horizontal_norm();
  const double decel = obj.shape.friction_mu() * kGravity * kSubDt;
  if (speed <= decel) {
    obj.lin_vel.x = 0.0;
    obj.lin_vel.y = 0.0;
  } else {
    const double scale = (speed - decel) / speed;
    obj.lin_vel.x *= scale;
    obj.lin_vel.y *= scale;
  }
  obj.pos.x += obj.lin_vel.x * kSubDt;
  obj.pos.y += obj.lin_vel.y * kSubDt;
}

}  // namespace

double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

WorldState advance(const WorldState& world, const Vec3& gripper_cmd, double finger_cmd) {
  if (!gripper_cmd.finite() || !std::isfinite(finger_cmd)) {
    throw std::invalid_argument("advance: non-finite command");
  }

  WorldState w = world;
  const Vec3 start = w.gripper_pos;
  const Vec3 target = clamp(start + gripper_cmd, kWorkspaceLo, kWorkspaceHi);
  const double f_start = w.finger_opening;
  const double f_target = clamp(f_start + finger_cmd, 0.0, kMaxFingerOpening);
  const Vec3 grip_vel = (target - start) / kControlDt;

  for (int k = 1; k <= kSubsteps; ++k) {
    const double frac = static_cast<double>(k) / kSubsteps;
    const double f_prev = w.finger_opening;
    w.gripper_pos = start + (target - start) * frac;
    w.finger_opening = f_start + (f_target - f_start) * frac;

    if (w.attached) {
      ObjectState& held = w.objects[*w.attached];
      held.pos = w.gripper_pos + w.attach_offset;
      // The table still blocks a held object dragged downward.
      held.pos.z = std::max(held.pos.z, kTableHeight + held.shape.half_height());
      held.lin_vel = grip_vel;
      held.ang_vel = Vec3{};
      if (w.finger_opening > held.shape.grasp_width()) {
        w.attached.reset();  // released; keeps the gripper's velocity
      }
    }

    for (std::size_t i = 0; i < w.objects.size(); ++i) {
      if (w.attached && *w.attached == i) continue;
      ObjectState& obj = w.objects[i];
      const double width = obj.shape.grasp_width();

      // >= on the previous opening so a substep landing exactly on the
      // width still counts as a crossing on the next one.
      if (!w.attached && f_prev >= width && w.finger_opening < width &&
          horizontal_distance(w.gripper_pos, obj.pos) < kGraspMaxHorizontal &&
          std::abs(w.gripper_pos.z - obj.pos.z) < kGraspMaxVertical) {
        w.attached = i;
        w.attach_offset = obj.pos - w.gripper_pos;
        obj.lin_vel = grip_vel;
        obj.ang_vel = Vec3{};
        continue;
      }

      // A closed (narrower-than-the-object) finger assembly is a solid
      // obstacle; open fingers straddle the object instead.
      if (w.finger_opening < width &&
          std::abs(w.gripper_pos.z - obj.pos.z) <
              obj.shape.half_height() + kGripperHalfHeight &&
          horizontal_distance(w.gripper_pos, obj.pos) <
              kGripperRadius + obj.shape.lateral_radius()) {
        resolve_push(obj, w.gripper_pos, grip_vel);
      }

      integrate_object(obj, resting_height(w, i));
    }
  }

  w.gripper_vel = grip_vel;
  w.time = world.time + kControlDt;
  return w;
}

}  // namespace pandarl::sim
