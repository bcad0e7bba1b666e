#pragma once

#include <string>
#include <vector>

#include "pandarl/rng.hpp"
#include "pandarl/sim/world.hpp"

namespace pandarl::task {

enum class TaskName { reach, push, slide, pick_and_place, stack };

enum class RewardMode { sparse, dense };

// An entity is at its target when strictly closer than this.
inline constexpr double kSuccessThreshold = 0.05;

// Objects spawn uniformly in this square around the neutral position.
inline constexpr double kSpawnHalfExtent = 0.15;
inline constexpr double kMinSpawnSeparation = 0.05;

// Stack: the upper target sits one cube edge above the lower one.
inline constexpr double kStackGoalLift = sim::kCubeEdge;

struct Box {
  Vec3 lo;
  Vec3 hi;
  bool contains(const Vec3& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z &&
           p.z <= hi.z;
  }
};

struct TaskSpec {
  TaskName name = TaskName::reach;
  int n_objects = 0;
  bool block_gripper = true;
  int goal_dim = 3;
  int episode_length = 50;
  RewardMode reward_mode = RewardMode::sparse;

  int observation_dim() const { return 12 * n_objects; }
};

// One target point, or two for Stack (lower target first).
struct Goal {
  std::vector<double> positions;

  int dim() const { return static_cast<int>(positions.size()); }
  Vec3 point(int i) const {
    return {positions[3 * i], positions[3 * i + 1], positions[3 * i + 2]};
  }
  static Goal from_points(const std::vector<Vec3>& pts) {
    Goal g;
    for (const Vec3& p : pts) {
      g.positions.push_back(p.x);
      g.positions.push_back(p.y);
      g.positions.push_back(p.z);
    }
    return g;
  }
  bool operator==(const Goal&) const = default;
};

TaskSpec task_spec(TaskName name, RewardMode mode = RewardMode::sparse);

// The sampling volume of the (first) target point.
Box goal_volume(TaskName name);

Goal sample_goal(const TaskSpec& spec, Rng& rng);

// Places the task's objects at rest on the table inside the spawn square;
// Stack resamples until the two cubes are at least kMinSpawnSeparation apart.
sim::WorldState reset_task(const TaskSpec& spec, const sim::WorldState& world, Rng& rng);

Goal achieved_goal(const TaskSpec& spec, const sim::WorldState& world);

// True iff every target point is strictly within kSuccessThreshold.
bool is_success(const TaskSpec& spec, const Goal& achieved, const Goal& desired);

// Sparse: 0 on success, -1 otherwise. Dense: negative Euclidean distance in
// goal space (for Stack this is -sqrt(d1^2 + d2^2) over the two cubes).
double compute_reward(const TaskSpec& spec, const Goal& achieved, const Goal& desired);

// [pos, orient, lin_vel, ang_vel] per object in index order; empty for Reach.
std::vector<double> task_observation(const TaskSpec& spec, const sim::WorldState& world);

std::string to_string(TaskName name);

}  // namespace pandarl::task
