#include "pandarl/sim/task.hpp"

#include <cmath>
#include <stdexcept>

namespace pandarl::task {

namespace {

constexpr double kCubeHalf = sim::kCubeEdge / 2.0;
constexpr double kPuckHalf = sim::kPuckHeight / 2.0;

double object_half_height(TaskName name) {
  return name == TaskName::slide ? kPuckHalf : kCubeHalf;
}

Vec3 sample_in(const Box& box, Rng& rng) {
  return {rng.uniform(box.lo.x, box.hi.x), rng.uniform(box.lo.y, box.hi.y),
          rng.uniform(box.lo.z, box.hi.z)};
}

void check_goal_dims(const TaskSpec& spec, const Goal& achieved, const Goal& desired) {
  if (achieved.dim() != spec.goal_dim || desired.dim() != spec.goal_dim) {
    throw std::invalid_argument("goal dimension mismatch: task expects " +
                                std::to_string(spec.goal_dim));
  }
}

}  // namespace

TaskSpec task_spec(TaskName name, RewardMode mode) {
  TaskSpec spec;
  spec.name = name;
  spec.reward_mode = mode;
  switch (name) {
    case TaskName::reach:
      spec.n_objects = 0;
      spec.block_gripper = true;
      break;
    case TaskName::push:
    case TaskName::slide:
      spec.n_objects = 1;
      spec.block_gripper = true;
      break;
    case TaskName::pick_and_place:
      spec.n_objects = 1;
      spec.block_gripper = false;
      break;
    case TaskName::stack:
      spec.n_objects = 2;
      spec.block_gripper = false;
      spec.goal_dim = 6;
      spec.episode_length = 100;
      break;
  }
  return spec;
}

Box goal_volume(TaskName name) {
  switch (name) {
    case TaskName::reach:
      return {{-0.15, -0.15, 0.05}, {0.15, 0.15, 0.35}};
    case TaskName::push:
      return {{-0.15, -0.15, kCubeHalf}, {0.15, 0.15, kCubeHalf}};
    case TaskName::slide:
      // Beyond the 0.30 m workspace limit: reachable only by an impulse.
      return {{0.35, -0.25, kPuckHalf}, {0.85, 0.25, kPuckHalf}};
    case TaskName::pick_and_place:
      return {{-0.15, -0.15, 0.02}, {0.15, 0.15, 0.22}};
    case TaskName::stack:
      return {{-0.15, -0.15, kCubeHalf}, {0.15, 0.15, kCubeHalf}};
  }
  throw std::logic_error("unknown task");
}

Goal sample_goal(const TaskSpec& spec, Rng& rng) {
  const Box volume = goal_volume(spec.name);
  const Vec3 first = sample_in(volume, rng);
  if (spec.name != TaskName::stack) return Goal::from_points({first});
  return Goal::from_points({first, first + Vec3{0.0, 0.0, kStackGoalLift}});
}

sim::WorldState reset_task(const TaskSpec& spec, const sim::WorldState& world, Rng& rng) {
  sim::WorldState w = world;
  w.objects.clear();
  w.attached.reset();
  if (spec.n_objects == 0) return w;

  const double rest_z = sim::kTableHeight + object_half_height(spec.name);
  std::vector<Vec3> positions;
  for (int i = 0; i < spec.n_objects; ++i) {
    Vec3 p{rng.uniform(-kSpawnHalfExtent, kSpawnHalfExtent),
           rng.uniform(-kSpawnHalfExtent, kSpawnHalfExtent), rest_z};
    if (i == 1) {
      while (horizontal_distance(p, positions[0]) < kMinSpawnSeparation) {
        p.x = rng.uniform(-kSpawnHalfExtent, kSpawnHalfExtent);
        p.y = rng.uniform(-kSpawnHalfExtent, kSpawnHalfExtent);
      }
    }
    positions.push_back(p);
  }

  for (int i = 0; i < spec.n_objects; ++i) {
    sim::ObjectState obj;
    obj.pos = positions[i];
    obj.shape = spec.name == TaskName::slide ? sim::ObjectShape::make_puck()
                                             : sim::ObjectShape::make_cube();
    if (spec.name == TaskName::stack) {
      obj.color = i == 0 ? sim::ColorTag::red : sim::ColorTag::green;
    }
    w.objects.push_back(obj);
  }
  return w;
}

Goal achieved_goal(const TaskSpec& spec, const sim::WorldState& world) {
  switch (spec.name) {
    case TaskName::reach:
      return Goal::from_points({world.gripper_pos});
    case TaskName::push:
    case TaskName::slide:
    case TaskName::pick_and_place:
      return Goal::from_points({world.objects.at(0).pos});
    case TaskName::stack:
      // Red (lower-target) cube first.
      return Goal::from_points({world.objects.at(0).pos, world.objects.at(1).pos});
  }
  throw std::logic_error("unknown task");
}

bool is_success(const TaskSpec& spec, const Goal& achieved, const Goal& desired) {
  check_goal_dims(spec, achieved, desired);
  const int n_points = spec.goal_dim / 3;
  for (int i = 0; i < n_points; ++i) {
    if (sim::distance(achieved.point(i), desired.point(i)) >= kSuccessThreshold) return false;
  }
  return true;
}

double compute_reward(const TaskSpec& spec, const Goal& achieved, const Goal& desired) {
  check_goal_dims(spec, achieved, desired);
  if (spec.reward_mode == RewardMode::sparse) {
    return is_success(spec, achieved, desired) ? 0.0 : -1.0;
  }
  double sq = 0.0;
  for (int i = 0; i < spec.goal_dim; ++i) {
    const double d = achieved.positions[i] - desired.positions[i];
    sq += d * d;
  }
  return -std::sqrt(sq);
}

std::vector<double> task_observation(const TaskSpec& spec, const sim::WorldState& world) {
  std::vector<double> obs;
  obs.reserve(static_cast<std::size_t>(spec.observation_dim()));
  for (int i = 0; i < spec.n_objects; ++i) {
    const sim::ObjectState& o = world.objects.at(static_cast<std::size_t>(i));
    for (const Vec3* v : {&o.pos, &o.orient, &o.lin_vel, &o.ang_vel}) {
      obs.push_back(v->x);
      obs.push_back(v->y);
      obs.push_back(v->z);
    }
  }
  return obs;
}

std::string to_string(TaskName name) {
  switch (name) {
    case TaskName::reach: return "Reach";
    case TaskName::push: return "Push";
    case TaskName::slide: return "Slide";
    case TaskName::pick_and_place: return "PickAndPlace";
    case TaskName::stack: return "Stack";
  }
  return "?";
}

}  // namespace pandarl::task
