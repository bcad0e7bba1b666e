#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pandarl/env/env.hpp"
#include "pandarl/rng.hpp"

using namespace pandarl;

namespace {

std::vector<double> zero_action(const env::Env& e) {
  return std::vector<double>(static_cast<std::size_t>(e.env_spec().action_dim), 0.0);
}

// Minimal alternative robot: jumps straight to the commanded offset. Used to
// check that any robot satisfying the interface composes with any task.
class TeleportRobot final : public env::RobotBase {
 public:
  int action_dim() const override { return 3; }
  int obs_dim() const override { return 3; }
  sim::WorldState reset(const sim::WorldState& world) const override {
    sim::WorldState w = world;
    w.gripper_pos = {0, 0, 0.1};
    w.gripper_vel = {};
    return w;
  }
  sim::WorldState apply(const sim::WorldState& world,
                        std::span<const double> action) const override {
    sim::WorldState w = world;
    w.gripper_pos += Vec3{action[0], action[1], action[2]} * 0.1;
    w.time += sim::kControlDt;
    return w;
  }
  std::vector<double> observation(const sim::WorldState& world) const override {
    return {world.gripper_pos.x, world.gripper_pos.y, world.gripper_pos.z};
  }
};

}  // namespace

TEST_SUITE("env.contract") {
  TEST_CASE("observation, goal, action and episode dimensions") {
    struct Expected {
      const char* name;
      int obs, goal, action, length;
    };
    const Expected table[] = {
        {"PandaReach-v1", 6, 3, 3, 50},        {"PandaPush-v1", 18, 3, 3, 50},
        {"PandaSlide-v1", 18, 3, 3, 50},       {"PandaPickAndPlace-v1", 19, 3, 4, 50},
        {"PandaStack-v1", 31, 6, 4, 100},
    };
    for (const Expected& row : table) {
      CAPTURE(row.name);
      env::Env e = env::make_env(row.name);
      const env::EnvSpec spec = e.env_spec();
      CHECK(spec.obs_dim == row.obs);
      CHECK(spec.goal_dim == row.goal);
      CHECK(spec.action_dim == row.action);
      CHECK(spec.episode_length == row.length);
      const env::GoalObservation obs = e.reset(1);
      CHECK(static_cast<int>(obs.observation.size()) == row.obs);
      CHECK(obs.achieved_goal.dim() == row.goal);
      CHECK(obs.desired_goal.dim() == row.goal);
    }
  }

  TEST_CASE("unknown names are rejected") {
    CHECK_THROWS_AS(env::make_env("PandaFly-v1"), std::invalid_argument);
  }

  TEST_CASE("same seed, same episode") {
    env::Env a = env::make_env("PandaPush-v1");
    env::Env b = env::make_env("PandaPush-v1");
    CHECK(a.reset(42) == b.reset(42));
    const std::vector<double> act{0.3, -0.2, 0.1};
    for (int t = 0; t < 10; ++t) {
      const env::StepResult ra = a.step(act);
      const env::StepResult rb = b.step(act);
      CHECK(ra.obs == rb.obs);
      CHECK(ra.reward == rb.reward);
    }
  }

  TEST_CASE("reach goals lie inside the sampling volume") {
    env::Env e = env::make_env("PandaReach-v1");
    const task::Box volume = task::goal_volume(task::TaskName::reach);
    for (std::uint64_t s = 0; s < 50; ++s) {
      const env::GoalObservation obs = e.reset(s);
      CHECK(volume.contains(obs.desired_goal.point(0)));
    }
  }
}

TEST_SUITE("env.step") {
  TEST_CASE("episodes have a fixed length and terminate exactly once") {
    for (const char* name : {"PandaPush-v1", "PandaStack-v1"}) {
      CAPTURE(name);
      env::Env e = env::make_env(name);
      e.reset(7);
      const int horizon = e.env_spec().episode_length;
      for (int t = 1; t <= horizon; ++t) {
        const env::StepResult r = e.step(zero_action(e));
        CHECK(r.terminated == (t == horizon));
      }
      CHECK_THROWS_AS(e.step(zero_action(e)), std::logic_error);
      e.reset();
      CHECK_NOTHROW(e.step(zero_action(e)));
    }
  }

  TEST_CASE("wrong action dimension is rejected") {
    env::Env e = env::make_env("PandaPush-v1");
    e.reset(1);
    const std::vector<double> bad{0.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(e.step(bad), std::invalid_argument);
  }

  TEST_CASE("desired goal is constant within an episode") {
    env::Env e = env::make_env("PandaPickAndPlace-v1");
    const env::GoalObservation first = e.reset(3);
    Rng rng(0);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> act(4);
      for (double& a : act) a = rng.uniform(-1.0, 1.0);
      const env::StepResult r = e.step(act);
      CHECK(r.obs.desired_goal == first.desired_goal);
    }
  }

  TEST_CASE("emitted reward is recomputable from the emitted goals") {
    for (bool dense : {false, true}) {
      CAPTURE(dense);
      env::Env e = env::make_env("PandaPush-v1", dense);
      e.reset(11);
      Rng rng(1);
      for (int t = 0; t < 50; ++t) {
        std::vector<double> act(3);
        for (double& a : act) a = rng.uniform(-1.0, 1.0);
        const env::StepResult r = e.step(act);
        const double recomputed =
            task::compute_reward(e.task_spec(), r.obs.achieved_goal, r.obs.desired_goal);
        CHECK(r.reward == recomputed);  // bitwise
      }
    }
  }

  TEST_CASE("a goal placed at the gripper makes the zero action a success") {
    env::Env e = env::make_env("PandaReach-v1");
    const env::GoalObservation obs = e.reset(5);
    e.set_desired_goal(obs.achieved_goal);
    const env::StepResult r = e.step(zero_action(e));
    CHECK(r.reward == 0.0);
    CHECK(r.is_success);
    CHECK_FALSE(r.terminated);  // success never ends the episode early
  }

  TEST_CASE("a straight-line controller solves reach within an episode") {
    env::Env e = env::make_env("PandaReach-v1");
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      env::GoalObservation obs = e.reset(seed);
      bool success = false;
      for (int t = 0; t < 50; ++t) {
        const Vec3 gripper{obs.observation[0], obs.observation[1], obs.observation[2]};
        const Vec3 goal = obs.desired_goal.point(0);
        const Vec3 delta = goal - gripper;
        const std::vector<double> act{clamp(delta.x / 0.05, -1.0, 1.0),
                                      clamp(delta.y / 0.05, -1.0, 1.0),
                                      clamp(delta.z / 0.05, -1.0, 1.0)};
        const env::StepResult r = e.step(act);
        success = r.is_success;
        obs = r.obs;
      }
      CHECK(success);
    }
  }

  TEST_CASE("dense variant emits negative distances") {
    env::Env e = env::make_env("PandaReach-v1", /*dense=*/true);
    e.reset(9);
    const env::StepResult r = e.step(zero_action(e));
    CHECK(r.reward < 0.0);
    CHECK(r.reward ==
          doctest::Approx(-sim::distance(r.obs.achieved_goal.point(0),
                                         r.obs.desired_goal.point(0))).epsilon(1e-12));
  }
}

TEST_SUITE("env.modularity") {
  TEST_CASE("any robot satisfying the interface composes with a task") {
    env::Env e(task::task_spec(task::TaskName::push), std::make_unique<TeleportRobot>(), 0);
    const env::EnvSpec spec = e.env_spec();
    CHECK(spec.obs_dim == 3 + 12);
    CHECK(spec.action_dim == 3);
    const env::GoalObservation obs = e.reset(1);
    CHECK(obs.observation.size() == 15);
    const env::StepResult r = e.step(std::vector<double>{1.0, 0.0, 0.0});
    CHECK(r.obs.observation[0] == doctest::Approx(0.1));
  }
}
