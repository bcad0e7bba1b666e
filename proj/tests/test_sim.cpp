#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pandarl/rng.hpp"
#include "pandarl/sim/robot.hpp"
#include "pandarl/sim/task.hpp"
#include "pandarl/sim/world.hpp"

using namespace pandarl;
using sim::WorldState;

namespace {

WorldState world_with_cube(const Vec3& pos, const Vec3& vel = {}) {
  WorldState w;
  sim::ObjectState cube;
  cube.pos = pos;
  cube.lin_vel = vel;
  cube.shape = sim::ObjectShape::make_cube();
  w.objects.push_back(cube);
  return w;
}

WorldState world_with_puck(const Vec3& pos, const Vec3& vel = {}) {
  WorldState w;
  sim::ObjectState puck;
  puck.pos = pos;
  puck.lin_vel = vel;
  puck.shape = sim::ObjectShape::make_puck();
  w.objects.push_back(puck);
  return w;
}

}  // namespace

TEST_SUITE("sim.distance") {
  TEST_CASE("identity") { CHECK(sim::distance({0, 0, 0}, {0, 0, 0}) == 0.0); }
  TEST_CASE("3-4-5 triangle") {
    CHECK(sim::distance({0.03, 0.04, 0}, {0, 0, 0}) == doctest::Approx(0.05).epsilon(1e-12));
  }
  TEST_CASE("single axis") {
    CHECK(sim::distance({1, 2, 3}, {1, 2, 3.1}) == doctest::Approx(0.1).epsilon(1e-12));
  }
}

TEST_SUITE("sim.advance") {
  TEST_CASE("free fall accumulates one control step of gravity") {
    WorldState w = world_with_cube({0.1, 0.0, 0.2});
    const WorldState after = sim::advance(w, {0, 0, 0}, 0.0);
    // Independent substep integration of the same schedule.
    double expect_v = 0.0;
    for (int k = 0; k < sim::kSubsteps; ++k) expect_v -= sim::kGravity * sim::kSubDt;
    CHECK(after.objects[0].lin_vel.z == doctest::Approx(expect_v).epsilon(1e-12));
    CHECK(after.objects[0].lin_vel.z == doctest::Approx(-0.3924).epsilon(1e-9));
    CHECK(after.objects[0].pos.z < 0.2);
    CHECK(after.objects[0].pos.z > sim::kCubeEdge / 2.0);
  }

  TEST_CASE("resting cube is unchanged except time") {
    WorldState w = world_with_cube({0.1, -0.05, sim::kCubeEdge / 2.0});
    w.gripper_pos = {-0.2, 0.2, 0.25};
    const WorldState after = sim::advance(w, {0, 0, 0}, 0.0);
    CHECK(after.time == doctest::Approx(w.time + 0.04).epsilon(1e-15));
    CHECK(after.objects[0] == w.objects[0]);
    CHECK(after.gripper_pos == w.gripper_pos);
    CHECK(after.finger_opening == w.finger_opening);
  }

  TEST_CASE("attached object tracks the realized gripper displacement") {
    WorldState w = world_with_cube({0.005, 0.0, 0.1});
    w.gripper_pos = {0.0, 0.0, 0.1};
    w.finger_opening = 0.03;
    w.attached = 0;
    w.attach_offset = w.objects[0].pos - w.gripper_pos;
    const WorldState after = sim::advance(w, {0.05, 0, 0}, 0.0);
    const double gripper_dx = after.gripper_pos.x - w.gripper_pos.x;
    CHECK(gripper_dx == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(after.objects[0].pos.x - w.objects[0].pos.x ==
          doctest::Approx(gripper_dx).epsilon(1e-12));
    CHECK(after.attached == 0);
  }

  TEST_CASE("sliding puck decelerates by mu*g, hand-integrated oracle") {
    WorldState w = world_with_puck({0.0, 0.0, sim::kPuckHeight / 2.0}, {0.5, 0.0, 0.0});
    w.gripper_pos = {-0.25, 0.25, 0.25};  // far away
    const WorldState after = sim::advance(w, {0, 0, 0}, 0.0);
    double v = 0.5;
    for (int k = 0; k < sim::kSubsteps; ++k) {
      v -= sim::kPuckFrictionMu * sim::kGravity * sim::kSubDt;
    }
    CHECK(v == doctest::Approx(0.46076).epsilon(1e-9));
    CHECK(after.objects[0].lin_vel.x == doctest::Approx(v).epsilon(1e-12));
    CHECK(after.objects[0].lin_vel.y == 0.0);
    CHECK(after.objects[0].pos.x > 0.0);
  }

  TEST_CASE("a sliding cube grips the table harder than the puck") {
    WorldState w = world_with_cube({0.0, 0.0, sim::kCubeEdge / 2.0}, {0.5, 0.0, 0.0});
    w.gripper_pos = {-0.25, 0.25, 0.25};
    const WorldState after = sim::advance(w, {0, 0, 0}, 0.0);
    double v = 0.5;
    for (int k = 0; k < sim::kSubsteps; ++k) {
      v -= sim::kCubeFrictionMu * sim::kGravity * sim::kSubDt;
    }
    CHECK(after.objects[0].lin_vel.x == doctest::Approx(v).epsilon(1e-12));
    CHECK(after.objects[0].lin_vel.x < 0.5 - sim::kPuckFrictionMu * sim::kGravity * 0.04);
  }

  TEST_CASE("puck slides to rest and stays") {
    WorldState w = world_with_puck({0.0, 0.0, sim::kPuckHeight / 2.0}, {0.1, 0.0, 0.0});
    w.gripper_pos = {-0.25, 0.25, 0.25};
    // 0.1 / 0.981 m/s^2 ~ 0.102 s ~ 3 control steps.
    for (int i = 0; i < 5; ++i) w = sim::advance(w, {0, 0, 0}, 0.0);
    CHECK(w.objects[0].lin_vel.x == 0.0);
    const double x_stop = w.objects[0].pos.x;
    w = sim::advance(w, {0, 0, 0}, 0.0);
    CHECK(w.objects[0].pos.x == x_stop);
  }

  TEST_CASE("gripper command is clipped to the workspace box") {
    WorldState w;
    w.gripper_pos = {0.28, 0.0, 0.1};
    const WorldState after = sim::advance(w, {0.05, 0.0, 0.028}, 0.0);
    CHECK(after.gripper_pos.x == doctest::Approx(sim::kWorkspaceHi.x));
    CHECK(after.gripper_pos.z == doctest::Approx(0.1 + 0.028));
    const WorldState low = sim::advance(w, {0.0, -0.7, -0.5}, 0.0);
    CHECK(low.gripper_pos.y == doctest::Approx(sim::kWorkspaceLo.y));
    CHECK(low.gripper_pos.z == doctest::Approx(sim::kWorkspaceLo.z));
  }

  TEST_CASE("non-finite commands are rejected") {
    WorldState w;
    CHECK_THROWS_AS(sim::advance(w, {std::nan(""), 0, 0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sim::advance(w, {0, 0, 0}, INFINITY), std::invalid_argument);
  }

  TEST_CASE("time bookkeeping: 25 steps per simulated second") {
    WorldState w;
    for (int i = 0; i < 25; ++i) w = sim::advance(w, {0, 0, 0}, 0.0);
    CHECK(w.time == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("determinism: identical inputs give identical worlds") {
    WorldState w = world_with_cube({0.02, 0.01, 0.15}, {0.05, -0.1, 0.0});
    w.gripper_pos = {0.0, 0.0, 0.05};
    const WorldState a = sim::advance(w, {0.03, -0.02, 0.01}, 0.005);
    const WorldState b = sim::advance(w, {0.03, -0.02, 0.01}, 0.005);
    CHECK(a == b);
  }
}

TEST_SUITE("sim.grasp") {
  TEST_CASE("closing the fingers around a cube attaches it") {
    WorldState w = world_with_cube({0.0, 0.0, sim::kCubeEdge / 2.0});
    w.gripper_pos = {0.0, 0.0, 0.025};  // 5 mm above the cube center
    w.finger_opening = 0.08;
    WorldState after = sim::advance(w, {0, 0, 0}, -0.08);
    REQUIRE(after.attached.has_value());
    CHECK(*after.attached == 0);

    SUBCASE("lifting carries the cube") {
      const double cube_z = after.objects[0].pos.z;
      const WorldState lifted = sim::advance(after, {0, 0, 0.05}, 0.0);
      CHECK(lifted.objects[0].pos.z ==
            doctest::Approx(cube_z + 0.05).epsilon(1e-9));
    }

    SUBCASE("opening past the cube width releases it") {
      const WorldState released = sim::advance(after, {0, 0, 0}, 0.08);
      CHECK_FALSE(released.attached.has_value());
    }
  }

  TEST_CASE("a blocked (closed) gripper can never grasp") {
    WorldState w = world_with_cube({0.0, 0.0, sim::kCubeEdge / 2.0});
    w.gripper_pos = {0.0, 0.0, 0.02};
    w.finger_opening = 0.0;
    const WorldState after = sim::advance(w, {0, 0, 0}, 0.0);
    CHECK_FALSE(after.attached.has_value());
  }

  TEST_CASE("no attach outside the grasp tolerance") {
    WorldState w = world_with_cube({0.05, 0.0, sim::kCubeEdge / 2.0});
    w.gripper_pos = {0.0, 0.0, 0.02};  // 5 cm away laterally
    w.finger_opening = 0.08;
    const WorldState after = sim::advance(w, {0, 0, 0}, -0.08);
    CHECK_FALSE(after.attached.has_value());
  }
}

TEST_SUITE("sim.push") {
  TEST_CASE("a closed gripper sweeping into a cube pushes it") {
    WorldState w = world_with_cube({0.04, 0.0, sim::kCubeEdge / 2.0});
    w.gripper_pos = {0.0, 0.0, 0.02};
    w.finger_opening = 0.0;
    const WorldState after = sim::advance(w, {0.05, 0, 0}, 0.0);
    CHECK(after.objects[0].pos.x > 0.04);
    // Out of penetration: at least the contact distance away laterally.
    const double contact = sim::kGripperRadius + after.objects[0].shape.lateral_radius();
    CHECK(horizontal_distance(after.gripper_pos, after.objects[0].pos) >=
          contact - 1e-9);
  }

  TEST_CASE("open fingers straddle the cube instead of pushing") {
    WorldState w = world_with_cube({0.04, 0.0, sim::kCubeEdge / 2.0});
    w.gripper_pos = {0.0, 0.0, 0.02};
    w.finger_opening = 0.08;
    const WorldState after = sim::advance(w, {0.04, 0, 0}, 0.0);
    CHECK(after.objects[0].pos.x == doctest::Approx(0.04));
  }

  TEST_CASE("a pushed puck inherits the gripper speed and keeps sliding") {
    WorldState w = world_with_puck({0.05, 0.0, sim::kPuckHeight / 2.0});
    w.gripper_pos = {0.0, 0.0, 0.01};
    w.finger_opening = 0.0;
    WorldState after = sim::advance(w, {0.05, 0, 0}, 0.0);
    CHECK(after.objects[0].lin_vel.x > 0.0);
    const double x0 = after.objects[0].pos.x;
    after = sim::advance(after, {0, 0, 0}, 0.0);  // gripper stops, puck coasts
    CHECK(after.objects[0].pos.x > x0);
  }

  TEST_CASE("a free object's horizontal speed never increases without contact") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      WorldState w = world_with_puck(
          {rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1), sim::kPuckHeight / 2.0},
          {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), 0.0});
      w.gripper_pos = {0.0, 0.0, 0.28};  // far above any contact
      const double before = w.objects[0].lin_vel.horizontal_norm();
      const WorldState after = sim::advance(w, {0, 0, 0}, 0.0);
      CHECK(after.objects[0].lin_vel.horizontal_norm() <= before + 1e-12);
    }
  }
}

TEST_SUITE("sim.stacking") {
  TEST_CASE("a cube dropped onto another rests one edge higher") {
    WorldState w = world_with_cube({0.0, 0.0, sim::kCubeEdge / 2.0});
    sim::ObjectState top;
    top.pos = {0.005, 0.0, 0.15};
    top.shape = sim::ObjectShape::make_cube();
    w.objects.push_back(top);
    w.gripper_pos = {0.2, 0.2, 0.25};
    for (int i = 0; i < 20; ++i) w = sim::advance(w, {0, 0, 0}, 0.0);
    CHECK(w.objects[1].pos.z ==
          doctest::Approx(sim::kCubeEdge + sim::kCubeEdge / 2.0).epsilon(1e-9));
    CHECK(w.objects[1].lin_vel.z == 0.0);
  }

  TEST_CASE("too much offset and the cube falls through to the table") {
    WorldState w = world_with_cube({0.0, 0.0, sim::kCubeEdge / 2.0});
    sim::ObjectState top;
    top.pos = {0.03, 0.0, 0.15};  // beyond the 0.02 support offset
    top.shape = sim::ObjectShape::make_cube();
    w.objects.push_back(top);
    w.gripper_pos = {0.2, 0.2, 0.25};
    for (int i = 0; i < 20; ++i) w = sim::advance(w, {0, 0, 0}, 0.0);
    CHECK(w.objects[1].pos.z == doctest::Approx(sim::kCubeEdge / 2.0).epsilon(1e-9));
  }
}

TEST_SUITE("robot") {
  TEST_CASE("action dimension contract") {
    robot::RobotConfig blocked{.block_gripper = true};
    robot::RobotConfig free_gripper{.block_gripper = false};
    CHECK(blocked.action_dim() == 3);
    CHECK(free_gripper.action_dim() == 4);
    WorldState w;
    const double a3[] = {0, 0, 0};
    CHECK_THROWS_AS(robot::apply_action(w, free_gripper, a3), std::invalid_argument);
  }

  TEST_CASE("zero action leaves the gripper in place") {
    robot::RobotConfig cfg{.block_gripper = true};
    WorldState w = robot::reset_robot(WorldState{}, cfg);
    const double a[] = {0, 0, 0};
    const WorldState after = robot::apply_action(w, cfg, a);
    CHECK(after.gripper_pos == w.gripper_pos);
    CHECK(after.finger_opening == 0.0);
  }

  TEST_CASE("full action maps to the displacement scale") {
    robot::RobotConfig cfg{.block_gripper = true};
    WorldState w = robot::reset_robot(WorldState{}, cfg);
    const double a[] = {1, 0, 0};
    const WorldState after = robot::apply_action(w, cfg, a);
    CHECK(after.gripper_pos.x == doctest::Approx(0.05).epsilon(1e-12));
  }

  TEST_CASE("finger action scales and clamps the opening") {
    robot::RobotConfig cfg{.block_gripper = false};
    WorldState w = robot::reset_robot(WorldState{}, cfg);
    CHECK(w.finger_opening == doctest::Approx(0.08));
    const double close_some[] = {0, 0, 0, -1};
    WorldState after = robot::apply_action(w, cfg, close_some);
    CHECK(after.finger_opening == doctest::Approx(0.06).epsilon(1e-12));
    const double open_again[] = {0, 0, 0, 1};
    after = robot::apply_action(after, cfg, open_again);
    after = robot::apply_action(after, cfg, open_again);
    CHECK(after.finger_opening == doctest::Approx(0.08).epsilon(1e-12));
  }

  TEST_CASE("observation length is 6 blocked, 7 otherwise") {
    WorldState w;
    CHECK(robot::robot_observation(w, {.block_gripper = true}).size() == 6);
    CHECK(robot::robot_observation(w, {.block_gripper = false}).size() == 7);
  }

  TEST_CASE("reset puts the gripper at the neutral pose at rest") {
    WorldState w;
    w.gripper_pos = {0.2, -0.1, 0.05};
    w.gripper_vel = {1, 1, 1};
    const WorldState r = robot::reset_robot(w, {.block_gripper = true});
    CHECK(r.gripper_pos == sim::kNeutralGripperPos);
    CHECK(r.gripper_vel == Vec3{});
    CHECK(r.finger_opening == 0.0);
  }

  TEST_CASE("out-of-range actions behave like their clipped versions") {
    robot::RobotConfig cfg{.block_gripper = false};
    WorldState w = robot::reset_robot(WorldState{}, cfg);
    const double wild[] = {2.5, -7.0, 0.25, 3.0};
    const double clipped[] = {1.0, -1.0, 0.25, 1.0};
    CHECK(robot::apply_action(w, cfg, wild) == robot::apply_action(w, cfg, clipped));
  }
}

TEST_SUITE("task.goals") {
  TEST_CASE("sampled goals stay inside the declared volumes") {
    Rng rng(3);
    for (task::TaskName name :
         {task::TaskName::reach, task::TaskName::push, task::TaskName::slide,
          task::TaskName::pick_and_place, task::TaskName::stack}) {
      const task::TaskSpec spec = task::task_spec(name);
      const task::Box volume = task::goal_volume(name);
      Vec3 lo{1e9, 1e9, 1e9};
      Vec3 hi{-1e9, -1e9, -1e9};
      for (int i = 0; i < 10'000; ++i) {
        const task::Goal g = task::sample_goal(spec, rng);
        const Vec3 p = g.point(0);
        REQUIRE(volume.contains(p));
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
      }
      // Empirical extremes approach the box on every axis with extent.
      CHECK(lo.x < volume.lo.x + 0.1 * (volume.hi.x - volume.lo.x) + 1e-9);
      CHECK(hi.x > volume.hi.x - 0.1 * (volume.hi.x - volume.lo.x) - 1e-9);
      CHECK(lo.y < volume.lo.y + 0.1 * (volume.hi.y - volume.lo.y) + 1e-9);
      CHECK(hi.y > volume.hi.y - 0.1 * (volume.hi.y - volume.lo.y) - 1e-9);
    }
  }

  TEST_CASE("slide goals are beyond the gripper workspace") {
    Rng rng(5);
    const task::TaskSpec spec = task::task_spec(task::TaskName::slide);
    for (int i = 0; i < 1000; ++i) {
      const task::Goal g = task::sample_goal(spec, rng);
      CHECK(g.point(0).x >= 0.35);
      CHECK(g.point(0).x > sim::kWorkspaceHi.x);
    }
  }

  TEST_CASE("stack goals are one cube edge apart vertically") {
    Rng rng(7);
    const task::TaskSpec spec = task::task_spec(task::TaskName::stack);
    for (int i = 0; i < 1000; ++i) {
      const task::Goal g = task::sample_goal(spec, rng);
      REQUIRE(g.dim() == 6);
      CHECK(g.point(1).x == g.point(0).x);
      CHECK(g.point(1).y == g.point(0).y);
      CHECK(g.point(1).z - g.point(0).z == doctest::Approx(0.04).epsilon(1e-12));
    }
  }
}

TEST_SUITE("task.reset") {
  TEST_CASE("push reset puts the cube at rest on the table") {
    Rng rng(1);
    const task::TaskSpec spec = task::task_spec(task::TaskName::push);
    const WorldState w = task::reset_task(spec, WorldState{}, rng);
    REQUIRE(w.objects.size() == 1);
    CHECK(w.objects[0].pos.z == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(w.objects[0].lin_vel == Vec3{});
    CHECK_FALSE(w.attached.has_value());
  }

  TEST_CASE("stack reset spawns two separated cubes, red first") {
    Rng rng(2);
    const task::TaskSpec spec = task::task_spec(task::TaskName::stack);
    for (int i = 0; i < 200; ++i) {
      const WorldState w = task::reset_task(spec, WorldState{}, rng);
      REQUIRE(w.objects.size() == 2);
      CHECK(horizontal_distance(w.objects[0].pos, w.objects[1].pos) >= 0.05);
      CHECK(w.objects[0].color == sim::ColorTag::red);
      CHECK(w.objects[1].color == sim::ColorTag::green);
    }
  }

  TEST_CASE("reach has no objects") {
    Rng rng(3);
    const WorldState w =
        task::reset_task(task::task_spec(task::TaskName::reach), WorldState{}, rng);
    CHECK(w.objects.empty());
  }
}

TEST_SUITE("task.rewards") {
  TEST_CASE("achieved goal definitions") {
    WorldState w;
    w.gripper_pos = {0.1, 0.0, 0.2};
    CHECK(task::achieved_goal(task::task_spec(task::TaskName::reach), w).positions ==
          std::vector<double>{0.1, 0.0, 0.2});

    w = world_with_cube({0.05, -0.02, 0.02});
    CHECK(task::achieved_goal(task::task_spec(task::TaskName::push), w).positions ==
          std::vector<double>{0.05, -0.02, 0.02});

    sim::ObjectState green;
    green.pos = {-0.1, 0.1, 0.02};
    green.shape = sim::ObjectShape::make_cube();
    w.objects.push_back(green);
    const task::Goal g = task::achieved_goal(task::task_spec(task::TaskName::stack), w);
    REQUIRE(g.dim() == 6);
    CHECK(g.point(0) == Vec3{0.05, -0.02, 0.02});
    CHECK(g.point(1) == Vec3{-0.1, 0.1, 0.02});
  }

  TEST_CASE("success threshold is strict at 5 cm") {
    const task::TaskSpec spec = task::task_spec(task::TaskName::reach);
    const task::Goal origin = task::Goal::from_points({{0, 0, 0}});
    CHECK(task::is_success(spec, task::Goal::from_points({{0.049, 0, 0}}), origin));
    CHECK_FALSE(task::is_success(spec, task::Goal::from_points({{0.05, 0, 0}}), origin));
  }

  TEST_CASE("stack succeeds only when both cubes are in place") {
    const task::TaskSpec spec = task::task_spec(task::TaskName::stack);
    const task::Goal desired = task::Goal::from_points({{0, 0, 0.02}, {0, 0, 0.06}});
    const task::Goal both = task::Goal::from_points({{0.04, 0, 0.02}, {0, 0.04, 0.06}});
    const task::Goal one_off = task::Goal::from_points({{0.04, 0, 0.02}, {0, 0.06, 0.06}});
    CHECK(task::is_success(spec, both, desired));
    CHECK_FALSE(task::is_success(spec, one_off, desired));
  }

  TEST_CASE("sparse rewards are 0 within tolerance, -1 otherwise") {
    const task::TaskSpec spec = task::task_spec(task::TaskName::push);
    const task::Goal origin = task::Goal::from_points({{0, 0, 0}});
    CHECK(task::compute_reward(spec, task::Goal::from_points({{0.03, 0, 0}}), origin) == 0.0);
    CHECK(task::compute_reward(spec, task::Goal::from_points({{0.08, 0, 0}}), origin) == -1.0);
    CHECK(task::compute_reward(spec, task::Goal::from_points({{0.049, 0, 0}}), origin) == 0.0);
    CHECK(task::compute_reward(spec, task::Goal::from_points({{0.05, 0, 0}}), origin) == -1.0);
  }

  TEST_CASE("dense reward is the negative distance") {
    const task::TaskSpec spec = task::task_spec(task::TaskName::reach, task::RewardMode::dense);
    CHECK(task::compute_reward(spec, task::Goal::from_points({{0.1, 0, 0}}),
                               task::Goal::from_points({{0, 0, 0}})) ==
          doctest::Approx(-0.1).epsilon(1e-12));
  }

  TEST_CASE("stack dense reward is -sqrt(d1^2 + d2^2)") {
    const task::TaskSpec spec = task::task_spec(task::TaskName::stack, task::RewardMode::dense);
    const task::Goal desired = task::Goal::from_points({{0, 0, 0}, {0, 0, 0}});
    const task::Goal achieved = task::Goal::from_points({{0.03, 0, 0}, {0, 0.04, 0}});
    CHECK(task::compute_reward(spec, achieved, desired) ==
          doctest::Approx(-0.05).epsilon(1e-12));
  }

  TEST_CASE("sparse reward 0 iff success, dense reward nonpositive") {
    Rng rng(9);
    const task::TaskSpec sparse = task::task_spec(task::TaskName::push);
    const task::TaskSpec dense = task::task_spec(task::TaskName::push, task::RewardMode::dense);
    for (int i = 0; i < 2000; ++i) {
      const task::Goal a = task::sample_goal(sparse, rng);
      const task::Goal d = task::sample_goal(sparse, rng);
      const double r = task::compute_reward(sparse, a, d);
      CHECK((r == 0.0 || r == -1.0));
      CHECK((r == 0.0) == task::is_success(sparse, a, d));
      CHECK(task::compute_reward(dense, a, d) <= 0.0);
    }
  }

  TEST_CASE("goal dimension mismatch is a contract error") {
    const task::TaskSpec spec = task::task_spec(task::TaskName::stack);
    const task::Goal three = task::Goal::from_points({{0, 0, 0}});
    CHECK_THROWS_AS(task::is_success(spec, three, three), std::invalid_argument);
    CHECK_THROWS_AS(task::compute_reward(spec, three, three), std::invalid_argument);
  }

  TEST_CASE("task observation sizes") {
    Rng rng(4);
    WorldState reach_w =
        task::reset_task(task::task_spec(task::TaskName::reach), WorldState{}, rng);
    CHECK(task::task_observation(task::task_spec(task::TaskName::reach), reach_w).empty());
    WorldState push_w =
        task::reset_task(task::task_spec(task::TaskName::push), WorldState{}, rng);
    CHECK(task::task_observation(task::task_spec(task::TaskName::push), push_w).size() == 12);
    WorldState stack_w =
        task::reset_task(task::task_spec(task::TaskName::stack), WorldState{}, rng);
    CHECK(task::task_observation(task::task_spec(task::TaskName::stack), stack_w).size() == 24);
  }
}
