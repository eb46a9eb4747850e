#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pedmotion/error.hpp"
#include "pedmotion/motion_io.hpp"
#include "pedmotion/retarget.hpp"
#include "pedmotion/scenario.hpp"
#include "pedmotion/synth.hpp"
#include "scenes.hpp"

using namespace pedmotion;
using namespace pedmotion::testing;

namespace {

std::vector<Event> events_of(const ScenarioLog& log, EventKind kind) {
  std::vector<Event> out;
  for (const Event& e : log.events) {
    if (e.kind == kind) out.push_back(e);
  }
  return out;
}

}  // namespace

TEST_CASE("trigger region is a closed sector") {
  EgoState ego;
  ego.position = Vec2(0, 0);
  ego.heading = 0.0;
  TriggerParams p;
  CHECK(evaluate_trigger(ego, Vec2(20.0, 0.0), p));
  CHECK_FALSE(evaluate_trigger(ego, Vec2(20.0001, 0.0), p));
  CHECK(evaluate_trigger(ego, Vec2(10.0 * std::cos(std::numbers::pi / 3), 10.0 * std::sin(std::numbers::pi / 3)), p));
  CHECK_FALSE(evaluate_trigger(ego, Vec2(10.0 * std::cos(1.05), 10.0 * std::sin(1.05)), p));
  CHECK_FALSE(evaluate_trigger(ego, Vec2(-5.0, 0.0), p));
  CHECK(evaluate_trigger(ego, Vec2(0.0, 0.0), p));
  ego.heading = std::numbers::pi;
  CHECK(evaluate_trigger(ego, Vec2(-5.0, 0.1), p));
}

TEST_CASE("blend has exact endpoints") {
  const RetargetedClip idle = idle_clip("idle", 10);
  const RetargetedClip walk = straight_walk_clip("walk", 1.4, 10);
  const Pose a = clip_pose(idle, 3);
  Pose b = clip_pose(walk, 0);
  b.joints[0] = EulerXYZ{0.0, 0.0, 0.8};
  CHECK(blend(a, b, 0.0).joints == a.joints);
  CHECK(blend(a, b, 1.0).joints == b.joints);
  const Pose mid = blend(a, b, 0.5);
  const Mat3 expect = slerp(euler_xyz_to_matrix(a.joints[0]), euler_xyz_to_matrix(b.joints[0]), 0.5);
  CHECK(max_abs_diff(euler_xyz_to_matrix(mid.joints[0]), expect) < 1e-12);
  Pose short_pose = b;
  short_pose.joints.pop_back();
  CHECK_THROWS_AS(blend(a, short_pose, 0.5), Error);
}

TEST_CASE("clip ground path is placed at the spawn pose") {
  const RetargetedClip walk = straight_walk_clip("walk", 2.0, 11);
  const auto path = clip_ground_path(walk, Vec2(5, 5), std::numbers::pi / 2.0);
  CHECK((path.front() - Vec2(5, 5)).norm() < 1e-12);
  CHECK((path.back() - Vec2(5, 6)).norm() < 1e-12);
  RetargetedClip sideways = walk;
  for (auto& f : sideways.frames) f.root_position = Vec3(0.0, f.root_position.x(), 0.9);
  const auto right = clip_ground_path(sideways, Vec2(0, 0), 0.0);
  CHECK((right.back() - Vec2(0, -1)).norm() < 1e-12);
  // A clip whose initial facing is turned still walks along the spawn heading.
  RetargetedClip turned = walk;
  for (auto& f : turned.frames) {
    f.root_position = Vec3(0.0, f.root_position.x(), 0.9);
    f.root_euler = EulerXYZ{0.0, 0.0, std::numbers::pi / 2.0};
  }
  CHECK((euler_xyz_to_matrix(turned.frames[0].root_euler) * Vec3::UnitX() - Vec3::UnitY()).norm() < 1e-12);
  const auto aligned = clip_ground_path(turned, Vec2(0, 0), 0.0);
  CHECK((aligned.back() - Vec2(1, 0)).norm() < 1e-12);
}

TEST_CASE("reroute picks the first free offset") {
  std::vector<Vec2> path;
  for (int i = 0; i <= 30; ++i) path.push_back(Vec2(0.1 * i, 0.0));
  const std::vector<OrientedBox> wall = {{"car", Vec2(1.0, 0.0), Vec2(0.2, 0.2), 0.0}};
  const RerouteResult r = reroute(path, 0.3, wall, 20);
  REQUIRE(r.offset_deg);
  CHECK_FALSE(r.halted);
  // The car sits 1 m ahead: the line passes it at sin(offset) m, and the
  // swept half width plus the car's projected radius is 0.57 m at 30 deg and
  // 0.58 m at 45 deg, so +45 is the first free offset.
  CHECK(*r.offset_deg == 45.0);
  CHECK((r.path.front() - path.front()).norm() == 0.0);
  CHECK((r.path.back() - Vec2(3.0 * std::cos(std::numbers::pi / 4), 3.0 * std::sin(std::numbers::pi / 4))).norm() < 1e-12);

  const RerouteResult free = reroute(path, 0.3, std::vector<OrientedBox>{{"far", Vec2(0, 9), Vec2(1, 1), 0}}, 20);
  CHECK_FALSE(free.offset_deg);
  CHECK(free.path == path);

  const std::vector<OrientedBox> boxed = {{"ring", Vec2(0.8, 0.0), Vec2(0.2, 3.0), 0.0}};
  const RerouteResult stuck = reroute(path, 0.3, boxed, 20);
  CHECK(stuck.halted);
  CHECK_FALSE(stuck.offset_deg);
  for (const Vec2& p : stuck.path) CHECK(p == path.front());
}

TEST_CASE("crossing scene with constant speed collides once at the derived speed") {
  const ClipLibrary clips = crossing_clips();
  ConstantSpeedPlanner planner;
  Simulator sim(crossing_scene(), clips, planner);
  CHECK(sim.phase("ped_000") == PedestrianPhase::Idle);
  while (sim.time() < 1.3 - 1e-9) sim.step();
  CHECK(sim.phase("ped_000") == PedestrianPhase::Blending);
  while (sim.time() < 1.8 - 1e-9) sim.step();
  CHECK(sim.phase("ped_000") == PedestrianPhase::Active);
  const ScenarioLog log = sim.run();

  const auto triggers = events_of(log, EventKind::TriggerFired);
  REQUIRE(triggers.size() == 1);
  CHECK(triggers[0].t == doctest::Approx(1.3));
  const auto collisions = events_of(log, EventKind::Collision);
  REQUIRE(collisions.size() == 1);
  CHECK(collisions[0].t == doctest::Approx(3.45));
  CHECK(collisions[0].agents == std::vector<std::string>{"ego", "ped_000"});
  const double expected = std::hypot(kSceneEgoSpeed, kScenePedSpeed);
  CHECK(std::abs(*collisions[0].impact_speed - expected) < 1e-6);
  CHECK(events_of(log, EventKind::BrakeStart).empty());
  CHECK(log.summary.termination == "route_complete");
  CHECK(log.summary.distance_m == doctest::Approx(120.0));
  CHECK(log.events.front().kind == EventKind::RunStart);
  CHECK(log.events.back().kind == EventKind::RunEnd);
  CHECK_NOTHROW(log.validate());
  CHECK(events_of(log, EventKind::CrossingEnter).size() == 1);
}

TEST_CASE("reactive braking avoids the crossing pedestrian") {
  const ClipLibrary clips = crossing_clips();
  ReactiveBrakePlanner planner;
  const ScenarioLog log = run(crossing_scene("reactive_brake"), clips, planner);
  CHECK(events_of(log, EventKind::Collision).empty());
  const auto brakes = events_of(log, EventKind::BrakeStart);
  REQUIRE(brakes.size() >= 1);
  // Tick 38: ego at x = 15.2 and the pedestrian 0.14 m into its walk, so
  // hypot(14.8, 2.36) < 15 m puts it inside the braking envelope.
  CHECK(brakes[0].t == doctest::Approx(1.9));
  CHECK(events_of(log, EventKind::BrakeEnd).size() == brakes.size());
  CHECK(log.summary.completed);
  CHECK_FALSE(log.predictions.empty());
  CHECK(log.predictions.front().positions.size() == 20);
  CHECK_NOTHROW(log.validate());
}

TEST_CASE("identical seeded runs produce identical logs") {
  const ClipLibrary clips = crossing_clips();
  ScenarioSpec spec = crossing_scene("reactive_brake");
  PedestrianSpec amb;
  amb.id = "amb_000";
  amb.clip = "walk";
  amb.spawn = Vec2(50, 20);
  amb.role = PedestrianRole::Ambient;
  spec.pedestrians.push_back(amb);
  spec.ambient_count = 1;
  ReactiveBrakePlanner p1;
  ReactiveBrakePlanner p2;
  const std::string a = write_log(run(spec, clips, p1));
  const std::string b = write_log(run(spec, clips, p2));
  CHECK(a == b);
  spec.seed = 8;
  ReactiveBrakePlanner p3;
  CHECK(write_log(run(spec, clips, p3)) != a);  // ambient loop phase depends on the seed
}

TEST_CASE("ambient pedestrians loop and never trigger") {
  const ClipLibrary clips = crossing_clips();
  ScenarioSpec spec = crossing_scene();
  spec.pedestrians.clear();
  spec.interactive_count = 0;
  PedestrianSpec amb;
  amb.id = "amb_000";
  amb.clip = "walk";
  amb.spawn = Vec2(40, 1.0);  // right in front of the ego
  amb.spawn_yaw = 0.0;
  amb.role = PedestrianRole::Ambient;
  spec.pedestrians.push_back(amb);
  spec.ambient_count = 1;
  ConstantSpeedPlanner planner;
  Simulator sim(spec, clips, planner);
  for (int i = 0; i < 300 && sim.step();) ++i;
  CHECK(sim.phase("amb_000") == PedestrianPhase::Active);
  CHECK(events_of(sim.log(), EventKind::TriggerFired).empty());
}

TEST_CASE("time triggers fire on the clock") {
  const ClipLibrary clips = crossing_clips();
  ScenarioSpec spec = crossing_scene();
  spec.pedestrians[0].trigger.time = 0.5;
  spec.pedestrians[0].spawn = Vec2(100, -30);
  ConstantSpeedPlanner planner;
  const ScenarioLog log = run(spec, clips, planner);
  const auto triggers = events_of(log, EventKind::TriggerFired);
  REQUIRE(triggers.size() == 1);
  CHECK(triggers[0].t == doctest::Approx(0.5));
}

TEST_CASE("pedestrians reroute around parked cars") {
  const ClipLibrary clips = crossing_clips();
  ScenarioSpec spec = crossing_scene();
  spec.obstacles.push_back({"obs_000", Vec2(30.0, -1.2), Vec2(0.25, 0.25), 0.0});
  ConstantSpeedPlanner planner;
  const ScenarioLog log = run(spec, clips, planner);
  const auto reroutes = events_of(log, EventKind::Reroute);
  REQUIRE(reroutes.size() >= 1);
  CHECK(reroutes[0].agents == std::vector<std::string>{"ped_000", "obs_000"});
  CHECK(reroutes[0].value.has_value());
  bool flagged = false;
  for (const TrackSample& s : log.tracks) flagged = flagged || s.pedestrians[0].rerouted;
  CHECK(flagged);
  // Nobody walks through the car.
  for (const TrackSample& s : log.tracks) CHECK_FALSE(overlaps(spec.obstacles[0], Circle{s.pedestrians[0].position, 0.3}));
}

TEST_CASE("blocked pedestrians halt") {
  const ClipLibrary clips = crossing_clips();
  ScenarioSpec spec = crossing_scene();
  spec.obstacles.push_back({"wall", Vec2(30.0, -1.5), Vec2(6.0, 0.3), 0.0});
  ConstantSpeedPlanner planner;
  const ScenarioLog log = run(spec, clips, planner);
  CHECK(events_of(log, EventKind::RerouteFailed).size() == 1);
  CHECK(events_of(log, EventKind::Collision).empty());
}

TEST_CASE("scenario validation") {
  const ClipLibrary clips = crossing_clips();
  ConstantSpeedPlanner planner;
  ScenarioSpec spec = crossing_scene();
  spec.interactive_count = 2;
  CHECK_THROWS_AS(Simulator(spec, clips, planner), Error);
  spec = crossing_scene();
  spec.pedestrians[0].clip = "missing";
  try {
    Simulator sim(spec, clips, planner);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Validation);
    CHECK(std::string(e.what()).find("missing") != std::string::npos);
  }
  spec = crossing_scene();
  spec.route = {Vec2(0, 0)};
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = crossing_scene();
  spec.pedestrians.push_back(spec.pedestrians[0]);
  spec.interactive_count = 2;
  CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("log validation") {
  ScenarioLog log;
  log.header.scenario = "x";
  log.events = {{1.0, EventKind::RunStart, {"ego"}, {}, {}, ""}, {0.5, EventKind::RunEnd, {"ego"}, {}, {}, ""}};
  CHECK_THROWS_AS(log.validate(), Error);
  log.events = {{0.0, EventKind::BrakeEnd, {"ego"}, {}, {}, ""}};
  CHECK_THROWS_AS(log.validate(), Error);
  log.events = {{0.0, EventKind::Collision, {"ego", "p"}, -1.0, {}, ""}};
  CHECK_THROWS_AS(log.validate(), Error);
  log.events = {{0.0, EventKind::BrakeStart, {"ego"}, {}, {}, ""}};
  CHECK_NOTHROW(log.validate());
}

TEST_CASE("event kinds round-trip through their names") {
  for (int k = 0; k <= static_cast<int>(EventKind::Aborted); ++k) {
    const auto kind = static_cast<EventKind>(k);
    CHECK(event_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_FALSE(event_kind_from_string("nope"));
}

TEST_CASE("generated scenarios are valid and deterministic") {
  ClipLibrary clips;
  const SkeletonMap map = SkeletonMap::carla_like();
  for (const MotionSequence& m : synth_corpus(18, 5)) clips[m.id] = retarget_clip(m, map);
  GeneratorOptions opts;
  opts.scenarios = 2;
  opts.interactive = 6;
  opts.ambient = 3;
  opts.vehicles = 4;
  opts.obstacles = 2;
  opts.route_length = 120.0;
  const auto a = generate_scenarios(clips, opts, 99);
  const auto b = generate_scenarios(clips, opts, 99);
  REQUIRE(a.size() == 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK_NOTHROW(a[i].validate());
    CHECK(write_scenario(a[i]) == write_scenario(b[i]));
    CHECK(a[i].pedestrians.size() == 9);
    CHECK(a[i].vehicles.size() == 4);
  }
  CHECK(write_scenario(a[0]) != write_scenario(generate_scenarios(clips, opts, 100)[0]));
  ReactiveBrakePlanner planner;
  const ScenarioLog log = run(a[0], clips, planner);
  CHECK_NOTHROW(log.validate());
  CHECK(log.summary.completed);
}
