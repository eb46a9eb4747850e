#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pedmotion/geometry.hpp"
#include "pedmotion/motion.hpp"
#include "pedmotion/planner.hpp"
#include "pedmotion/scenario_types.hpp"
#include "pedmotion/trajectory.hpp"

namespace pedmotion {

using ClipLibrary = std::map<std::string, RetargetedClip>;

/// True iff the pedestrian is within `radius` of the ego (closed) and within
/// +-half_angle of the ego heading (closed).
bool evaluate_trigger(const EgoState& ego, const Vec2& pedestrian, const TriggerParams& params);

struct Pose {
  Vec3 root_position = Vec3::Zero();
  std::vector<EulerXYZ> joints;
};

Pose clip_pose(const RetargetedClip& clip, std::size_t frame);

/// Per-joint geodesic interpolation, linear root position. Exact endpoints.
Pose blend(const Pose& idle, const Pose& active, double u);

/// Clip root track on the ground plane, rigidly placed at the spawn pose.
/// The clip's initial facing maps to the spawn heading; with an identity
/// initial orientation that is clip +x, and clip +y (right) maps to the right
/// of the heading.
std::vector<Vec2> clip_ground_path(const RetargetedClip& clip, const Vec2& spawn, double spawn_yaw);

inline constexpr double kRerouteOffsetsDeg[] = {15.0, -15.0, 30.0, -30.0, 45.0, -45.0};

struct RerouteResult {
  std::vector<Vec2> path;
  std::optional<double> offset_deg;  // chosen offset, empty if unchanged or halted
  bool halted = false;
};

/// `remaining` starts at the agent's current position. If the first
/// `lookahead` steps hit an obstacle, the remaining displacements are
/// rotated about the current position by the first collision-free offset
/// in kRerouteOffsetsDeg order. With no free offset the agent halts: the
/// returned path stays at the current position.
RerouteResult reroute(const std::vector<Vec2>& remaining, double radius, std::span<const OrientedBox> obstacles,
                      std::size_t lookahead);

struct SimOptions {
  double tick = 0.05;
  double planner_budget = 0.5;  // wall-clock seconds per planner call, <= 0 disables
  double brake_signal_threshold = 0.5;
  double brake_accel_threshold = -2.0;
  double brake_sustain = 0.2;
  double reroute_lookahead = 1.0;
  double accel_min = -8.0;
  double accel_max = 3.0;
};

enum class PedestrianPhase { Idle, Blending, Active, Done };

/// Fixed-step kinematic simulator. One instance runs one scenario on the
/// calling thread; instances share nothing.
class Simulator {
 public:
  Simulator(const ScenarioSpec& spec, const ClipLibrary& clips, Planner& planner, SimOptions options = {});
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Advances one tick. Returns false once the run has ended.
  bool step();
  /// Steps to completion and returns the log.
  ScenarioLog run();

  const EgoState& ego() const;
  double time() const;
  PedestrianPhase phase(const std::string& pedestrian_id) const;
  Pose pose(const std::string& pedestrian_id) const;
  const ScenarioLog& log() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper around Simulator.
ScenarioLog run(const ScenarioSpec& spec, const ClipLibrary& clips, Planner& planner, const SimOptions& options = {});

struct GeneratorOptions {
  int scenarios = 1;
  int interactive = 20;
  int ambient = 10;
  int vehicles = 30;
  int obstacles = 4;
  double route_length = 200.0;
  ClassThresholds thresholds{0.5, 2.5, Vec3::UnitX()};
  std::string planner = "constant_speed";
  std::string id_prefix = "scenario";
};

/// Builds scenarios from a clip library: a route per scenario, interactive
/// pedestrians on the sidewalks facing the road with behavior classes mixed
/// round-robin, ambient pedestrians out of interaction range, parked-car
/// obstacles and scripted background vehicles. Deterministic in `seed`.
std::vector<ScenarioSpec> generate_scenarios(const ClipLibrary& clips, const GeneratorOptions& options,
                                             std::uint64_t seed);

}  // namespace pedmotion
