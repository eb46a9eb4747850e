#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pedmotion/geometry.hpp"

namespace pedmotion {

struct TriggerParams {
  double radius = 20.0;
  double half_angle = std::numbers::pi / 3.0;
  /// Scenario-level trigger: fires once the run clock reaches this time.
  std::optional<double> time;

  void validate() const;
};

enum class PedestrianRole { Interactive, Ambient };

struct PedestrianSpec {
  std::string id;
  std::string clip;
  std::optional<std::string> idle_clip;
  Vec2 spawn = Vec2::Zero();
  double spawn_yaw = 0.0;
  TriggerParams trigger;
  PedestrianRole role = PedestrianRole::Interactive;
  double radius = 0.3;
};

struct EgoSpec {
  double length = 4.5;
  double width = 2.0;
  double speed = 8.0;  // initial and cruise speed, m/s
  std::string planner = "constant_speed";
};

/// Scripted background vehicle moving at constant speed along a polyline.
struct VehicleSpec {
  std::string id;
  std::vector<Vec2> path;
  double speed = 0.0;
  double length = 4.5;
  double width = 2.0;
};

struct ScenarioSpec {
  std::string id;
  std::uint64_t seed = 0;
  std::string weather = "ClearNoon";  // metadata only
  int vehicle_count = 0;
  int interactive_count = 0;
  int ambient_count = 0;
  std::vector<Vec2> route;
  EgoSpec ego;
  std::vector<PedestrianSpec> pedestrians;
  std::vector<OrientedBox> obstacles;
  std::vector<VehicleSpec> vehicles;
  double blend_duration = 0.5;
  double corridor_margin = 0.5;
  double timeout = 120.0;

  void validate() const;
};

enum class EventKind {
  RunStart,
  RunEnd,
  BrakeStart,
  BrakeEnd,
  CrossingEnter,
  CrossingExit,
  Collision,
  Reroute,
  RerouteFailed,
  TriggerFired,
  Aborted,
};

std::string_view to_string(EventKind k);
std::optional<EventKind> event_kind_from_string(std::string_view s);

struct Event {
  double t = 0.0;
  EventKind kind = EventKind::RunStart;
  std::vector<std::string> agents;
  std::optional<double> impact_speed;  // collisions, m/s
  std::optional<double> value;         // reroute offset (deg) or brake onset
  std::string detail;

  bool operator==(const Event&) const = default;
};

struct PedestrianSample {
  std::string id;
  Vec2 position = Vec2::Zero();
  bool rerouted = false;
};

struct TrackSample {
  int tick = 0;
  double t = 0.0;
  std::vector<PedestrianSample> pedestrians;
};

/// Planner forecast made at `tick` for ticks tick+1 .. tick+H.
struct Prediction {
  int tick = 0;
  std::string pedestrian;
  std::vector<Vec2> positions;
};

struct LogHeader {
  std::string scenario;
  std::uint64_t seed = 0;
  double tick = 0.05;
  std::string planner;
};

struct LogSummary {
  double distance_m = 0.0;
  double duration_s = 0.0;
  bool completed = false;
  std::string termination;  // route_complete | timeout | aborted
};

struct ScenarioLog {
  LogHeader header;
  std::vector<Event> events;
  std::vector<TrackSample> tracks;
  std::vector<Prediction> predictions;
  LogSummary summary;

  /// Events ordered in time, brake_start/brake_end alternate, impact speeds
  /// non-negative.
  void validate() const;
};

}  // namespace pedmotion
