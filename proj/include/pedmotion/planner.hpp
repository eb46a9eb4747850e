#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pedmotion/geometry.hpp"

namespace pedmotion {

struct EgoState {
  Vec2 position = Vec2::Zero();
  double heading = 0.0;
  double speed = 0.0;
  double length = 4.5;
  double width = 2.0;
  double station = 0.0;  // arc length along the route

  OrientedBox footprint() const;
  Vec2 velocity() const;
};

struct PedestrianObservation {
  std::string id;
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  double radius = 0.3;
  double station = 0.0;  // projection on the route
  double lateral = 0.0;  // signed offset from the route centerline
};

struct Observation {
  int tick = 0;
  double t = 0.0;
  double dt = 0.05;
  EgoState ego;
  double route_length = 0.0;
  double corridor_half_width = 0.0;
  double cruise_speed = 0.0;
  std::vector<PedestrianObservation> pedestrians;
  std::vector<OrientedBox> vehicles;
};

struct Control {
  double accel = 0.0;         // m/s^2, clamped to [-8, 3] by the simulator
  double brake_signal = 0.0;  // [0, 1]
};

/// Planner plug-in. `observe` is called once per tick on the simulation
/// thread; `predict` is queried afterwards for every visible pedestrian.
class Planner {
 public:
  virtual ~Planner() = default;
  virtual std::string name() const = 0;
  virtual void reset(std::uint64_t /*seed*/) {}
  virtual Control observe(const Observation& obs) = 0;
  /// Future positions at the next H ticks, if the planner forecasts.
  virtual std::optional<std::vector<Vec2>> predict(const std::string& /*pedestrian_id*/) { return std::nullopt; }
};

/// Holds the cruise speed and never brakes.
class ConstantSpeedPlanner final : public Planner {
 public:
  std::string name() const override { return "constant_speed"; }
  Control observe(const Observation& obs) override;
};

struct ReactiveBrakeOptions {
  double range = 15.0;          // m, from the ego center
  double lateral_buffer = 1.0;  // m beyond the corridor edge
  double closing_speed = 0.1;   // m/s toward the centerline that counts as approaching
  int horizon = 20;             // prediction ticks, 0 disables forecasts
  double predict_range = 30.0;  // m, pedestrians farther from the ego get no forecast
};

/// Full brake while any pedestrian ahead is within `range` of the ego and
/// either inside the route corridor or inside the corridor widened by
/// `lateral_buffer` while moving toward it; otherwise returns to cruise
/// speed. Forecasts pedestrians with a constant-velocity model.
class ReactiveBrakePlanner final : public Planner {
 public:
  explicit ReactiveBrakePlanner(ReactiveBrakeOptions options = {}) : options_(options) {}
  std::string name() const override { return "reactive_brake"; }
  void reset(std::uint64_t seed) override;
  Control observe(const Observation& obs) override;
  std::optional<std::vector<Vec2>> predict(const std::string& pedestrian_id) override;

 private:
  ReactiveBrakeOptions options_;
  Observation last_;
};

/// Out-of-process planner speaking line-delimited JSON over stdin/stdout:
/// one observation object per line in, one control object per line out.
class StdioPlanner final : public Planner {
 public:
  /// Spawns `argv` (argv[0] resolved through PATH).
  explicit StdioPlanner(std::vector<std::string> argv);
  ~StdioPlanner() override;
  StdioPlanner(const StdioPlanner&) = delete;
  StdioPlanner& operator=(const StdioPlanner&) = delete;

  std::string name() const override;
  void reset(std::uint64_t seed) override;
  Control observe(const Observation& obs) override;
  std::optional<std::vector<Vec2>> predict(const std::string& pedestrian_id) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Server side of the stdio protocol: answers every request line on `in`
/// using `planner` until end of input.
///   {"type":"reset","seed":N}      -> {"type":"ready","name":...}
///   {"type":"observe", ...}        -> {"type":"control","accel":..,"brake":..,"predictions":{..}}
void serve_stdio(Planner& planner, std::istream& in, std::ostream& out);

/// Builds a built-in planner by id: "constant_speed" or "reactive_brake".
std::unique_ptr<Planner> make_planner(const std::string& id);

}  // namespace pedmotion
