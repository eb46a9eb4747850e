#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "pedmotion/error.hpp"
#include "pedmotion/retarget.hpp"
#include "pedmotion/scenario.hpp"
#include "pedmotion/synth.hpp"

namespace pedmotion {

namespace {

constexpr std::array<const char*, 5> kWeathers = {"ClearNoon", "CloudyNoon", "WetNoon", "ClearSunset", "SoftRainNoon"};
constexpr std::array<BehaviorClass, 3> kInteractiveOrder = {BehaviorClass::Crossing, BehaviorClass::Attempting,
                                                            BehaviorClass::NotCrossing};

// Sidewalk band starts this far outside the corridor edge.
constexpr double kSidewalkOffset = 2.0;
constexpr double kSidewalkDepth = 1.0;

}  // namespace

std::vector<ScenarioSpec> generate_scenarios(const ClipLibrary& clips, const GeneratorOptions& options,
                                             std::uint64_t seed) {
  if (clips.empty()) fail(ErrorCode::InvalidInput, "clip library is empty");
  if (options.scenarios < 0 || options.interactive < 0 || options.ambient < 0 || options.vehicles < 0 ||
      options.obstacles < 0) {
    fail(ErrorCode::InvalidInput, "generator counts must be >= 0");
  }
  if (!(options.route_length >= 60.0)) fail(ErrorCode::InvalidInput, "route_length must be at least 60 m");
  if (options.obstacles > 0 && options.interactive == 0) {
    fail(ErrorCode::InvalidInput, "obstacles are placed next to interactive pedestrians, which are disabled");
  }
  options.thresholds.validate();

  std::map<BehaviorClass, std::vector<std::string>> by_class;
  for (const auto& [id, clip] : clips) {
    clip.validate();
    by_class[classify(clip_trajectory(clip), options.thresholds)].push_back(id);
  }
  std::vector<BehaviorClass> cycle;
  for (BehaviorClass c : kInteractiveOrder) {
    if (by_class.count(c)) cycle.push_back(c);
  }
  const std::vector<std::string>& ambient_pool =
      by_class.count(BehaviorClass::NotCrossing) ? by_class[BehaviorClass::NotCrossing] : by_class.begin()->second;

  EgoSpec ego;
  ego.planner = options.planner;
  const double corridor = 0.5 * ego.width + ScenarioSpec{}.corridor_margin;
  const double length = options.route_length;

  std::vector<ScenarioSpec> out;
  for (int i = 0; i < options.scenarios; ++i) {
    ScenarioSpec spec;
    spec.id = fmt::format("{}_{:03}", options.id_prefix, i);
    spec.seed = seed + static_cast<std::uint64_t>(i);
    Rng rng(spec.seed);
    spec.weather = kWeathers[static_cast<std::size_t>(i) % kWeathers.size()];
    spec.ego = ego;
    for (double x = 0.0; x < length; x += 50.0) spec.route.emplace_back(x, 0.0);
    spec.route.emplace_back(length, 0.0);

    // Interactive pedestrians spread over the route, alternating sides and
    // facing the road.
    const double first = 25.0;
    const double span = length - first - 20.0;
    std::vector<std::pair<double, int>> placed;  // station, side
    for (int j = 0; j < options.interactive; ++j) {
      const BehaviorClass cls = cycle[static_cast<std::size_t>(j) % cycle.size()];
      const auto& pool = by_class[cls];
      PedestrianSpec p;
      p.id = fmt::format("ped_{:03}", j);
      p.clip = pool[rng.index(pool.size())];
      const double station = first + span * (j + rng.uniform(0.2, 0.8)) / options.interactive;
      const int side = j % 2 == 0 ? -1 : 1;
      const double lateral = side * (corridor + kSidewalkOffset + rng.uniform(0.0, kSidewalkDepth));
      p.spawn = Vec2(station, lateral);
      p.spawn_yaw = side < 0 ? std::numbers::pi / 2.0 : -std::numbers::pi / 2.0;
      p.role = PedestrianRole::Interactive;
      spec.pedestrians.push_back(std::move(p));
      placed.emplace_back(station, side);
    }
    for (int j = 0; j < options.ambient; ++j) {
      PedestrianSpec p;
      p.id = fmt::format("amb_{:03}", j);
      p.clip = ambient_pool[rng.index(ambient_pool.size())];
      const int side = j % 2 == 0 ? 1 : -1;
      p.spawn = Vec2(rng.uniform(0.0, length), side * (corridor + rng.uniform(8.0, 15.0)));
      p.spawn_yaw = rng.uniform(0.0, 1.0) < 0.5 ? 0.0 : std::numbers::pi;
      p.role = PedestrianRole::Ambient;
      spec.pedestrians.push_back(std::move(p));
    }
    spec.interactive_count = options.interactive;
    spec.ambient_count = options.ambient;

    // Parked cars at the curb, some of them in a pedestrian's way.
    for (int o = 0; o < options.obstacles; ++o) {
      const auto& [station, side] = placed[rng.index(placed.size())];
      OrientedBox box;
      box.id = fmt::format("obs_{:03}", o);
      box.center = Vec2(station + rng.uniform(-3.0, 3.0), side * (corridor + 1.1));
      box.half_extents = Vec2(2.25, 0.9);
      box.yaw = 0.0;
      spec.obstacles.push_back(box);
    }

    // Background traffic on parallel roads well away from the route.
    for (int v = 0; v < options.vehicles; ++v) {
      VehicleSpec veh;
      veh.id = fmt::format("veh_{:03}", v);
      const double lane = (v % 2 == 0 ? 1.0 : -1.0) * (30.0 + 4.0 * static_cast<double>(v % 5));
      const bool forward = rng.uniform() < 0.5;
      const Vec2 a(-20.0, lane);
      const Vec2 b(length + 20.0, lane);
      veh.path = forward ? std::vector<Vec2>{a, b} : std::vector<Vec2>{b, a};
      veh.speed = rng.uniform(5.0, 12.0);
      spec.vehicles.push_back(std::move(veh));
    }
    spec.vehicle_count = options.vehicles;
    spec.validate();
    out.push_back(std::move(spec));
  }
  return out;
}

}  // namespace pedmotion
