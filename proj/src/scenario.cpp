#include "pedmotion/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Geometry>

#include <fmt/format.h>

#include "pedmotion/error.hpp"
#include "pedmotion/synth.hpp"

namespace pedmotion {

namespace {

bool finite(const Vec2& v) { return std::isfinite(v.x()) && std::isfinite(v.y()); }

constexpr std::pair<EventKind, std::string_view> kEventNames[] = {
    {EventKind::RunStart, "run_start"},           {EventKind::RunEnd, "run_end"},
    {EventKind::BrakeStart, "brake_start"},       {EventKind::BrakeEnd, "brake_end"},
    {EventKind::CrossingEnter, "crossing_enter"}, {EventKind::CrossingExit, "crossing_exit"},
    {EventKind::Collision, "collision"},          {EventKind::Reroute, "reroute"},
    {EventKind::RerouteFailed, "reroute_failed"}, {EventKind::TriggerFired, "trigger_fired"},
    {EventKind::Aborted, "aborted"},
};

}  // namespace

std::string_view to_string(EventKind k) {
  for (const auto& [kind, name] : kEventNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

std::optional<EventKind> event_kind_from_string(std::string_view s) {
  for (const auto& [kind, name] : kEventNames) {
    if (name == s) return kind;
  }
  return std::nullopt;
}

void TriggerParams::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorCode::Validation, "trigger radius must be positive");
  if (!(half_angle > 0.0) || half_angle > std::numbers::pi) {
    fail(ErrorCode::Validation, "trigger half angle must be in (0, pi]");
  }
  if (time && (!std::isfinite(*time) || *time < 0.0)) fail(ErrorCode::Validation, "trigger time must be >= 0");
}

void ScenarioSpec::validate() const {
  auto bad = [&](const std::string& msg) { fail(ErrorCode::Validation, fmt::format("scenario '{}': {}", id, msg)); };
  if (id.empty()) fail(ErrorCode::Validation, "scenario id is empty");
  if (route.size() < 2) bad("route needs at least 2 points");
  for (const Vec2& p : route) {
    if (!finite(p)) bad("route has non-finite points");
  }
  try {
    Polyline check(route);
  } catch (const Error& e) {
    bad(e.what());
  }
  if (!(ego.length > 0.0) || !(ego.width > 0.0)) bad("ego dimensions must be positive");
  if (!(ego.speed >= 0.0) || !std::isfinite(ego.speed)) bad("ego speed must be >= 0");
  if (ego.planner.empty()) bad("ego planner is empty");
  if (!(blend_duration >= 0.0)) bad("blend_duration must be >= 0");
  if (!(corridor_margin >= 0.0)) bad("corridor_margin must be >= 0");
  if (!(timeout > 0.0) || !std::isfinite(timeout)) bad("timeout must be positive");

  std::set<std::string> ids;
  int interactive = 0;
  int ambient = 0;
  for (const PedestrianSpec& p : pedestrians) {
    if (p.id.empty() || p.id == "ego") bad(fmt::format("invalid pedestrian id '{}'", p.id));
    if (!ids.insert(p.id).second) bad(fmt::format("duplicate agent id '{}'", p.id));
    if (p.clip.empty()) bad(fmt::format("pedestrian '{}' has no clip", p.id));
    if (!(p.radius > 0.0)) bad(fmt::format("pedestrian '{}' radius must be positive", p.id));
    if (!finite(p.spawn) || !std::isfinite(p.spawn_yaw)) bad(fmt::format("pedestrian '{}' spawn is not finite", p.id));
    try {
      p.trigger.validate();
    } catch (const Error& e) {
      bad(fmt::format("pedestrian '{}': {}", p.id, e.what()));
    }
    (p.role == PedestrianRole::Interactive ? interactive : ambient) += 1;
  }
  for (const VehicleSpec& v : vehicles) {
    if (v.id.empty() || v.id == "ego") bad(fmt::format("invalid vehicle id '{}'", v.id));
    if (!ids.insert(v.id).second) bad(fmt::format("duplicate agent id '{}'", v.id));
    if (v.path.size() < 2) bad(fmt::format("vehicle '{}' path needs at least 2 points", v.id));
    if (!(v.speed >= 0.0) || !(v.length > 0.0) || !(v.width > 0.0)) bad(fmt::format("vehicle '{}' is invalid", v.id));
  }
  for (const OrientedBox& o : obstacles) {
    if (!(o.half_extents.x() > 0.0) || !(o.half_extents.y() > 0.0) || !finite(o.center)) {
      bad(fmt::format("obstacle '{}' is invalid", o.id));
    }
  }
  if (interactive != interactive_count) {
    bad(fmt::format("interactive_count is {} but {} interactive pedestrians are listed", interactive_count, interactive));
  }
  if (ambient != ambient_count) {
    bad(fmt::format("ambient_count is {} but {} ambient pedestrians are listed", ambient_count, ambient));
  }
  if (static_cast<std::size_t>(vehicle_count) != vehicles.size()) {
    bad(fmt::format("vehicle_count is {} but {} vehicles are listed", vehicle_count, vehicles.size()));
  }
}

void ScenarioLog::validate() const {
  auto bad = [&](const std::string& msg) {
    fail(ErrorCode::Validation, fmt::format("log for '{}': {}", header.scenario, msg));
  };
  if (!(header.tick > 0.0)) bad("tick must be positive");
  double last = -std::numeric_limits<double>::infinity();
  bool braking = false;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    if (!std::isfinite(e.t) || e.t < last) bad(fmt::format("events[{}] is out of time order", i));
    last = e.t;
    if (e.kind == EventKind::BrakeStart) {
      if (braking) bad(fmt::format("events[{}]: brake_start while braking", i));
      braking = true;
    } else if (e.kind == EventKind::BrakeEnd) {
      if (!braking) bad(fmt::format("events[{}]: brake_end without brake_start", i));
      braking = false;
    } else if (e.kind == EventKind::Collision) {
      if (!e.impact_speed || !(*e.impact_speed >= 0.0) || !std::isfinite(*e.impact_speed)) {
        bad(fmt::format("events[{}]: collision needs a non-negative impact speed", i));
      }
      if (e.agents.size() != 2) bad(fmt::format("events[{}]: collision needs two agents", i));
    }
  }
  int prev = -1;
  for (const TrackSample& s : tracks) {
    if (s.tick <= prev) bad("track ticks must increase");
    prev = s.tick;
  }
  if (!(summary.distance_m >= 0.0)) bad("summary distance must be >= 0");
}

bool evaluate_trigger(const EgoState& ego, const Vec2& pedestrian, const TriggerParams& params) {
  const Vec2 d = pedestrian - ego.position;
  const double dist = d.norm();
  if (dist > params.radius) return false;
  if (dist == 0.0) return true;
  const double bearing = std::abs(wrap_angle(std::atan2(d.y(), d.x()) - ego.heading));
  return bearing <= params.half_angle + 1e-12;
}

Pose clip_pose(const RetargetedClip& clip, std::size_t frame) {
  if (clip.frames.empty()) fail(ErrorCode::InvalidInput, fmt::format("clip '{}' has no frames", clip.id));
  const ClipFrame& f = clip.frames[std::min(frame, clip.frames.size() - 1)];
  return {f.root_position, f.joints};
}

Pose blend(const Pose& idle, const Pose& active, double u) {
  if (idle.joints.size() != active.joints.size()) {
    fail(ErrorCode::InvalidInput,
         fmt::format("cannot blend poses with {} and {} joints", idle.joints.size(), active.joints.size()));
  }
  if (u <= 0.0) return idle;
  if (u >= 1.0) return active;
  Pose out;
  out.root_position = (1.0 - u) * idle.root_position + u * active.root_position;
  out.joints.reserve(idle.joints.size());
  for (std::size_t j = 0; j < idle.joints.size(); ++j) {
    const Mat3 r = slerp(euler_xyz_to_matrix(idle.joints[j]), euler_xyz_to_matrix(active.joints[j]), u);
    out.joints.push_back(matrix_to_euler_xyz(r).angles);
  }
  return out;
}

std::vector<Vec2> clip_ground_path(const RetargetedClip& clip, const Vec2& spawn, double spawn_yaw) {
  if (clip.frames.empty()) fail(ErrorCode::InvalidInput, fmt::format("clip '{}' has no frames", clip.id));
  const Vec2 fwd(std::cos(spawn_yaw), std::sin(spawn_yaw));
  const Vec2 right(std::sin(spawn_yaw), -std::cos(spawn_yaw));
  const Vec3& origin = clip.frames.front().root_position;
  // Express displacements relative to the initial facing on the ground plane.
  const Vec3 facing = euler_xyz_to_matrix(clip.frames.front().root_euler) * Vec3::UnitX();
  const double h0 = std::hypot(facing.x(), facing.y()) > 1e-9 ? std::atan2(-facing.y(), facing.x()) : 0.0;
  const double c = std::cos(h0);
  const double s = std::sin(h0);
  std::vector<Vec2> path;
  path.reserve(clip.frames.size());
  for (const ClipFrame& f : clip.frames) {
    const Vec3 d = f.root_position - origin;
    // Clip ground axes are x forward, y right.
    const double along = c * d.x() - s * d.y();
    const double across = s * d.x() + c * d.y();
    path.push_back(spawn + along * fwd + across * right);
  }
  return path;
}

namespace {

std::optional<StaticHit> path_hit(const std::vector<Vec2>& path, double radius, std::span<const OrientedBox> obstacles,
                                  std::size_t lookahead) {
  const std::size_t steps = std::min(lookahead, path.size() - 1);
  std::vector<OrientedBox> sweep;
  sweep.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) sweep.push_back(sweep_box(path[i], path[i + 1], radius));
  return static_collision_check(sweep, obstacles);
}

}  // namespace

RerouteResult reroute(const std::vector<Vec2>& remaining, double radius, std::span<const OrientedBox> obstacles,
                      std::size_t lookahead) {
  RerouteResult result;
  if (remaining.size() < 2 || !path_hit(remaining, radius, obstacles, lookahead)) {
    result.path = remaining;
    return result;
  }
  const Vec2 c = remaining.front();
  for (double deg : kRerouteOffsetsDeg) {
    const double a = deg * std::numbers::pi / 180.0;
    const Eigen::Rotation2Dd rot(a);
    std::vector<Vec2> candidate;
    candidate.reserve(remaining.size());
    for (const Vec2& p : remaining) candidate.push_back(c + rot * (p - c));
    if (!path_hit(candidate, radius, obstacles, lookahead)) {
      result.path = std::move(candidate);
      result.offset_deg = deg;
      return result;
    }
  }
  result.path.assign(remaining.size(), c);
  result.halted = true;
  return result;
}

// ---------------------------------------------------------------------------

namespace {

struct PedState {
  const PedestrianSpec* spec = nullptr;
  const RetargetedClip* clip = nullptr;
  const RetargetedClip* idle = nullptr;
  PedestrianPhase phase = PedestrianPhase::Idle;
  std::vector<Vec2> path;
  double phase_start = 0.0;
  std::size_t frame = 0;
  std::size_t loop_offset = 0;
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  bool rerouted = false;
  bool halted = false;
  bool collided = false;
  bool in_corridor = false;
};

struct VehicleState {
  const VehicleSpec* spec = nullptr;
  Polyline path;
};

}  // namespace

struct Simulator::Impl {
  ScenarioSpec spec;
  Planner& planner;
  SimOptions options;
  Polyline route;
  double corridor_half_width = 0.0;
  std::vector<PedState> peds;
  std::vector<VehicleState> vehicles;
  EgoState ego;
  int tick = 0;
  bool finished = false;
  std::size_t lookahead = 20;
  // Brake detection.
  std::optional<int> brake_onset;
  bool brake_logged = false;
  ScenarioLog log;

  Impl(const ScenarioSpec& s, const ClipLibrary& clips, Planner& p, SimOptions o)
      : spec(s), planner(p), options(o) {
    spec.validate();
    if (!(options.tick > 0.0)) fail(ErrorCode::InvalidInput, "tick must be positive");
    route = Polyline(spec.route);
    corridor_half_width = 0.5 * spec.ego.width + spec.corridor_margin;
    lookahead = static_cast<std::size_t>(std::lround(options.reroute_lookahead / options.tick));

    Rng rng(spec.seed);
    for (const PedestrianSpec& ps : spec.pedestrians) {
      PedState st;
      st.spec = &ps;
      st.clip = find_clip(clips, ps.id, ps.clip);
      if (ps.idle_clip) st.idle = find_clip(clips, ps.id, *ps.idle_clip);
      st.path = clip_ground_path(*st.clip, ps.spawn, ps.spawn_yaw);
      st.position = st.path.front();
      if (ps.role == PedestrianRole::Ambient) {
        st.phase = PedestrianPhase::Active;
        st.loop_offset = rng.index(st.path.size());
        st.position = st.path[st.loop_offset];
      }
      peds.push_back(std::move(st));
    }
    for (const VehicleSpec& vs : spec.vehicles) vehicles.push_back({&vs, Polyline(vs.path)});

    ego.length = spec.ego.length;
    ego.width = spec.ego.width;
    ego.speed = spec.ego.speed;
    place_ego(0.0);

    planner.reset(spec.seed);
    log.header = {spec.id, spec.seed, options.tick, planner.name()};
    log.events.push_back({0.0, EventKind::RunStart, {"ego"}, std::nullopt, std::nullopt, ""});
    update_corridor(0.0);
    record_tracks();
  }

  static const RetargetedClip* find_clip(const ClipLibrary& clips, const std::string& ped, const std::string& name) {
    const auto it = clips.find(name);
    if (it == clips.end()) fail(ErrorCode::Validation, fmt::format("pedestrian '{}': unknown clip '{}'", ped, name));
    if (it->second.frames.empty()) fail(ErrorCode::Validation, fmt::format("clip '{}' has no frames", name));
    return &it->second;
  }

  double time_at(int k) const { return k * options.tick; }

  void place_ego(double station) {
    ego.station = std::min(station, route.length());
    ego.position = route.point_at(ego.station);
    const Vec2 t = route.tangent_at(ego.station);
    ego.heading = std::atan2(t.y(), t.x());
  }

  OrientedBox vehicle_box(const VehicleState& v, double t) const {
    const double s = std::min(v.spec->speed * t, v.path.length());
    const Vec2 tan = v.path.tangent_at(s);
    return {v.spec->id, v.path.point_at(s), Vec2(0.5 * v.spec->length, 0.5 * v.spec->width),
            std::atan2(tan.y(), tan.x())};
  }

  Observation observe() const {
    Observation obs;
    obs.tick = tick;
    obs.t = time_at(tick);
    obs.dt = options.tick;
    obs.ego = ego;
    obs.route_length = route.length();
    obs.corridor_half_width = corridor_half_width;
    obs.cruise_speed = spec.ego.speed;
    for (const PedState& p : peds) {
      const Polyline::Projection proj = route.project(p.position);
      obs.pedestrians.push_back({p.spec->id, p.position, p.velocity, p.spec->radius, proj.station, proj.lateral});
    }
    for (const VehicleState& v : vehicles) obs.vehicles.push_back(vehicle_box(v, obs.t));
    return obs;
  }

  void push(double t, EventKind kind, std::vector<std::string> agents, std::optional<double> impact = std::nullopt,
            std::optional<double> value = std::nullopt, std::string detail = {}) {
    log.events.push_back({t, kind, std::move(agents), impact, value, std::move(detail)});
  }

  void update_brake(const Control& c) {
    const bool cond = c.brake_signal > options.brake_signal_threshold || c.accel <= options.brake_accel_threshold;
    if (cond) {
      if (!brake_onset) brake_onset = tick;
      const double held = (tick - *brake_onset + 1) * options.tick;
      if (!brake_logged && held >= options.brake_sustain - 1e-9) {
        push(time_at(*brake_onset), EventKind::BrakeStart, {"ego"});
        brake_logged = true;
      }
    } else {
      if (brake_logged) push(time_at(tick), EventKind::BrakeEnd, {"ego"});
      brake_onset.reset();
      brake_logged = false;
    }
  }

  void advance_pedestrian(PedState& p, double t_next) {
    const Vec2 before = p.position;
    const PedestrianSpec& ps = *p.spec;
    const double fps = p.clip->fps;
    if (ps.role == PedestrianRole::Ambient) {
      p.frame = (p.loop_offset + static_cast<std::size_t>(tick + 1)) % p.path.size();
      p.position = p.path[p.frame];
    } else {
      if (p.phase == PedestrianPhase::Idle) {
        const bool fired = (ps.trigger.time && t_next >= *ps.trigger.time - 1e-9) ||
                           (!ps.trigger.time && evaluate_trigger(ego, p.position, ps.trigger));
        if (fired) {
          push(t_next, EventKind::TriggerFired, {ps.id});
          p.phase = PedestrianPhase::Blending;
          p.phase_start = t_next;
        }
      }
      if (p.phase == PedestrianPhase::Blending && t_next - p.phase_start >= spec.blend_duration - 1e-9) {
        p.phase = PedestrianPhase::Active;
        p.phase_start = t_next;
        p.frame = 0;
      } else if (p.phase == PedestrianPhase::Active) {
        if (!p.halted) check_reroute(p, t_next);
        p.frame = std::min(static_cast<std::size_t>(std::lround((t_next - p.phase_start) * fps)), p.path.size() - 1);
        p.position = p.path[p.frame];
        if (p.frame + 1 >= p.path.size()) p.phase = PedestrianPhase::Done;
      }
    }
    p.velocity = (p.position - before) / options.tick;
  }

  void check_reroute(PedState& p, double t) {
    if (spec.obstacles.empty() || p.frame + 1 >= p.path.size()) return;
    std::vector<Vec2> remaining(p.path.begin() + static_cast<std::ptrdiff_t>(p.frame), p.path.end());
    const auto hit = path_hit(remaining, p.spec->radius, spec.obstacles, lookahead);
    if (!hit) return;
    RerouteResult r = reroute(remaining, p.spec->radius, spec.obstacles, lookahead);
    std::copy(r.path.begin(), r.path.end(), p.path.begin() + static_cast<std::ptrdiff_t>(p.frame));
    p.rerouted = true;
    const std::string& obstacle = spec.obstacles[hit->obstacle].id;
    if (r.halted) {
      p.halted = true;
      push(t, EventKind::RerouteFailed, {p.spec->id, obstacle});
    } else {
      push(t, EventKind::Reroute, {p.spec->id, obstacle}, std::nullopt, r.offset_deg);
    }
  }

  void update_corridor(double t) {
    for (PedState& p : peds) {
      const bool inside = route.project(p.position).distance - p.spec->radius <= corridor_half_width;
      if (inside != p.in_corridor) {
        push(t, inside ? EventKind::CrossingEnter : EventKind::CrossingExit, {p.spec->id});
        p.in_corridor = inside;
      }
    }
  }

  void check_collisions(double t) {
    const OrientedBox box = ego.footprint();
    for (PedState& p : peds) {
      if (p.collided || !overlaps(box, Circle{p.position, p.spec->radius})) continue;
      p.collided = true;
      push(t, EventKind::Collision, {"ego", p.spec->id}, (ego.velocity() - p.velocity).norm());
    }
  }

  void record_tracks() {
    TrackSample s;
    s.tick = tick;
    s.t = time_at(tick);
    for (const PedState& p : peds) s.pedestrians.push_back({p.spec->id, p.position, p.rerouted});
    log.tracks.push_back(std::move(s));
  }

  void finish(double t, const std::string& termination) {
    finished = true;
    std::stable_sort(log.events.begin(), log.events.end(),
                     [](const Event& a, const Event& b) { return a.t < b.t; });
    log.events.push_back({t, EventKind::RunEnd, {"ego"}, std::nullopt, std::nullopt, termination});
    log.summary = {ego.station, t, termination == "route_complete", termination};
  }

  bool step() {
    if (finished) return false;
    const double t = time_at(tick);

    const Observation obs = observe();
    const auto started = std::chrono::steady_clock::now();
    Control control = planner.observe(obs);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (options.planner_budget > 0.0 && elapsed > options.planner_budget) {
      push(t, EventKind::Aborted, {"ego"}, std::nullopt, elapsed, "planner exceeded its time budget");
      finish(t, "aborted");
      return false;
    }
    if (!std::isfinite(control.accel) || !std::isfinite(control.brake_signal)) {
      fail(ErrorCode::Processing, fmt::format("planner '{}' returned a non-finite control at tick {}", planner.name(), tick));
    }
    for (const PedestrianObservation& p : obs.pedestrians) {
      if (auto pred = planner.predict(p.id); pred && !pred->empty()) {
        log.predictions.push_back({tick, p.id, std::move(*pred)});
      }
    }
    update_brake(control);

    const double accel = std::clamp(control.accel, options.accel_min, options.accel_max);
    ego.speed = std::max(0.0, ego.speed + accel * options.tick);
    place_ego(ego.station + ego.speed * options.tick);

    const double t_next = time_at(tick + 1);
    for (PedState& p : peds) advance_pedestrian(p, t_next);
    ++tick;

    check_collisions(t_next);
    update_corridor(t_next);
    record_tracks();

    if (ego.station >= route.length()) {
      finish(t_next, "route_complete");
    } else if (t_next >= spec.timeout - 1e-9) {
      finish(t_next, "timeout");
    }
    return !finished;
  }

  const PedState& ped(const std::string& id) const {
    for (const PedState& p : peds) {
      if (p.spec->id == id) return p;
    }
    fail(ErrorCode::InvalidInput, fmt::format("unknown pedestrian '{}'", id));
  }

  Pose pose(const std::string& id) const {
    const PedState& p = ped(id);
    const auto idle_pose = [&]() {
      if (!p.idle) return clip_pose(*p.clip, 0);
      return clip_pose(*p.idle, static_cast<std::size_t>(tick) % p.idle->frames.size());
    };
    switch (p.phase) {
      case PedestrianPhase::Idle: return idle_pose();
      case PedestrianPhase::Blending: {
        const double u = spec.blend_duration > 0.0 ? (time_at(tick) - p.phase_start) / spec.blend_duration : 1.0;
        return blend(idle_pose(), clip_pose(*p.clip, 0), u);
      }
      case PedestrianPhase::Active:
      case PedestrianPhase::Done: return clip_pose(*p.clip, p.frame);
    }
    return clip_pose(*p.clip, p.frame);
  }
};

Simulator::Simulator(const ScenarioSpec& spec, const ClipLibrary& clips, Planner& planner, SimOptions options)
    : impl_(std::make_unique<Impl>(spec, clips, planner, options)) {}

Simulator::~Simulator() = default;

bool Simulator::step() { return impl_->step(); }

ScenarioLog Simulator::run() {
  while (impl_->step()) {
  }
  return impl_->log;
}

const EgoState& Simulator::ego() const { return impl_->ego; }
double Simulator::time() const { return impl_->time_at(impl_->tick); }
PedestrianPhase Simulator::phase(const std::string& pedestrian_id) const { return impl_->ped(pedestrian_id).phase; }
Pose Simulator::pose(const std::string& pedestrian_id) const { return impl_->pose(pedestrian_id); }
const ScenarioLog& Simulator::log() const { return impl_->log; }

ScenarioLog run(const ScenarioSpec& spec, const ClipLibrary& clips, Planner& planner, const SimOptions& options) {
  Simulator sim(spec, clips, planner, options);
  return sim.run();
}

}  // namespace pedmotion
