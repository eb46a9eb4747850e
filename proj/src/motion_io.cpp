#include "pedmotion/motion_io.hpp"

#include <cmath>
#include <set>

#include <fmt/format.h>

#include "pedmotion/error.hpp"

namespace pedmotion {

namespace {

constexpr int kVersion = 1;

[[noreturn]] void parse_fail(const std::string& path, const std::string& msg) {
  fail(ErrorCode::Parse, fmt::format("{}: {}", path, msg));
}

double as_number(const Json& v, const std::string& path) {
  if (!v.is_number()) parse_fail(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) parse_fail(path, "number is not finite");
  return d;
}

std::int64_t as_integer(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) parse_fail(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t as_unsigned(const Json& v, const std::string& path) {
  if (!v.is_number_unsigned()) parse_fail(path, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string as_string(const Json& v, const std::string& path) {
  if (!v.is_string()) parse_fail(path, "expected a string");
  return v.get<std::string>();
}

bool as_bool(const Json& v, const std::string& path) {
  if (!v.is_boolean()) parse_fail(path, "expected a boolean");
  return v.get<bool>();
}

const Json& as_array(const Json& v, const std::string& path, std::optional<std::size_t> size = std::nullopt) {
  if (!v.is_array()) parse_fail(path, "expected an array");
  if (size && v.size() != *size) parse_fail(path, fmt::format("expected {} elements, got {}", *size, v.size()));
  return v;
}

Vec3 as_vec3(const Json& v, const std::string& path) {
  as_array(v, path, 3);
  return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]"), as_number(v[2], path + "[2]")};
}

Vec2 as_vec2(const Json& v, const std::string& path) {
  as_array(v, path, 2);
  return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]")};
}

EulerXYZ as_euler(const Json& v, const std::string& path) {
  const Vec3 e = as_vec3(v, path);
  return {e.x(), e.y(), e.z()};
}

Mat3 as_mat3(const Json& v, const std::string& path) {
  as_array(v, path, 3);
  Mat3 m;
  for (int r = 0; r < 3; ++r) m.row(r) = as_vec3(v[static_cast<std::size_t>(r)], fmt::format("{}[{}]", path, r));
  return m;
}

std::vector<std::string> as_strings(const Json& v, const std::string& path) {
  as_array(v, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_string(v[i], fmt::format("{}[{}]", path, i)));
  return out;
}

std::vector<double> as_numbers(const Json& v, const std::string& path) {
  as_array(v, path);
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], fmt::format("{}[{}]", path, i)));
  return out;
}

/// Required/optional member access with path-qualified errors.
class Fields {
 public:
  Fields(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj.is_object()) parse_fail(path_, "expected an object");
  }

  std::string path(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }

  const Json& at(std::string_view key) const {
    const auto it = obj_.find(key);
    if (it == obj_.end()) parse_fail(path(key), "missing required field");
    return *it;
  }
  const Json* find(std::string_view key) const {
    const auto it = obj_.find(key);
    return it == obj_.end() || it->is_null() ? nullptr : &*it;
  }

  double number(std::string_view k) const { return as_number(at(k), path(k)); }
  std::int64_t integer(std::string_view k) const { return as_integer(at(k), path(k)); }
  std::uint64_t unsigned_integer(std::string_view k) const { return as_unsigned(at(k), path(k)); }
  std::string string(std::string_view k) const { return as_string(at(k), path(k)); }
  bool boolean(std::string_view k) const { return as_bool(at(k), path(k)); }
  Vec2 vec2(std::string_view k) const { return as_vec2(at(k), path(k)); }
  Vec3 vec3(std::string_view k) const { return as_vec3(at(k), path(k)); }
  Mat3 mat3(std::string_view k) const { return as_mat3(at(k), path(k)); }
  const Json& array(std::string_view k) const { return as_array(at(k), path(k)); }
  Fields object(std::string_view k) const { return Fields(at(k), path(k)); }

  double number_or(std::string_view k, double fallback) const {
    const Json* v = find(k);
    return v ? as_number(*v, path(k)) : fallback;
  }

 private:
  const Json& obj_;
  std::string path_;
};

void check_format(const Fields& f, std::string_view expected) {
  const std::string format = f.string("format");
  if (format != expected) parse_fail("format", fmt::format("expected '{}', got '{}'", expected, format));
  const std::int64_t version = f.integer("version");
  if (version != kVersion) parse_fail("version", fmt::format("unsupported version {}", version));
}

Json header(std::string_view format) {
  Json j;
  j["format"] = format;
  j["version"] = kVersion;
  return j;
}

Json vec(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }
Json vec(const Vec2& v) { return Json::array({v.x(), v.y()}); }
Json vec(const EulerXYZ& e) { return Json::array({e.x, e.y, e.z}); }
Json mat(const Mat3& m) {
  return Json::array({vec(Vec3(m.row(0))), vec(Vec3(m.row(1))), vec(Vec3(m.row(2)))});
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string role_string(PedestrianRole r) { return r == PedestrianRole::Ambient ? "ambient" : "interactive"; }

}  // namespace

// ---------------------------------------------------------------------------
// Motion

std::string write_motion(const MotionSequence& seq) {
  seq.validate();
  Json j = header("pedmotion.motion");
  j["id"] = seq.id;
  j["fps"] = seq.fps;
  j["annotation"] = seq.annotation;
  j["joint_count"] = seq.joint_count();
  Json frames = Json::array();
  for (const MotionFrame& f : seq.frames) {
    Json fj;
    const auto r = f.root_6d.to_array();
    fj["root_6d"] = Json::array({r[0], r[1], r[2], r[3], r[4], r[5]});
    fj["root_vel"] = vec(f.root_vel);
    Json joints = Json::array();
    for (const AxisAngle& aa : f.joints) joints.push_back(vec(aa));
    fj["joints"] = std::move(joints);
    frames.push_back(std::move(fj));
  }
  j["frames"] = std::move(frames);
  return dump_canonical(j);
}

MotionSequence read_motion(std::string_view text) {
  const Json doc = parse_json(text, "motion");
  const Fields f(doc, "");
  check_format(f, "pedmotion.motion");
  MotionSequence seq;
  seq.id = f.string("id");
  seq.fps = f.number("fps");
  seq.annotation = f.string("annotation");
  const std::int64_t joint_count = f.integer("joint_count");
  if (joint_count < 0) parse_fail("joint_count", "must be non-negative");
  const Json& frames = f.array("frames");
  seq.frames.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Fields ff(frames[i], fmt::format("frames[{}]", i));
    MotionFrame frame;
    const Json& r6 = as_array(ff.at("root_6d"), ff.path("root_6d"), 6);
    std::array<double, 6> r{};
    for (std::size_t k = 0; k < 6; ++k) r[k] = as_number(r6[k], fmt::format("{}[{}]", ff.path("root_6d"), k));
    frame.root_6d = SixD::from_array(r);
    frame.root_vel = ff.vec3("root_vel");
    const Json& joints = ff.array("joints");
    if (joints.size() != static_cast<std::size_t>(joint_count)) {
      parse_fail(ff.path("joints"), fmt::format("expected {} joints, got {}", joint_count, joints.size()));
    }
    frame.joints.reserve(joints.size());
    for (std::size_t k = 0; k < joints.size(); ++k) {
      frame.joints.push_back(as_vec3(joints[k], fmt::format("{}[{}]", ff.path("joints"), k)));
    }
    seq.frames.push_back(std::move(frame));
  }
  seq.validate();
  return seq;
}

// ---------------------------------------------------------------------------
// Clip

std::string write_clip(const RetargetedClip& clip) {
  clip.validate();
  Json j = header("pedmotion.clip");
  j["id"] = clip.id;
  j["fps"] = clip.fps;
  j["annotation"] = clip.annotation;
  j["joint_names"] = clip.joint_names;
  Json frames = Json::array();
  for (const ClipFrame& f : clip.frames) {
    Json fj;
    fj["root_position"] = vec(f.root_position);
    fj["root_euler"] = vec(f.root_euler);
    Json joints = Json::array();
    for (const EulerXYZ& e : f.joints) joints.push_back(vec(e));
    fj["joints"] = std::move(joints);
    fj["gimbal_locked"] = f.gimbal_locked;
    frames.push_back(std::move(fj));
  }
  j["frames"] = std::move(frames);
  return dump_canonical(j);
}

RetargetedClip read_clip(std::string_view text) {
  const Json doc = parse_json(text, "clip");
  const Fields f(doc, "");
  check_format(f, "pedmotion.clip");
  RetargetedClip clip;
  clip.id = f.string("id");
  clip.fps = f.number("fps");
  clip.annotation = f.string("annotation");
  clip.joint_names = as_strings(f.at("joint_names"), "joint_names");
  const Json& frames = f.array("frames");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Fields ff(frames[i], fmt::format("frames[{}]", i));
    ClipFrame frame;
    frame.root_position = ff.vec3("root_position");
    frame.root_euler = as_euler(ff.at("root_euler"), ff.path("root_euler"));
    const Json& joints = ff.array("joints");
    if (joints.size() != clip.joint_names.size()) {
      parse_fail(ff.path("joints"), fmt::format("expected {} joints, got {}", clip.joint_names.size(), joints.size()));
    }
    for (std::size_t k = 0; k < joints.size(); ++k) {
      frame.joints.push_back(as_euler(joints[k], fmt::format("{}[{}]", ff.path("joints"), k)));
    }
    frame.gimbal_locked = ff.boolean("gimbal_locked");
    clip.frames.push_back(std::move(frame));
  }
  clip.validate();
  return clip;
}

// ---------------------------------------------------------------------------
// Skeleton map

std::string write_skeleton(const SkeletonMap& map) {
  map.validate();
  Json j = header("pedmotion.skeleton");
  j["name"] = map.name;
  j["source_joint_count"] = map.source_joint_count;
  Json ft;
  ft["matrix"] = mat(map.frame.matrix());
  ft["handedness_flip"] = map.frame.handedness_flip();
  j["frame_transform"] = std::move(ft);
  Json joints = Json::array();
  for (const JointMapping& jm : map.joints) {
    Json jj;
    jj["name"] = jm.name;
    jj["sources"] = jm.sources;
    jj["rest"] = mat(jm.rest);
    joints.push_back(std::move(jj));
  }
  j["joints"] = std::move(joints);
  return dump_canonical(j);
}

SkeletonMap read_skeleton(std::string_view text) {
  const Json doc = parse_json(text, "skeleton map");
  const Fields f(doc, "");
  check_format(f, "pedmotion.skeleton");
  SkeletonMap map;
  map.name = f.string("name");
  map.source_joint_count = static_cast<int>(f.integer("source_joint_count"));
  const Fields ft = f.object("frame_transform");
  try {
    map.frame = FrameTransform(ft.mat3("matrix"), ft.boolean("handedness_flip"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    fail(ErrorCode::Validation, fmt::format("frame_transform: {}", e.what()));
  }
  const Json& joints = f.array("joints");
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const Fields jf(joints[i], fmt::format("joints[{}]", i));
    JointMapping jm;
    jm.name = jf.string("name");
    const Json& sources = jf.array("sources");
    for (std::size_t k = 0; k < sources.size(); ++k) {
      jm.sources.push_back(static_cast<int>(as_integer(sources[k], fmt::format("{}[{}]", jf.path("sources"), k))));
    }
    jm.rest = jf.mat3("rest");
    map.joints.push_back(std::move(jm));
  }
  map.validate();
  return map;
}

// ---------------------------------------------------------------------------
// Scenario spec

std::string write_scenario(const ScenarioSpec& spec) {
  spec.validate();
  Json j = header("pedmotion.scenario");
  j["id"] = spec.id;
  j["seed"] = spec.seed;
  j["weather"] = spec.weather;
  j["vehicle_count"] = spec.vehicle_count;
  j["pedestrian_counts"] = Json{{"interactive", spec.interactive_count}, {"ambient", spec.ambient_count}};
  j["timeout"] = spec.timeout;
  j["blend_duration"] = spec.blend_duration;
  j["corridor_margin"] = spec.corridor_margin;
  Json route = Json::array();
  for (const Vec2& p : spec.route) route.push_back(vec(p));
  j["route"] = std::move(route);
  j["ego"] = Json{{"length", spec.ego.length},
                  {"width", spec.ego.width},
                  {"speed", spec.ego.speed},
                  {"planner", spec.ego.planner}};
  Json peds = Json::array();
  for (const PedestrianSpec& p : spec.pedestrians) {
    Json pj;
    pj["id"] = p.id;
    pj["clip"] = p.clip;
    if (p.idle_clip) pj["idle_clip"] = *p.idle_clip;
    pj["spawn"] = Json::array({p.spawn.x(), p.spawn.y(), p.spawn_yaw});
    pj["role"] = role_string(p.role);
    pj["radius"] = p.radius;
    Json tj{{"radius", p.trigger.radius}, {"half_angle", p.trigger.half_angle}};
    if (p.trigger.time) tj["time"] = *p.trigger.time;
    pj["trigger"] = std::move(tj);
    peds.push_back(std::move(pj));
  }
  j["pedestrians"] = std::move(peds);
  Json obstacles = Json::array();
  for (const OrientedBox& b : spec.obstacles) {
    obstacles.push_back(
        Json{{"id", b.id}, {"center", vec(b.center)}, {"half_extents", vec(b.half_extents)}, {"yaw", b.yaw}});
  }
  j["obstacles"] = std::move(obstacles);
  Json vehicles = Json::array();
  for (const VehicleSpec& v : spec.vehicles) {
    Json path = Json::array();
    for (const Vec2& p : v.path) path.push_back(vec(p));
    vehicles.push_back(Json{{"id", v.id}, {"path", std::move(path)}, {"speed", v.speed}, {"length", v.length},
                            {"width", v.width}});
  }
  j["vehicles"] = std::move(vehicles);
  return dump_canonical(j);
}

ScenarioSpec read_scenario(std::string_view text) {
  const Json doc = parse_json(text, "scenario");
  const Fields f(doc, "");
  check_format(f, "pedmotion.scenario");
  ScenarioSpec spec;
  spec.id = f.string("id");
  spec.seed = f.unsigned_integer("seed");
  spec.weather = f.string("weather");
  spec.vehicle_count = static_cast<int>(f.integer("vehicle_count"));
  const Fields counts = f.object("pedestrian_counts");
  spec.interactive_count = static_cast<int>(counts.integer("interactive"));
  spec.ambient_count = static_cast<int>(counts.integer("ambient"));
  spec.timeout = f.number("timeout");
  spec.blend_duration = f.number("blend_duration");
  spec.corridor_margin = f.number("corridor_margin");
  const Json& route = f.array("route");
  for (std::size_t i = 0; i < route.size(); ++i) spec.route.push_back(as_vec2(route[i], fmt::format("route[{}]", i)));
  const Fields ego = f.object("ego");
  spec.ego.length = ego.number("length");
  spec.ego.width = ego.number("width");
  spec.ego.speed = ego.number("speed");
  spec.ego.planner = ego.string("planner");
  const Json& peds = f.array("pedestrians");
  for (std::size_t i = 0; i < peds.size(); ++i) {
    const Fields pf(peds[i], fmt::format("pedestrians[{}]", i));
    PedestrianSpec p;
    p.id = pf.string("id");
    p.clip = pf.string("clip");
    if (const Json* idle = pf.find("idle_clip")) p.idle_clip = as_string(*idle, pf.path("idle_clip"));
    const Vec3 spawn = pf.vec3("spawn");
    p.spawn = spawn.head<2>();
    p.spawn_yaw = spawn.z();
    const std::string role = pf.string("role");
    if (role == "interactive") {
      p.role = PedestrianRole::Interactive;
    } else if (role == "ambient") {
      p.role = PedestrianRole::Ambient;
    } else {
      parse_fail(pf.path("role"), fmt::format("unknown role '{}'", role));
    }
    p.radius = pf.number("radius");
    const Fields tf = pf.object("trigger");
    p.trigger.radius = tf.number("radius");
    p.trigger.half_angle = tf.number("half_angle");
    if (const Json* t = tf.find("time")) p.trigger.time = as_number(*t, tf.path("time"));
    spec.pedestrians.push_back(std::move(p));
  }
  const Json& obstacles = f.array("obstacles");
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const Fields of(obstacles[i], fmt::format("obstacles[{}]", i));
    spec.obstacles.push_back({of.string("id"), of.vec2("center"), of.vec2("half_extents"), of.number("yaw")});
  }
  const Json& vehicles = f.array("vehicles");
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const Fields vf(vehicles[i], fmt::format("vehicles[{}]", i));
    VehicleSpec v;
    v.id = vf.string("id");
    const Json& path = vf.array("path");
    for (std::size_t k = 0; k < path.size(); ++k) v.path.push_back(as_vec2(path[k], fmt::format("{}[{}]", vf.path("path"), k)));
    v.speed = vf.number("speed");
    v.length = vf.number("length");
    v.width = vf.number("width");
    spec.vehicles.push_back(std::move(v));
  }
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------
// Scenario log

std::string write_log(const ScenarioLog& log) {
  log.validate();
  std::string out;
  auto line = [&out](const Json& j) {
    out += dump_line(j);
    out += '\n';
  };
  line(Json{{"type", "header"},
            {"format", "pedmotion.log"},
            {"version", kVersion},
            {"scenario", log.header.scenario},
            {"seed", log.header.seed},
            {"tick", log.header.tick},
            {"planner", log.header.planner}});
  for (const Event& e : log.events) {
    Json j{{"type", "event"}, {"t", e.t}, {"kind", to_string(e.kind)}, {"agents", e.agents}};
    if (e.impact_speed) j["impact_speed"] = *e.impact_speed;
    if (e.value) j["value"] = *e.value;
    if (!e.detail.empty()) j["detail"] = e.detail;
    line(j);
  }
  for (const TrackSample& s : log.tracks) {
    Json peds = Json::array();
    for (const PedestrianSample& p : s.pedestrians) {
      Json pj{{"id", p.id}, {"position", vec(p.position)}};
      if (p.rerouted) pj["rerouted"] = true;
      peds.push_back(std::move(pj));
    }
    line(Json{{"type", "track"}, {"tick", s.tick}, {"t", s.t}, {"pedestrians", std::move(peds)}});
  }
  for (const Prediction& p : log.predictions) {
    Json pos = Json::array();
    for (const Vec2& v : p.positions) pos.push_back(vec(v));
    line(Json{{"type", "prediction"}, {"tick", p.tick}, {"pedestrian", p.pedestrian}, {"positions", std::move(pos)}});
  }
  line(Json{{"type", "summary"},
            {"distance_m", log.summary.distance_m},
            {"duration_s", log.summary.duration_s},
            {"completed", log.summary.completed},
            {"termination", log.summary.termination}});
  return out;
}

ScenarioLog read_log(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) parse_fail("line 1", "empty log");
  ScenarioLog log;
  bool have_summary = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = fmt::format("line {}", i + 1);
    const Json j = parse_json(lines[i], where);
    const Fields f(j, where);
    const std::string type = f.string("type");
    if (i == 0) {
      if (type != "header") parse_fail(where, "first line must be the header");
      if (f.string("format") != "pedmotion.log") parse_fail(f.path("format"), "expected 'pedmotion.log'");
      if (f.integer("version") != kVersion) parse_fail(f.path("version"), "unsupported version");
      log.header.scenario = f.string("scenario");
      log.header.seed = f.unsigned_integer("seed");
      log.header.tick = f.number("tick");
      log.header.planner = f.string("planner");
    } else if (type == "event") {
      Event e;
      e.t = f.number("t");
      const std::string kind = f.string("kind");
      const auto k = event_kind_from_string(kind);
      if (!k) parse_fail(f.path("kind"), fmt::format("unknown event kind '{}'", kind));
      e.kind = *k;
      e.agents = as_strings(f.at("agents"), f.path("agents"));
      if (const Json* v = f.find("impact_speed")) e.impact_speed = as_number(*v, f.path("impact_speed"));
      if (const Json* v = f.find("value")) e.value = as_number(*v, f.path("value"));
      if (const Json* v = f.find("detail")) e.detail = as_string(*v, f.path("detail"));
      log.events.push_back(std::move(e));
    } else if (type == "track") {
      TrackSample s;
      s.tick = static_cast<int>(f.integer("tick"));
      s.t = f.number("t");
      const Json& peds = f.array("pedestrians");
      for (std::size_t k = 0; k < peds.size(); ++k) {
        const Fields pf(peds[k], fmt::format("{}.pedestrians[{}]", where, k));
        PedestrianSample p;
        p.id = pf.string("id");
        p.position = pf.vec2("position");
        if (const Json* r = pf.find("rerouted")) p.rerouted = as_bool(*r, pf.path("rerouted"));
        s.pedestrians.push_back(std::move(p));
      }
      log.tracks.push_back(std::move(s));
    } else if (type == "prediction") {
      Prediction p;
      p.tick = static_cast<int>(f.integer("tick"));
      p.pedestrian = f.string("pedestrian");
      const Json& pos = f.array("positions");
      for (std::size_t k = 0; k < pos.size(); ++k) {
        p.positions.push_back(as_vec2(pos[k], fmt::format("{}.positions[{}]", where, k)));
      }
      log.predictions.push_back(std::move(p));
    } else if (type == "summary") {
      log.summary.distance_m = f.number("distance_m");
      log.summary.duration_s = f.number("duration_s");
      log.summary.completed = f.boolean("completed");
      log.summary.termination = f.string("termination");
      have_summary = true;
    } else {
      parse_fail(f.path("type"), fmt::format("unknown line type '{}'", type));
    }
  }
  if (!have_summary) parse_fail("summary", "missing summary line");
  log.validate();
  return log;
}

// ---------------------------------------------------------------------------
// Trajectory

std::string write_trajectory(const TrajectoryDocument& doc) {
  const GlobalTrajectory& t = doc.trajectory;
  if (t.positions.size() != t.orientations.size()) fail(ErrorCode::Validation, "trajectory: ragged frames");
  Json j = header("pedmotion.trajectory");
  j["id"] = t.id;
  j["fps"] = t.fps;
  j["behavior"] = to_string(doc.behavior);
  j["forward_displacement"] = doc.forward_displacement;
  Json frames = Json::array();
  for (std::size_t i = 0; i < t.size(); ++i) {
    frames.push_back(Json{{"position", vec(t.positions[i])}, {"orientation", mat(t.orientations[i])}});
  }
  j["frames"] = std::move(frames);
  return dump_canonical(j);
}

TrajectoryDocument read_trajectory(std::string_view text) {
  const Json j = parse_json(text, "trajectory");
  const Fields f(j, "");
  check_format(f, "pedmotion.trajectory");
  TrajectoryDocument doc;
  doc.trajectory.id = f.string("id");
  doc.trajectory.fps = f.number("fps");
  const std::string behavior = f.string("behavior");
  const auto cls = behavior_class_from_string(behavior);
  if (!cls) parse_fail("behavior", fmt::format("unknown class '{}'", behavior));
  doc.behavior = *cls;
  doc.forward_displacement = f.number("forward_displacement");
  const Json& frames = f.array("frames");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Fields ff(frames[i], fmt::format("frames[{}]", i));
    doc.trajectory.positions.push_back(ff.vec3("position"));
    const Mat3 r = ff.mat3("orientation");
    if (!is_rotation(r)) fail(ErrorCode::Validation, fmt::format("frames[{}].orientation: not a rotation", i));
    doc.trajectory.orientations.push_back(r);
  }
  if (!(doc.trajectory.fps > 0.0)) fail(ErrorCode::Validation, "trajectory: fps must be positive");
  return doc;
}

// ---------------------------------------------------------------------------
// Filter config, report and tags

std::string write_filter_config(const FilterConfig& config) {
  config.validate();
  Json j = header("pedmotion.filter_config");
  j["keywords"] = config.keywords;
  Json cats = Json::array();
  for (const TagCategory& c : config.categories) cats.push_back(Json{{"tag", c.tag}, {"stems", c.stems}});
  j["categories"] = std::move(cats);
  return dump_canonical(j);
}

FilterConfig read_filter_config(std::string_view text) {
  const Json j = parse_json(text, "filter config");
  const Fields f(j, "");
  check_format(f, "pedmotion.filter_config");
  FilterConfig config;
  config.keywords = as_strings(f.at("keywords"), "keywords");
  const Json& cats = f.array("categories");
  for (std::size_t i = 0; i < cats.size(); ++i) {
    const Fields cf(cats[i], fmt::format("categories[{}]", i));
    config.categories.push_back({cf.string("tag"), as_strings(cf.at("stems"), cf.path("stems"))});
  }
  config.validate();
  return config;
}

std::string write_filter_report(const std::vector<FilterDecision>& report) {
  std::string out;
  for (const FilterDecision& d : report) {
    out += dump_line(Json{{"type", "filter_decision"}, {"id", d.id}, {"accepted", d.accepted}, {"matched", d.matched}});
    out += '\n';
  }
  return out;
}

std::vector<FilterDecision> read_filter_report(std::string_view text) {
  std::vector<FilterDecision> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = fmt::format("line {}", i + 1);
    const Json j = parse_json(lines[i], where);
    const Fields f(j, where);
    if (f.string("type") != "filter_decision") parse_fail(f.path("type"), "expected 'filter_decision'");
    out.push_back({f.string("id"), f.boolean("accepted"), as_strings(f.at("matched"), f.path("matched"))});
  }
  return out;
}

std::string write_tags(const std::vector<TagRecord>& records) {
  Json j = header("pedmotion.tags");
  Json recs = Json::array();
  for (const TagRecord& r : records) {
    recs.push_back(Json{{"id", r.id}, {"tags", r.tags.tags}, {"matched", r.tags.matched}});
  }
  j["records"] = std::move(recs);
  return dump_canonical(j);
}

std::vector<TagRecord> read_tags(std::string_view text) {
  const Json j = parse_json(text, "tags");
  const Fields f(j, "");
  check_format(f, "pedmotion.tags");
  std::vector<TagRecord> out;
  const Json& recs = f.array("records");
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const Fields rf(recs[i], fmt::format("records[{}]", i));
    TagRecord r;
    r.id = rf.string("id");
    r.tags.tags = as_strings(rf.at("tags"), rf.path("tags"));
    r.tags.matched = as_strings(rf.at("matched"), rf.path("matched"));
    if (r.tags.tags.empty()) fail(ErrorCode::Validation, fmt::format("{}: empty tag set", rf.path("tags")));
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Statistics

std::string write_stats(const StatsDocument& stats) {
  Json j = header("pedmotion.stats");
  j["samples"] = stats.trajectory.samples;
  Json classes = Json::array();
  for (const ClassCurve& c : stats.trajectory.classes) {
    classes.push_back(Json{{"class", to_string(c.cls)}, {"count", c.count}, {"mean", c.mean}, {"variance", c.variance}});
  }
  j["classes"] = std::move(classes);
  j["warnings"] = stats.trajectory.warnings;
  Json tags;
  tags["tags"] = stats.tags.tags;
  tags["total"] = stats.tags.total;
  Json per_class = Json::array();
  for (BehaviorClass cls : kBehaviorClasses) {
    Json counts = Json::object();
    Json primary = Json::object();
    const auto tc = stats.tags.tag_counts.find(cls);
    const auto pc = stats.tags.primary_counts.find(cls);
    for (const std::string& tag : stats.tags.tags) {
      std::size_t n = 0;
      std::size_t p = 0;
      if (tc != stats.tags.tag_counts.end() && tc->second.count(tag)) n = tc->second.at(tag);
      if (pc != stats.tags.primary_counts.end() && pc->second.count(tag)) p = pc->second.at(tag);
      counts[tag] = n;
      primary[tag] = p;
    }
    per_class.push_back(Json{{"class", to_string(cls)}, {"tag_counts", counts}, {"primary_counts", primary}});
  }
  tags["classes"] = std::move(per_class);
  j["tags"] = std::move(tags);
  return dump_canonical(j);
}

StatsDocument read_stats(std::string_view text) {
  const Json j = parse_json(text, "stats");
  const Fields f(j, "");
  check_format(f, "pedmotion.stats");
  StatsDocument stats;
  stats.trajectory.samples = static_cast<std::size_t>(f.unsigned_integer("samples"));
  const Json& classes = f.array("classes");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const Fields cf(classes[i], fmt::format("classes[{}]", i));
    ClassCurve c;
    const std::string name = cf.string("class");
    const auto cls = behavior_class_from_string(name);
    if (!cls) parse_fail(cf.path("class"), fmt::format("unknown class '{}'", name));
    c.cls = *cls;
    c.count = static_cast<std::size_t>(cf.unsigned_integer("count"));
    c.mean = as_numbers(cf.at("mean"), cf.path("mean"));
    c.variance = as_numbers(cf.at("variance"), cf.path("variance"));
    if (c.mean.size() != stats.trajectory.samples || c.variance.size() != stats.trajectory.samples) {
      fail(ErrorCode::Validation, fmt::format("{}: curve length differs from samples", cf.path("mean")));
    }
    stats.trajectory.classes.push_back(std::move(c));
  }
  stats.trajectory.warnings = as_strings(f.at("warnings"), "warnings");
  const Fields tf = f.object("tags");
  stats.tags.tags = as_strings(tf.at("tags"), tf.path("tags"));
  stats.tags.total = static_cast<std::size_t>(tf.unsigned_integer("total"));
  const Json& per_class = tf.array("classes");
  for (std::size_t i = 0; i < per_class.size(); ++i) {
    const Fields cf(per_class[i], fmt::format("tags.classes[{}]", i));
    const std::string name = cf.string("class");
    const auto cls = behavior_class_from_string(name);
    if (!cls) parse_fail(cf.path("class"), fmt::format("unknown class '{}'", name));
    const Fields counts = cf.object("tag_counts");
    const Fields primary = cf.object("primary_counts");
    for (const std::string& tag : stats.tags.tags) {
      stats.tags.tag_counts[*cls][tag] = counts.unsigned_integer(tag);
      stats.tags.primary_counts[*cls][tag] = primary.unsigned_integer(tag);
    }
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Metrics report

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> read_optional(const Fields& f, std::string_view key) {
  const Json& v = f.at(key);
  if (v.is_null()) return std::nullopt;
  return as_number(v, f.path(key));
}

}  // namespace

std::string write_report(const MetricsReport& r) {
  Json j = header("pedmotion.report");
  j["collisions_per_km"] = r.collisions_per_km;
  j["mean_pmais3"] = r.mean_pmais3;
  j["fpbr"] = r.fpbr;
  j["ade"] = optional_number(r.ade);
  j["distance_km"] = r.distance_km;
  j["collisions"] = r.collisions;
  j["braking_events"] = r.braking_events;
  j["crossings"] = r.crossings;
  Json runs = Json::array();
  for (const RunMetrics& m : r.runs) {
    runs.push_back(Json{{"scenario", m.scenario},
                        {"planner", m.planner},
                        {"seed", m.seed},
                        {"distance_km", m.distance_km},
                        {"collisions", m.collisions},
                        {"braking_events", m.braking_events},
                        {"false_positive_brakes", m.false_positive_brakes},
                        {"crossings", m.crossings},
                        {"impact_speeds", m.impact_speeds},
                        {"collisions_per_km", m.collisions_per_km},
                        {"mean_pmais3", m.mean_pmais3},
                        {"fpbr", m.fpbr},
                        {"ade", optional_number(m.ade)}});
  }
  j["runs"] = std::move(runs);
  return dump_canonical(j);
}

MetricsReport read_report(std::string_view text) {
  const Json j = parse_json(text, "report");
  const Fields f(j, "");
  check_format(f, "pedmotion.report");
  MetricsReport r;
  r.collisions_per_km = f.number("collisions_per_km");
  r.mean_pmais3 = f.number("mean_pmais3");
  r.fpbr = f.number("fpbr");
  r.ade = read_optional(f, "ade");
  r.distance_km = f.number("distance_km");
  r.collisions = static_cast<std::size_t>(f.unsigned_integer("collisions"));
  r.braking_events = static_cast<std::size_t>(f.unsigned_integer("braking_events"));
  r.crossings = static_cast<std::size_t>(f.unsigned_integer("crossings"));
  const Json& runs = f.array("runs");
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const Fields rf(runs[i], fmt::format("runs[{}]", i));
    RunMetrics m;
    m.scenario = rf.string("scenario");
    m.planner = rf.string("planner");
    m.seed = rf.unsigned_integer("seed");
    m.distance_km = rf.number("distance_km");
    m.collisions = static_cast<std::size_t>(rf.unsigned_integer("collisions"));
    m.braking_events = static_cast<std::size_t>(rf.unsigned_integer("braking_events"));
    m.false_positive_brakes = static_cast<std::size_t>(rf.unsigned_integer("false_positive_brakes"));
    m.crossings = static_cast<std::size_t>(rf.unsigned_integer("crossings"));
    m.impact_speeds = as_numbers(rf.at("impact_speeds"), rf.path("impact_speeds"));
    m.collisions_per_km = rf.number("collisions_per_km");
    m.mean_pmais3 = rf.number("mean_pmais3");
    m.fpbr = rf.number("fpbr");
    m.ade = read_optional(rf, "ade");
    r.runs.push_back(std::move(m));
  }
  if (r.fpbr < 0.0 || r.fpbr > 1.0) fail(ErrorCode::Validation, "fpbr must lie in [0, 1]");
  return r;
}

// ---------------------------------------------------------------------------

std::string document_format(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) parse_fail("document", "empty input");
  // Multi-line canonical documents start with "{" alone on the first line.
  Json j;
  if (lines.front() == "{") {
    j = parse_json(text, "document");
  } else {
    j = parse_json(lines.front(), "line 1");
  }
  if (!j.is_object()) parse_fail("document", "expected an object");
  if (j.contains("format") && j["format"].is_string()) return j["format"].get<std::string>();
  if (j.contains("type") && j["type"].is_string()) return j["type"].get<std::string>();
  parse_fail("document", "no format tag");
}

std::string canonicalize(std::string_view text) {
  const std::string format = document_format(text);
  if (format == "pedmotion.motion") return write_motion(read_motion(text));
  if (format == "pedmotion.clip") return write_clip(read_clip(text));
  if (format == "pedmotion.skeleton") return write_skeleton(read_skeleton(text));
  if (format == "pedmotion.scenario") return write_scenario(read_scenario(text));
  if (format == "pedmotion.log") return write_log(read_log(text));
  if (format == "pedmotion.trajectory") return write_trajectory(read_trajectory(text));
  if (format == "pedmotion.filter_config") return write_filter_config(read_filter_config(text));
  if (format == "filter_decision") return write_filter_report(read_filter_report(text));
  if (format == "pedmotion.tags") return write_tags(read_tags(text));
  if (format == "pedmotion.stats") return write_stats(read_stats(text));
  if (format == "pedmotion.report") return write_report(read_report(text));
  parse_fail("format", fmt::format("unknown document format '{}'", format));
}

}  // namespace pedmotion
