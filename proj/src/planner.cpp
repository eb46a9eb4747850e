#include "pedmotion/planner.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "pedmotion/error.hpp"
#include "planner_protocol.hpp"

namespace pedmotion {

OrientedBox EgoState::footprint() const {
  OrientedBox box;
  box.id = "ego";
  box.center = position;
  box.half_extents = Vec2(0.5 * length, 0.5 * width);
  box.yaw = heading;
  return box;
}

Vec2 EgoState::velocity() const { return speed * Vec2(std::cos(heading), std::sin(heading)); }

namespace {

double cruise_accel(const Observation& obs) {
  return std::clamp((obs.cruise_speed - obs.ego.speed) / obs.dt, -8.0, 3.0);
}

}  // namespace

Control ConstantSpeedPlanner::observe(const Observation& obs) {
  return {std::max(0.0, cruise_accel(obs)), 0.0};
}

void ReactiveBrakePlanner::reset(std::uint64_t) { last_ = Observation{}; }

Control ReactiveBrakePlanner::observe(const Observation& obs) {
  last_ = obs;
  for (const PedestrianObservation& p : obs.pedestrians) {
    const bool ahead = p.station >= obs.ego.station - 0.5 * obs.ego.length;
    const bool near = (p.position - obs.ego.position).norm() <= options_.range;
    const double edge = std::abs(p.lateral) - p.radius;
    const bool in_band = edge <= obs.corridor_half_width + options_.lateral_buffer;
    // Lateral speed toward the centerline, using the ego heading as the local route direction.
    const Vec2 normal(-std::sin(obs.ego.heading), std::cos(obs.ego.heading));
    const double closing = -std::copysign(1.0, p.lateral) * p.velocity.dot(normal);
    const bool threat = edge <= obs.corridor_half_width || closing > options_.closing_speed;
    if (ahead && near && in_band && threat) return {-8.0, 1.0};
  }
  return {cruise_accel(obs), 0.0};
}

std::optional<std::vector<Vec2>> ReactiveBrakePlanner::predict(const std::string& pedestrian_id) {
  if (options_.horizon <= 0) return std::nullopt;
  for (const PedestrianObservation& p : last_.pedestrians) {
    if (p.id != pedestrian_id) continue;
    if ((p.position - last_.ego.position).norm() > options_.predict_range) return std::nullopt;
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(options_.horizon));
    for (int k = 1; k <= options_.horizon; ++k) out.push_back(p.position + p.velocity * (last_.dt * k));
    return out;
  }
  return std::nullopt;
}

std::unique_ptr<Planner> make_planner(const std::string& id) {
  if (id == "constant_speed") return std::make_unique<ConstantSpeedPlanner>();
  if (id == "reactive_brake") return std::make_unique<ReactiveBrakePlanner>();
  fail(ErrorCode::InvalidInput, fmt::format("unknown planner '{}'", id));
}

// ---------------------------------------------------------------------------

namespace protocol {

namespace {

Json vec(const Vec2& v) { return Json::array({v.x(), v.y()}); }
Vec2 vec2(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

Json encode(const Observation& obs) {
  Json peds = Json::array();
  for (const PedestrianObservation& p : obs.pedestrians) {
    peds.push_back(Json{{"id", p.id},
                        {"position", vec(p.position)},
                        {"velocity", vec(p.velocity)},
                        {"radius", p.radius},
                        {"station", p.station},
                        {"lateral", p.lateral}});
  }
  Json vehicles = Json::array();
  for (const OrientedBox& b : obs.vehicles) {
    vehicles.push_back(Json{{"id", b.id}, {"center", vec(b.center)}, {"half_extents", vec(b.half_extents)}, {"yaw", b.yaw}});
  }
  return Json{{"type", "observe"},
              {"tick", obs.tick},
              {"t", obs.t},
              {"dt", obs.dt},
              {"route_length", obs.route_length},
              {"corridor_half_width", obs.corridor_half_width},
              {"cruise_speed", obs.cruise_speed},
              {"ego",
               Json{{"position", vec(obs.ego.position)},
                    {"heading", obs.ego.heading},
                    {"speed", obs.ego.speed},
                    {"length", obs.ego.length},
                    {"width", obs.ego.width},
                    {"station", obs.ego.station}}},
              {"pedestrians", std::move(peds)},
              {"vehicles", std::move(vehicles)}};
}

Observation decode_observation(const Json& j) {
  try {
    Observation obs;
    obs.tick = j.at("tick").get<int>();
    obs.t = j.at("t").get<double>();
    obs.dt = j.at("dt").get<double>();
    obs.route_length = j.at("route_length").get<double>();
    obs.corridor_half_width = j.at("corridor_half_width").get<double>();
    obs.cruise_speed = j.at("cruise_speed").get<double>();
    const Json& ego = j.at("ego");
    obs.ego.position = vec2(ego.at("position"));
    obs.ego.heading = ego.at("heading").get<double>();
    obs.ego.speed = ego.at("speed").get<double>();
    obs.ego.length = ego.at("length").get<double>();
    obs.ego.width = ego.at("width").get<double>();
    obs.ego.station = ego.at("station").get<double>();
    for (const Json& p : j.at("pedestrians")) {
      obs.pedestrians.push_back({p.at("id").get<std::string>(), vec2(p.at("position")), vec2(p.at("velocity")),
                                 p.at("radius").get<double>(), p.at("station").get<double>(),
                                 p.at("lateral").get<double>()});
    }
    for (const Json& v : j.at("vehicles")) {
      obs.vehicles.push_back({v.at("id").get<std::string>(), vec2(v.at("center")), vec2(v.at("half_extents")),
                              v.at("yaw").get<double>()});
    }
    return obs;
  } catch (const Json::exception& e) {
    fail(ErrorCode::Parse, fmt::format("observation: {}", e.what()));
  }
}

Json encode(const ControlMessage& msg) {
  Json preds = Json::object();
  for (const auto& [id, positions] : msg.predictions) {
    Json arr = Json::array();
    for (const Vec2& p : positions) arr.push_back(vec(p));
    preds[id] = std::move(arr);
  }
  return Json{{"type", "control"},
              {"accel", msg.control.accel},
              {"brake", msg.control.brake_signal},
              {"predictions", std::move(preds)}};
}

ControlMessage decode_control(const Json& j) {
  try {
    if (j.at("type").get<std::string>() != "control") fail(ErrorCode::Parse, "control: unexpected message type");
    ControlMessage msg;
    msg.control.accel = j.at("accel").get<double>();
    msg.control.brake_signal = j.at("brake").get<double>();
    if (const auto it = j.find("predictions"); it != j.end()) {
      for (const auto& [id, arr] : it->items()) {
        std::vector<Vec2> positions;
        for (const Json& p : arr) positions.push_back(vec2(p));
        msg.predictions[id] = std::move(positions);
      }
    }
    return msg;
  } catch (const Json::exception& e) {
    fail(ErrorCode::Parse, fmt::format("control: {}", e.what()));
  }
}

}  // namespace protocol

void serve_stdio(Planner& planner, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Json request = parse_json(line, "planner request");
    const std::string type = request.value("type", "");
    if (type == "reset") {
      planner.reset(request.value<std::uint64_t>("seed", 0));
      out << dump_line(Json{{"type", "ready"}, {"name", planner.name()}}) << '\n';
    } else if (type == "observe") {
      const Observation obs = protocol::decode_observation(request);
      protocol::ControlMessage msg;
      msg.control = planner.observe(obs);
      for (const PedestrianObservation& p : obs.pedestrians) {
        if (auto pred = planner.predict(p.id)) msg.predictions[p.id] = std::move(*pred);
      }
      out << dump_line(protocol::encode(msg)) << '\n';
    } else {
      out << dump_line(Json{{"type", "error"}, {"message", fmt::format("unknown request type '{}'", type)}}) << '\n';
    }
    out.flush();
  }
}

}  // namespace pedmotion
