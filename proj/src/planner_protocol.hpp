#pragma once

// JSON encoding of planner observations and controls shared by the stdio
// client and server.

#include <map>
#include <string>
#include <vector>

#include "pedmotion/motion_io.hpp"
#include "pedmotion/planner.hpp"

namespace pedmotion::protocol {

Json encode(const Observation& obs);
Observation decode_observation(const Json& j);

struct ControlMessage {
  Control control;
  std::map<std::string, std::vector<Vec2>> predictions;
};

Json encode(const ControlMessage& msg);
ControlMessage decode_control(const Json& j);

}  // namespace pedmotion::protocol
