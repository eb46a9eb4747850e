#include "pedmotion/motion.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include <fmt/format.h>

#include "pedmotion/error.hpp"

namespace pedmotion {

namespace {

bool finite(const EulerXYZ& e) { return std::isfinite(e.x) && std::isfinite(e.y) && std::isfinite(e.z); }

}  // namespace

void MotionSequence::validate() const {
  if (!(std::isfinite(fps) && fps > 0.0)) fail(ErrorCode::Validation, fmt::format("motion '{}': fps must be positive", id));
  if (frames.size() < 2) fail(ErrorCode::Validation, fmt::format("motion '{}': needs at least 2 frames", id));
  const std::size_t joints = frames.front().joints.size();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const MotionFrame& f = frames[i];
    if (f.joints.size() != joints) {
      fail(ErrorCode::Validation, fmt::format("motion '{}': frames[{}] has {} joints, expected {}", id, i,
                                              f.joints.size(), joints));
    }
    if (!f.root_6d.a1.allFinite() || !f.root_6d.a2.allFinite() || !f.root_vel.allFinite()) {
      fail(ErrorCode::Validation, fmt::format("motion '{}': frames[{}] has non-finite root values", id, i));
    }
    for (const AxisAngle& aa : f.joints) {
      if (!aa.allFinite()) fail(ErrorCode::Validation, fmt::format("motion '{}': frames[{}] has non-finite joints", id, i));
    }
  }
}

void RetargetedClip::validate() const {
  if (fps != kClipFps) fail(ErrorCode::Validation, fmt::format("clip '{}': fps must be {}", id, kClipFps));
  if (frames.empty()) fail(ErrorCode::Validation, fmt::format("clip '{}': no frames", id));
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const ClipFrame& f = frames[i];
    if (f.joints.size() != joint_names.size()) {
      fail(ErrorCode::Validation, fmt::format("clip '{}': frames[{}] has {} joints, expected {}", id, i,
                                              f.joints.size(), joint_names.size()));
    }
    if (!f.root_position.allFinite() || !finite(f.root_euler)) {
      fail(ErrorCode::Validation, fmt::format("clip '{}': frames[{}] has non-finite root values", id, i));
    }
    for (const EulerXYZ& e : f.joints) {
      if (!finite(e)) fail(ErrorCode::Validation, fmt::format("clip '{}': frames[{}] has non-finite joints", id, i));
    }
  }
}

void SkeletonMap::validate() const {
  if (source_joint_count <= 0) fail(ErrorCode::Validation, "skeleton map: source_joint_count must be positive");
  if (joints.empty()) fail(ErrorCode::Validation, "skeleton map: no target joints");
  std::set<std::string> names;
  std::set<int> used;
  for (const JointMapping& j : joints) {
    if (j.name.empty()) fail(ErrorCode::Validation, "skeleton map: empty target joint name");
    if (!names.insert(j.name).second) {
      fail(ErrorCode::Validation, fmt::format("skeleton map: duplicate target joint '{}'", j.name));
    }
    if (j.sources.empty()) fail(ErrorCode::Validation, fmt::format("skeleton map: joint '{}' has no source", j.name));
    for (int s : j.sources) {
      if (s < 0 || s >= source_joint_count) {
        fail(ErrorCode::Validation, fmt::format("skeleton map: joint '{}' source {} out of range", j.name, s));
      }
      if (!used.insert(s).second) {
        fail(ErrorCode::Validation,
             fmt::format("skeleton map: source joint {} appears in more than one target (at '{}')", s, j.name));
      }
    }
    if (!is_rotation(j.rest)) {
      fail(ErrorCode::Validation, fmt::format("skeleton map: joint '{}' rest is not a rotation", j.name));
    }
  }
}

std::vector<std::string> SkeletonMap::joint_names() const {
  std::vector<std::string> out;
  out.reserve(joints.size());
  for (const JointMapping& j : joints) out.push_back(j.name);
  return out;
}

const std::vector<std::string>& smpl_joint_names() {
  static const std::vector<std::string> names = {
      "Pelvis",     "L_Hip",      "R_Hip",      "Spine1",  "L_Knee",  "R_Knee",   "Spine2",  "L_Ankle",
      "R_Ankle",    "Spine3",     "L_Foot",     "R_Foot",  "Neck",    "L_Collar", "R_Collar", "Head",
      "L_Shoulder", "R_Shoulder", "L_Elbow",    "R_Elbow", "L_Wrist", "R_Wrist"};
  return names;
}

SkeletonMap SkeletonMap::carla_like() {
  using std::numbers::pi;
  SkeletonMap map;
  map.name = "carla-like";
  map.source_joint_count = kDefaultSourceJointCount;
  map.frame = FrameTransform::source_to_left_handed_zup();
  // Rest offsets are synthetic T-pose values in the target frame.
  map.joints = {
      {"crl_hips__C", {0}, Mat3::Identity()},
      {"crl_spine__C", {3}, rot_y(-0.1)},
      {"crl_spine01__C", {6, 9}, rot_y(0.05)},
      {"crl_neck__C", {12}, rot_y(0.15)},
      {"crl_Head__C", {15}, rot_y(-0.1)},
      {"crl_shoulder__L", {13}, rot_x(0.2)},
      {"crl_arm__L", {16}, rot_x(-pi / 2.0) * rot_z(0.1)},
      {"crl_foreArm__L", {18}, rot_z(0.3)},
      {"crl_hand__L", {20}, rot_x(-0.2)},
      {"crl_shoulder__R", {14}, rot_x(-0.2)},
      {"crl_arm__R", {17}, rot_x(pi / 2.0) * rot_z(-0.1)},
      {"crl_foreArm__R", {19}, rot_z(-0.3)},
      {"crl_hand__R", {21}, rot_x(0.2)},
      {"crl_thigh__L", {1}, rot_x(pi) * rot_z(0.05)},
      {"crl_leg__L", {4}, rot_y(0.1)},
      {"crl_foot__L", {7}, rot_y(pi / 2.0 - 0.3)},
      {"crl_toe__L", {10}, Mat3::Identity()},
      {"crl_thigh__R", {2}, rot_x(pi) * rot_z(-0.05)},
      {"crl_leg__R", {5}, rot_y(0.1)},
      {"crl_foot__R", {8}, rot_y(pi / 2.0 - 0.3)},
      {"crl_toe__R", {11}, Mat3::Identity()},
  };
  return map;
}

}  // namespace pedmotion
