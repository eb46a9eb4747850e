#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pedmotion/rotmath.hpp"

namespace pedmotion {

/// SMPL body joints without hands.
inline constexpr int kDefaultSourceJointCount = 22;
inline constexpr double kClipFps = 20.0;

struct MotionFrame {
  SixD root_6d;
  /// Root displacement for this frame in the root-local frame (meters per frame).
  Vec3 root_vel = Vec3::Zero();
  std::vector<AxisAngle> joints;
};

struct MotionSequence {
  std::string id;
  double fps = kClipFps;
  std::string annotation;
  std::vector<MotionFrame> frames;

  std::size_t joint_count() const { return frames.empty() ? 0 : frames.front().joints.size(); }
  double duration() const { return frames.size() < 2 ? 0.0 : static_cast<double>(frames.size() - 1) / fps; }

  /// Throws Validation on fps <= 0, fewer than two frames, ragged joint
  /// counts or non-finite values.
  void validate() const;
};

struct ClipFrame {
  /// World root position in the target frame (meters).
  Vec3 root_position = Vec3::Zero();
  EulerXYZ root_euler;
  std::vector<EulerXYZ> joints;
  bool gimbal_locked = false;
};

struct RetargetedClip {
  std::string id;
  double fps = kClipFps;
  std::string annotation;
  std::vector<std::string> joint_names;
  std::vector<ClipFrame> frames;

  void validate() const;
};

struct JointMapping {
  std::string name;
  /// Source joint indices, proximal to distal. Merged left to right.
  std::vector<int> sources;
  Mat3 rest = Mat3::Identity();
};

struct SkeletonMap {
  std::string name;
  int source_joint_count = kDefaultSourceJointCount;
  FrameTransform frame;
  std::vector<JointMapping> joints;

  /// Every joint has a source, sources are in range and unique across the
  /// map, and rest rotations are valid.
  void validate() const;

  std::vector<std::string> joint_names() const;

  /// Illustrative SMPL to CARLA-style map with synthetic T-pose offsets.
  static SkeletonMap carla_like();
};

/// SMPL joint names in index order for the default 22-joint body.
const std::vector<std::string>& smpl_joint_names();

}  // namespace pedmotion
