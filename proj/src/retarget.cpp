#include "pedmotion/retarget.hpp"

#include <fmt/format.h>

#include "pedmotion/error.hpp"

namespace pedmotion {

Mat3 merge_chain(std::span<const Mat3> rots) {
  if (rots.empty()) fail(ErrorCode::InvalidInput, "merge chain is empty");
  Mat3 out = rots.front();
  for (std::size_t i = 1; i < rots.size(); ++i) out = out * rots[i];
  return out;
}

Mat3 merged_target_rotation(std::span<const AxisAngle> joint_aas, const JointMapping& joint,
                            const FrameTransform& frame) {
  std::vector<Mat3> chain;
  chain.reserve(joint.sources.size());
  for (int s : joint.sources) {
    const auto idx = static_cast<std::size_t>(s);
    if (s < 0 || idx >= joint_aas.size()) {
      fail(ErrorCode::InvalidInput, fmt::format("joint '{}': source {} out of range", joint.name, s));
    }
    chain.push_back(conjugate(axis_angle_to_matrix(joint_aas[idx]), frame));
  }
  return merge_chain(chain);
}

std::vector<EulerResult> retarget_frame(std::span<const AxisAngle> joint_aas, const SkeletonMap& map) {
  if (joint_aas.size() != static_cast<std::size_t>(map.source_joint_count)) {
    fail(ErrorCode::InvalidInput, fmt::format("pose has {} joints, skeleton map '{}' expects {}", joint_aas.size(),
                                              map.name, map.source_joint_count));
  }
  std::vector<EulerResult> out;
  out.reserve(map.joints.size());
  for (const JointMapping& joint : map.joints) {
    try {
      const Mat3 merged = merged_target_rotation(joint_aas, joint, map.frame);
      out.push_back(matrix_to_euler_xyz(rest_relative(joint.rest, merged)));
    } catch (const Error& e) {
      fail(e.code(), fmt::format("joint '{}': {}", joint.name, e.what()));
    }
  }
  return out;
}

RetargetedClip retarget_clip(const MotionSequence& seq, const SkeletonMap& map) {
  map.validate();
  const MotionSequence resampled = seq.fps == kClipFps ? seq : resample(seq, kClipFps);
  const GlobalTrajectory traj = reconstruct_global(resampled);
  const Mat3& c = map.frame.matrix();

  RetargetedClip clip;
  clip.id = seq.id;
  clip.fps = kClipFps;
  clip.annotation = seq.annotation;
  clip.joint_names = map.joint_names();
  clip.frames.reserve(resampled.frames.size());
  for (std::size_t t = 0; t < resampled.frames.size(); ++t) {
    ClipFrame frame;
    frame.root_position = c * traj.positions[t];
    const EulerResult root = matrix_to_euler_xyz(conjugate(traj.orientations[t], map.frame));
    frame.root_euler = root.angles;
    frame.gimbal_locked = root.gimbal_locked;
    std::vector<EulerResult> joints;
    try {
      joints = retarget_frame(resampled.frames[t].joints, map);
    } catch (const Error& e) {
      fail(e.code(), fmt::format("motion '{}': frames[{}]: {}", seq.id, t, e.what()));
    }
    frame.joints.reserve(joints.size());
    for (const EulerResult& j : joints) {
      frame.joints.push_back(j.angles);
      frame.gimbal_locked = frame.gimbal_locked || j.gimbal_locked;
    }
    clip.frames.push_back(std::move(frame));
  }
  return clip;
}

Mat3 unretarget_joint(const EulerXYZ& angles, const Mat3& rest) {
  return rest * euler_xyz_to_matrix(angles) * rest.transpose();
}

GlobalTrajectory clip_trajectory(const RetargetedClip& clip) {
  GlobalTrajectory traj;
  traj.id = clip.id;
  traj.fps = clip.fps;
  for (const ClipFrame& f : clip.frames) {
    traj.positions.push_back(f.root_position);
    traj.orientations.push_back(euler_xyz_to_matrix(f.root_euler));
  }
  return traj;
}

}  // namespace pedmotion
