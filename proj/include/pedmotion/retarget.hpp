#pragma once

#include <span>
#include <vector>

#include "pedmotion/motion.hpp"
#include "pedmotion/trajectory.hpp"

namespace pedmotion {

/// Left-to-right product of the chain. Throws InvalidInput on an empty list.
Mat3 merge_chain(std::span<const Mat3> rots);

/// Target-frame joint rotation before rest centering: every chain member is
/// exp-mapped, conjugated by C and merged.
Mat3 merged_target_rotation(std::span<const AxisAngle> joint_aas, const JointMapping& joint,
                            const FrameTransform& frame);

/// One frame of the SMPL to target pipeline. Returns one Euler triple per
/// target joint, in map order, with its gimbal flag.
std::vector<EulerResult> retarget_frame(std::span<const AxisAngle> joint_aas, const SkeletonMap& map);

/// Retargets a whole sequence. Sequences not at 20 Hz are resampled first.
/// Root positions are C * T_t from reconstruct_global; the root orientation
/// is C * R_t * C^T as Euler angles.
RetargetedClip retarget_clip(const MotionSequence& seq, const SkeletonMap& map);

/// Recovers the merged target rotation from emitted Euler angles:
/// R_ref * Euler(phi) * R_ref^T.
Mat3 unretarget_joint(const EulerXYZ& angles, const Mat3& rest);

/// Rebuilds a trajectory (target frame) from a clip's root track.
GlobalTrajectory clip_trajectory(const RetargetedClip& clip);

}  // namespace pedmotion
