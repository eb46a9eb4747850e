#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pedmotion/motion.hpp"

namespace pedmotion {

struct GlobalTrajectory {
  std::string id;
  double fps = kClipFps;
  std::vector<Vec3> positions;
  std::vector<Mat3> orientations;

  std::size_t size() const { return positions.size(); }
};

/// Integrates root-local per-frame displacements into a world trajectory:
/// R_t from the 6D track, T_t = T0 + sum_{tau=1..t} R_tau * v_tau.
/// The velocity of frame 0 is not used.
GlobalTrajectory reconstruct_global(const MotionSequence& seq, const Vec3& origin = Vec3::Zero());

/// Resamples onto `target_hz`. Rotations are interpolated geodesically and
/// the root displacements are rebuilt from the interpolated world path, so
/// the reconstructed path passes through the original one at every output
/// frame and the total displacement is preserved. The output spans the same
/// duration as the input; when the duration is not a whole number of output
/// frames the sample spacing is stretched to land on the final frame.
/// Refuses to upsample by more than 10x.
MotionSequence resample(const MotionSequence& seq, double target_hz);

enum class BehaviorClass { NotCrossing = 0, Attempting = 1, Crossing = 2 };

inline constexpr std::array<BehaviorClass, 3> kBehaviorClasses = {
    BehaviorClass::NotCrossing, BehaviorClass::Attempting, BehaviorClass::Crossing};

std::string_view to_string(BehaviorClass c);
std::optional<BehaviorClass> behavior_class_from_string(std::string_view s);

struct ClassThresholds {
  double attempt_min = 0.5;
  double cross_min = 2.5;
  /// Body forward axis in the root-local frame of the source data.
  Vec3 forward_axis = Vec3::UnitZ();

  void validate() const;
};

/// Displacement from frame 0 to the last frame projected on the frame-0
/// heading.
double forward_displacement(const GlobalTrajectory& traj, const Vec3& forward_axis = Vec3::UnitZ());

/// Half-open bins: [-inf, attempt_min) NotCrossing, [attempt_min, cross_min)
/// Attempting, [cross_min, inf) Crossing.
BehaviorClass classify(const GlobalTrajectory& traj, const ClassThresholds& th = {});

inline constexpr std::size_t kStatsSamples = 100;

struct ClassCurve {
  BehaviorClass cls = BehaviorClass::NotCrossing;
  std::size_t count = 0;
  std::vector<double> mean;
  std::vector<double> variance;  // population variance
};

struct TrajectoryStats {
  std::size_t samples = kStatsSamples;
  std::vector<ClassCurve> classes;  // present classes in enum order
  std::vector<std::string> warnings;
};

/// Forward displacement along the path, resampled to `samples` points that
/// are uniform in normalized arc length. A path with zero length is sampled
/// uniformly in frame index instead.
std::vector<double> displacement_curve(const GlobalTrajectory& traj, std::size_t samples = kStatsSamples,
                                       const Vec3& forward_axis = Vec3::UnitZ());

/// Per-class mean and variance of the displacement curves. Classes without
/// members are omitted and noted in `warnings`.
TrajectoryStats class_stats(std::span<const std::pair<GlobalTrajectory, BehaviorClass>> trajs,
                            std::size_t samples = kStatsSamples, const Vec3& forward_axis = Vec3::UnitZ());

}  // namespace pedmotion
