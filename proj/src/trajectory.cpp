#include "pedmotion/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pedmotion/error.hpp"

namespace pedmotion {

GlobalTrajectory reconstruct_global(const MotionSequence& seq, const Vec3& origin) {
  seq.validate();
  if (!origin.allFinite()) fail(ErrorCode::InvalidInput, "trajectory origin is not finite");
  GlobalTrajectory out;
  out.id = seq.id;
  out.fps = seq.fps;
  out.positions.reserve(seq.frames.size());
  out.orientations.reserve(seq.frames.size());
  Vec3 position = origin;
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    Mat3 r;
    try {
      r = sixd_to_matrix(seq.frames[t].root_6d);
    } catch (const Error& e) {
      fail(e.code(), fmt::format("motion '{}': frames[{}].root_6d: {}", seq.id, t, e.what()));
    }
    if (t > 0) position += r * seq.frames[t].root_vel;
    out.orientations.push_back(r);
    out.positions.push_back(position);
  }
  return out;
}

MotionSequence resample(const MotionSequence& seq, double target_hz) {
  seq.validate();
  if (!(std::isfinite(target_hz) && target_hz > 0.0)) fail(ErrorCode::InvalidInput, "target rate must be positive");
  if (target_hz > 10.0 * seq.fps) {
    fail(ErrorCode::InvalidInput,
         fmt::format("refusing to upsample '{}' from {} Hz to {} Hz (limit 10x)", seq.id, seq.fps, target_hz));
  }
  if (target_hz == seq.fps) return seq;

  const std::size_t n = seq.frames.size();
  const double span = static_cast<double>(n - 1);
  const auto m = static_cast<std::size_t>(std::max<long long>(2, std::llround(seq.duration() * target_hz) + 1));
  const GlobalTrajectory traj = reconstruct_global(seq);

  MotionSequence out;
  out.id = seq.id;
  out.fps = target_hz;
  out.annotation = seq.annotation;
  out.frames.resize(m);

  std::vector<Vec3> path(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double src = static_cast<double>(k) * span / static_cast<double>(m - 1);
    auto i = static_cast<std::size_t>(std::floor(src));
    double u = src - static_cast<double>(i);
    if (i >= n - 1) {
      i = n - 2;
      u = 1.0;
    }
    MotionFrame& frame = out.frames[k];
    const MotionFrame& a = seq.frames[i];
    const MotionFrame& b = seq.frames[i + 1];
    if (u == 0.0) {
      frame.root_6d = a.root_6d;
      frame.joints = a.joints;
      path[k] = traj.positions[i];
    } else if (u == 1.0) {
      frame.root_6d = b.root_6d;
      frame.joints = b.joints;
      path[k] = traj.positions[i + 1];
    } else {
      frame.root_6d = matrix_to_sixd(slerp(traj.orientations[i], traj.orientations[i + 1], u));
      frame.joints.resize(a.joints.size());
      for (std::size_t j = 0; j < a.joints.size(); ++j) {
        const Mat3 r = slerp(axis_angle_to_matrix(a.joints[j]), axis_angle_to_matrix(b.joints[j]), u);
        frame.joints[j] = matrix_to_axis_angle(r);
      }
      path[k] = (1.0 - u) * traj.positions[i] + u * traj.positions[i + 1];
    }
  }

  // Rebuild local displacements against the orientation the reconstruction
  // will see, so integrating the output walks through `path`.
  for (std::size_t k = 0; k < m; ++k) {
    const Mat3 r = sixd_to_matrix(out.frames[k].root_6d);
    if (k == 0) {
      const Vec3 world = traj.orientations[0] * seq.frames[0].root_vel * (seq.fps / target_hz);
      out.frames[0].root_vel = r.transpose() * world;
    } else {
      out.frames[k].root_vel = r.transpose() * (path[k] - path[k - 1]);
    }
  }
  return out;
}

std::string_view to_string(BehaviorClass c) {
  switch (c) {
    case BehaviorClass::NotCrossing: return "not_crossing";
    case BehaviorClass::Attempting: return "attempting";
    case BehaviorClass::Crossing: return "crossing";
  }
  return "not_crossing";
}

std::optional<BehaviorClass> behavior_class_from_string(std::string_view s) {
  for (BehaviorClass c : kBehaviorClasses) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

void ClassThresholds::validate() const {
  if (!(attempt_min > 0.0 && attempt_min < cross_min && std::isfinite(cross_min))) {
    fail(ErrorCode::InvalidInput, "class thresholds must satisfy 0 < attempt_min < cross_min");
  }
  if (!(forward_axis.allFinite() && forward_axis.norm() > 0.0)) {
    fail(ErrorCode::InvalidInput, "forward axis must be a nonzero vector");
  }
}

namespace {

Vec3 heading(const GlobalTrajectory& traj, const Vec3& forward_axis) {
  return traj.orientations.front() * forward_axis.normalized();
}

}  // namespace

double forward_displacement(const GlobalTrajectory& traj, const Vec3& forward_axis) {
  if (traj.positions.empty()) return 0.0;
  return (traj.positions.back() - traj.positions.front()).dot(heading(traj, forward_axis));
}

BehaviorClass classify(const GlobalTrajectory& traj, const ClassThresholds& th) {
  th.validate();
  const double d = forward_displacement(traj, th.forward_axis);
  if (d < th.attempt_min) return BehaviorClass::NotCrossing;
  if (d < th.cross_min) return BehaviorClass::Attempting;
  return BehaviorClass::Crossing;
}

std::vector<double> displacement_curve(const GlobalTrajectory& traj, std::size_t samples, const Vec3& forward_axis) {
  if (samples < 2) fail(ErrorCode::InvalidInput, "need at least 2 samples");
  const std::size_t n = traj.positions.size();
  if (n == 0) fail(ErrorCode::InvalidInput, fmt::format("trajectory '{}' is empty", traj.id));
  const Vec3 fwd = heading(traj, forward_axis);
  std::vector<double> disp(n);
  std::vector<double> param(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    disp[t] = (traj.positions[t] - traj.positions.front()).dot(fwd);
    if (t > 0) param[t] = param[t - 1] + (traj.positions[t] - traj.positions[t - 1]).norm();
  }
  std::vector<double> out(samples);
  if (n == 1) {
    std::fill(out.begin(), out.end(), disp.front());
    return out;
  }
  const double total = param.back();
  for (std::size_t t = 0; t < n; ++t) {
    param[t] = total > 0.0 ? param[t] / total : static_cast<double>(t) / static_cast<double>(n - 1);
  }
  for (std::size_t j = 0; j < samples; ++j) {
    const double q = static_cast<double>(j) / static_cast<double>(samples - 1);
    const auto ub = std::upper_bound(param.begin(), param.end(), q);
    std::size_t i = ub == param.begin() ? 0 : static_cast<std::size_t>(ub - param.begin()) - 1;
    if (i >= n - 1) i = n - 2;
    const double width = param[i + 1] - param[i];
    const double u = width > 0.0 ? std::clamp((q - param[i]) / width, 0.0, 1.0) : 1.0;
    out[j] = disp[i] + u * (disp[i + 1] - disp[i]);
  }
  return out;
}

TrajectoryStats class_stats(std::span<const std::pair<GlobalTrajectory, BehaviorClass>> trajs, std::size_t samples,
                            const Vec3& forward_axis) {
  TrajectoryStats stats;
  stats.samples = samples;
  for (BehaviorClass cls : kBehaviorClasses) {
    std::vector<std::vector<double>> curves;
    for (const auto& [traj, c] : trajs) {
      if (c == cls) curves.push_back(displacement_curve(traj, samples, forward_axis));
    }
    if (curves.empty()) {
      stats.warnings.push_back(fmt::format("class '{}' has no trajectories; omitted", to_string(cls)));
      continue;
    }
    ClassCurve curve;
    curve.cls = cls;
    curve.count = curves.size();
    curve.mean.assign(samples, 0.0);
    curve.variance.assign(samples, 0.0);
    const auto count = static_cast<double>(curves.size());
    for (std::size_t j = 0; j < samples; ++j) {
      double sum = 0.0;
      for (const auto& c : curves) sum += c[j];
      const double mean = sum / count;
      double sq = 0.0;
      for (const auto& c : curves) sq += (c[j] - mean) * (c[j] - mean);
      curve.mean[j] = mean;
      curve.variance[j] = sq / count;
    }
    stats.classes.push_back(std::move(curve));
  }
  return stats;
}

}  // namespace pedmotion
