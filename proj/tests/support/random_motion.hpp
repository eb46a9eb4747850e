#pragma once

#include <numbers>
#include <random>

#include <Eigen/Geometry>

#include "pedmotion/motion.hpp"

namespace pedmotion::testing {

inline Vec3 random_unit(std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  for (;;) {
    const Vec3 v(n(gen), n(gen), n(gen));
    if (v.norm() > 1e-6) return v.normalized();
  }
}

inline Vec3 random_axis_angle(std::mt19937_64& gen, double max_angle = std::numbers::pi) {
  std::uniform_real_distribution<double> a(0.0, max_angle);
  return random_unit(gen) * a(gen);
}

/// Unnormalized, non-orthogonal 6D vector well away from degeneracy.
inline SixD random_sixd(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  std::normal_distribution<double> noise(0.0, 0.1);
  const Mat3 r = Eigen::AngleAxisd(random_axis_angle(gen).norm(), random_unit(gen)).toRotationMatrix();
  const Vec3 a1 = r.col(0) * scale(gen) + Vec3(noise(gen), noise(gen), noise(gen));
  const Vec3 a2 = r.col(1) * scale(gen) + r.col(0) * noise(gen);
  return {a1, a2};
}

inline MotionSequence random_sequence(std::mt19937_64& gen, std::size_t frames, std::size_t joints = 22,
                                      double fps = 20.0) {
  std::uniform_real_distribution<double> vel(-0.1, 0.1);
  MotionSequence seq;
  seq.id = "random";
  seq.fps = fps;
  seq.annotation = "random motion";
  for (std::size_t t = 0; t < frames; ++t) {
    MotionFrame f;
    f.root_6d = random_sixd(gen);
    f.root_vel = Vec3(vel(gen), vel(gen), vel(gen));
    for (std::size_t j = 0; j < joints; ++j) f.joints.push_back(random_axis_angle(gen, 2.5));
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

/// Smoothly varying sequence: slow root yaw, forward walking, gentle joints.
inline MotionSequence smooth_sequence(std::mt19937_64& gen, std::size_t frames, double fps, std::size_t joints = 22) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double yaw0 = u(gen) * std::numbers::pi;
  const double yaw_rate = 0.3 * u(gen);
  const double speed = 1.0 + 0.5 * u(gen);
  MotionSequence seq;
  seq.id = "smooth";
  seq.fps = fps;
  for (std::size_t t = 0; t < frames; ++t) {
    const double time = static_cast<double>(t) / fps;
    MotionFrame f;
    const Mat3 r = Eigen::AngleAxisd(yaw0 + yaw_rate * time, Vec3::UnitY()).toRotationMatrix();
    f.root_6d = {r.col(0), r.col(1)};
    f.root_vel = Vec3(0.0, 0.0, speed / fps);
    for (std::size_t j = 0; j < joints; ++j) {
      f.joints.push_back(Vec3(0.4 * std::sin(2.0 * time + static_cast<double>(j)), 0.1, 0.0));
    }
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

}  // namespace pedmotion::testing
