#include "pedmotion/rotmath.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Geometry>
#include <fmt/format.h>

#include "pedmotion/error.hpp"

namespace pedmotion {

namespace {

Mat3 skew(const Vec3& w) {
  Mat3 k;
  k << 0.0, -w.z(), w.y(),  //
      w.z(), 0.0, -w.x(),   //
      -w.y(), w.x(), 0.0;
  return k;
}

bool all_finite(const Mat3& r) { return r.allFinite(); }

// Drops the sign of negative zeros so serialized output is canonical.
double unsign_zero(double v) { return v + 0.0; }

AxisAngle log_map(const Mat3& r) {
  const Vec3 v(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  const double s = 0.5 * v.norm();
  const double c = 0.5 * (r.trace() - 1.0);
  const double angle = std::atan2(s, c);

  if (c > -0.7) {
    if (s == 0.0) return Vec3::Zero();
    const double factor = s < 1e-10 ? 1.0 + angle * angle / 6.0 : angle / s;
    return 0.5 * factor * v;
  }

  // Near pi the skew part vanishes; recover the axis from the symmetric part
  // S = (1 - cos) * k k^T and take the sign from the skew part.
  const Mat3 sym = 0.5 * (r + r.transpose()) - c * Mat3::Identity();
  Eigen::Index i = 0;
  sym.diagonal().maxCoeff(&i);
  Vec3 axis = sym.col(i).normalized();
  const double dot = axis.dot(v);
  if (std::abs(dot) > 4.0 * std::numeric_limits<double>::epsilon()) {
    if (dot < 0.0) axis = -axis;
  } else {
    for (int k = 0; k < 3; ++k) {
      if (std::abs(axis[k]) > 1e-12) {
        if (axis[k] < 0.0) axis = -axis;
        break;
      }
    }
  }
  return angle * axis;
}

}  // namespace

FrameTransform::FrameTransform(const Mat3& c, bool handedness_flip) : c_(c), flip_(handedness_flip) {
  if (!all_finite(c)) fail(ErrorCode::InvalidRotation, "frame transform has non-finite entries");
  const double ortho = (c.transpose() * c - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (ortho > kRotationTolerance) {
    fail(ErrorCode::InvalidRotation, fmt::format("frame transform is not orthogonal (error {:.3g})", ortho));
  }
  const double expected_det = handedness_flip ? -1.0 : 1.0;
  if (std::abs(c.determinant() - expected_det) > kRotationTolerance) {
    fail(ErrorCode::InvalidRotation,
         fmt::format("frame transform determinant {:.6g} does not match handedness_flip={}", c.determinant(),
                     handedness_flip));
  }
}

FrameTransform FrameTransform::source_to_left_handed_zup() {
  Mat3 c;
  c << 0.0, 0.0, 1.0,  //
      -1.0, 0.0, 0.0,  //
      0.0, 1.0, 0.0;
  return FrameTransform(c, true);
}

Mat3 rot_x(double angle) {
  return Eigen::AngleAxisd(angle, Vec3::UnitX()).toRotationMatrix();
}
Mat3 rot_y(double angle) {
  return Eigen::AngleAxisd(angle, Vec3::UnitY()).toRotationMatrix();
}
Mat3 rot_z(double angle) {
  return Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix();
}

bool is_rotation(const Mat3& r, double tol) {
  if (!all_finite(r)) return false;
  if ((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(r.determinant() - 1.0) <= tol;
}

Mat3 axis_angle_to_matrix(const AxisAngle& aa) {
  if (!aa.allFinite()) fail(ErrorCode::InvalidInput, "axis-angle has non-finite components");
  const double theta2 = aa.squaredNorm();
  if (theta2 == 0.0) return Mat3::Identity();
  const double theta = std::sqrt(theta2);
  double a = 0.0;
  double b = 0.0;
  if (theta < 1e-4) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    const double half = std::sin(0.5 * theta);
    a = std::sin(theta) / theta;
    b = 2.0 * half * half / theta2;
  }
  const Mat3 k = skew(aa);
  return Mat3::Identity() + a * k + b * (k * k);
}

AxisAngle matrix_to_axis_angle(const Mat3& r) {
  if (!is_rotation(r)) fail(ErrorCode::InvalidRotation, "matrix is not a rotation");
  return log_map(r);
}

Mat3 sixd_to_matrix(const SixD& r) {
  if (!r.a1.allFinite() || !r.a2.allFinite()) fail(ErrorCode::Degenerate6D, "6D vector has non-finite components");
  const double n1 = r.a1.norm();
  const double n2_in = r.a2.norm();
  if (n1 == 0.0 || n2_in == 0.0) fail(ErrorCode::Degenerate6D, "6D vector has a zero column");
  const Vec3 b1 = r.a1 / n1;
  const Vec3 ortho = r.a2 - r.a2.dot(b1) * b1;
  const double n2 = ortho.norm();
  if (n2 <= 1e-12 * n2_in) fail(ErrorCode::Degenerate6D, "6D columns are parallel");
  const Vec3 b2 = ortho / n2;
  Mat3 out;
  out.col(0) = b1;
  out.col(1) = b2;
  out.col(2) = b1.cross(b2);
  return out;
}

SixD matrix_to_sixd(const Mat3& r) { return {r.col(0), r.col(1)}; }

EulerResult matrix_to_euler_xyz(const Mat3& r) {
  EulerResult out;
  const double pitch = std::atan2(r(0, 2), std::hypot(r(0, 0), r(0, 1)));
  out.angles.y = unsign_zero(pitch);
  if (std::numbers::pi / 2.0 - std::abs(pitch) <= kGimbalThreshold) {
    out.gimbal_locked = true;
    out.angles.x = 0.0;
    out.angles.z = unsign_zero(std::atan2(r(1, 0), r(1, 1)));
    return out;
  }
  out.angles.x = unsign_zero(std::atan2(-r(1, 2), r(2, 2)));
  out.angles.z = unsign_zero(std::atan2(-r(0, 1), r(0, 0)));
  return out;
}

Mat3 euler_xyz_to_matrix(const EulerXYZ& e) { return rot_x(e.x) * rot_y(e.y) * rot_z(e.z); }

Mat3 conjugate(const Mat3& r, const FrameTransform& c) {
  if (r == Mat3::Identity()) return r;
  return c.matrix() * r * c.matrix().transpose();
}

Mat3 rest_relative(const Mat3& r_ref, const Mat3& r) {
  if (r == Mat3::Identity()) return r;
  return r_ref.transpose() * r * r_ref;
}

double rotation_angle(const Mat3& r) {
  const Vec3 v(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  return std::atan2(0.5 * v.norm(), 0.5 * (r.trace() - 1.0));
}

Mat3 slerp(const Mat3& a, const Mat3& b, double u) {
  if (u == 0.0) return a;
  if (u == 1.0) return b;
  const AxisAngle w = log_map(a.transpose() * b);
  return a * axis_angle_to_matrix(u * w);
}

double max_abs_diff(const Mat3& a, const Mat3& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace pedmotion
