#pragma once

#include <array>

#include <Eigen/Core>

namespace pedmotion {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Rotation vector: direction is the axis, norm is the angle in radians.
using AxisAngle = Vec3;

/// Continuous 6D rotation representation: the first two columns of a
/// rotation matrix before orthonormalization.
struct SixD {
  Vec3 a1 = Vec3::UnitX();
  Vec3 a2 = Vec3::UnitY();

  static SixD from_array(const std::array<double, 6>& v) {
    return {Vec3(v[0], v[1], v[2]), Vec3(v[3], v[4], v[5])};
  }
  std::array<double, 6> to_array() const { return {a1.x(), a1.y(), a1.z(), a2.x(), a2.y(), a2.z()}; }
};

/// Intrinsic X-then-Y-then-Z Euler angles (radians): R = Rx(x) * Ry(y) * Rz(z).
/// `y` is the pitch and lies in [-pi/2, pi/2] after extraction.
struct EulerXYZ {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const EulerXYZ&) const = default;
};

struct EulerResult {
  EulerXYZ angles;
  bool gimbal_locked = false;
};

/// Orthogonal change of basis C used to express rotations in another frame.
/// A reflection (det = -1) is allowed when `handedness_flip` is set.
class FrameTransform {
 public:
  FrameTransform() = default;
  /// Throws InvalidRotation if `c` is not orthogonal or det(c) disagrees with the flag.
  FrameTransform(const Mat3& c, bool handedness_flip);

  const Mat3& matrix() const { return c_; }
  bool handedness_flip() const { return flip_; }

  /// Source frame: y-up, z-forward, right-handed (x is the body's left).
  /// Target frame: x-forward, y-right, z-up, left-handed.
  static FrameTransform source_to_left_handed_zup();

 private:
  Mat3 c_ = Mat3::Identity();
  bool flip_ = false;
};

inline constexpr double kRotationTolerance = 1e-9;
/// Distance from +-pi/2 pitch at which Euler extraction falls back.
inline constexpr double kGimbalThreshold = 1e-6;

Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);

/// True if `r` is orthonormal with det +1 within `tol`.
bool is_rotation(const Mat3& r, double tol = kRotationTolerance);

/// Exponential map of the skew-symmetric matrix of `aa` (Rodrigues' formula).
Mat3 axis_angle_to_matrix(const AxisAngle& aa);

/// Logarithm map. Returns the rotation vector with angle in [0, pi]. For an
/// angle of exactly pi the axis is chosen so that its first nonzero component
/// is positive.
AxisAngle matrix_to_axis_angle(const Mat3& r);

/// Gram-Schmidt projection of a 6D vector onto SO(3); columns are
/// [b1, b2, b1 x b2].
Mat3 sixd_to_matrix(const SixD& r);

/// First two columns of `r`.
SixD matrix_to_sixd(const Mat3& r);

/// Intrinsic XYZ extraction. Within kGimbalThreshold of |pitch| = pi/2 the
/// roll (x) is fixed to zero, the yaw (z) absorbs the remaining rotation and
/// the result is flagged.
EulerResult matrix_to_euler_xyz(const Mat3& r);

Mat3 euler_xyz_to_matrix(const EulerXYZ& e);

/// C * R * C^T.
Mat3 conjugate(const Mat3& r, const FrameTransform& c);

/// R_ref^T * R * R_ref.
Mat3 rest_relative(const Mat3& r_ref, const Mat3& r);

/// Rotation angle in [0, pi].
double rotation_angle(const Mat3& r);

/// Geodesic interpolation a * exp(u * log(a^T b)). Returns `a` exactly at
/// u = 0 and `b` exactly at u = 1.
Mat3 slerp(const Mat3& a, const Mat3& b, double u);

/// Max absolute elementwise difference.
double max_abs_diff(const Mat3& a, const Mat3& b);

}  // namespace pedmotion
