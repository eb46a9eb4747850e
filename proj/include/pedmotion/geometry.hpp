#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pedmotion/rotmath.hpp"

namespace pedmotion {

/// Oriented rectangle on the ground plane.
struct OrientedBox {
  std::string id;
  Vec2 center = Vec2::Zero();
  Vec2 half_extents = Vec2::Ones();
  double yaw = 0.0;

  Vec2 axis_u() const;  // local +x
  Vec2 axis_v() const;  // local +y
  std::array<Vec2, 4> corners() const;
  bool contains(const Vec2& p) const;
};

struct Circle {
  Vec2 center = Vec2::Zero();
  double radius = 0.0;
};

/// Separating-axis test. Touching boundaries count as overlap.
bool overlaps(const OrientedBox& a, const OrientedBox& b);
bool overlaps(const OrientedBox& box, const Circle& circle);

/// Box covering a circle of `radius` swept from `from` to `to`.
OrientedBox sweep_box(const Vec2& from, const Vec2& to, double radius);

struct StaticHit {
  std::size_t step = 0;      // index into the sweep
  std::size_t obstacle = 0;  // index into the obstacle list
};

/// Earliest sweep step intersecting any obstacle; ties go to the lower
/// obstacle index.
std::optional<StaticHit> static_collision_check(std::span<const OrientedBox> sweep,
                                                std::span<const OrientedBox> obstacles);

/// Ground-plane polyline with arc-length parameterization.
class Polyline {
 public:
  Polyline() = default;
  explicit Polyline(std::vector<Vec2> points);

  const std::vector<Vec2>& points() const { return points_; }
  double length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

  /// Position at arc length `s`, clamped to the ends.
  Vec2 point_at(double s) const;
  /// Unit tangent at arc length `s`.
  Vec2 tangent_at(double s) const;

  struct Projection {
    double station = 0.0;   // arc length of the closest point
    double lateral = 0.0;   // signed distance, positive to the left of travel
    double distance = 0.0;  // unsigned distance to the polyline
  };
  Projection project(const Vec2& p) const;

 private:
  std::size_t segment_at(double s) const;

  std::vector<Vec2> points_;
  std::vector<double> cumulative_;
};

double wrap_angle(double a);

}  // namespace pedmotion
