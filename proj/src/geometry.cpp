#include "pedmotion/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pedmotion/error.hpp"

namespace pedmotion {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double projected_radius(const OrientedBox& b, const Vec2& axis) {
  return b.half_extents.x() * std::abs(b.axis_u().dot(axis)) + b.half_extents.y() * std::abs(b.axis_v().dot(axis));
}

}  // namespace

Vec2 OrientedBox::axis_u() const { return {std::cos(yaw), std::sin(yaw)}; }
Vec2 OrientedBox::axis_v() const { return {-std::sin(yaw), std::cos(yaw)}; }

std::array<Vec2, 4> OrientedBox::corners() const {
  const Vec2 u = axis_u() * half_extents.x();
  const Vec2 v = axis_v() * half_extents.y();
  return {center + u + v, center - u + v, center - u - v, center + u - v};
}

bool OrientedBox::contains(const Vec2& p) const {
  const Vec2 d = p - center;
  return std::abs(d.dot(axis_u())) <= half_extents.x() && std::abs(d.dot(axis_v())) <= half_extents.y();
}

bool overlaps(const OrientedBox& a, const OrientedBox& b) {
  const Vec2 delta = b.center - a.center;
  for (const Vec2& axis : {a.axis_u(), a.axis_v(), b.axis_u(), b.axis_v()}) {
    if (std::abs(delta.dot(axis)) > projected_radius(a, axis) + projected_radius(b, axis)) return false;
  }
  return true;
}

bool overlaps(const OrientedBox& box, const Circle& circle) {
  const Vec2 d = circle.center - box.center;
  const double lu = std::clamp(d.dot(box.axis_u()), -box.half_extents.x(), box.half_extents.x());
  const double lv = std::clamp(d.dot(box.axis_v()), -box.half_extents.y(), box.half_extents.y());
  const Vec2 closest = box.center + lu * box.axis_u() + lv * box.axis_v();
  return (circle.center - closest).squaredNorm() <= circle.radius * circle.radius;
}

OrientedBox sweep_box(const Vec2& from, const Vec2& to, double radius) {
  const Vec2 d = to - from;
  const double len = d.norm();
  OrientedBox box;
  box.center = 0.5 * (from + to);
  box.half_extents = Vec2(0.5 * len + radius, radius);
  box.yaw = len > 0.0 ? std::atan2(d.y(), d.x()) : 0.0;
  return box;
}

std::optional<StaticHit> static_collision_check(std::span<const OrientedBox> sweep,
                                                std::span<const OrientedBox> obstacles) {
  for (std::size_t s = 0; s < sweep.size(); ++s) {
    for (std::size_t o = 0; o < obstacles.size(); ++o) {
      if (overlaps(sweep[s], obstacles[o])) return StaticHit{s, o};
    }
  }
  return std::nullopt;
}

Polyline::Polyline(std::vector<Vec2> points) : points_(std::move(points)) {
  if (points_.size() < 2) fail(ErrorCode::InvalidInput, "polyline needs at least 2 points");
  cumulative_.resize(points_.size(), 0.0);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    cumulative_[i] = cumulative_[i - 1] + (points_[i] - points_[i - 1]).norm();
  }
  if (!(length() > 0.0)) fail(ErrorCode::InvalidInput, "polyline has zero length");
}

std::size_t Polyline::segment_at(double s) const {
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t i = it == cumulative_.begin() ? 0 : static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  i = std::min(i, points_.size() - 2);
  // Skip degenerate segments.
  while (i + 1 < points_.size() - 1 && cumulative_[i + 1] - cumulative_[i] <= 0.0) ++i;
  return i;
}

Vec2 Polyline::point_at(double s) const {
  s = std::clamp(s, 0.0, length());
  const std::size_t i = segment_at(s);
  const double seg = cumulative_[i + 1] - cumulative_[i];
  const double u = seg > 0.0 ? (s - cumulative_[i]) / seg : 0.0;
  return points_[i] + u * (points_[i + 1] - points_[i]);
}

Vec2 Polyline::tangent_at(double s) const {
  s = std::clamp(s, 0.0, length());
  const std::size_t i = segment_at(s);
  const Vec2 d = points_[i + 1] - points_[i];
  const double n = d.norm();
  return n > 0.0 ? Vec2(d / n) : Vec2(1.0, 0.0);
}

Polyline::Projection Polyline::project(const Vec2& p) const {
  Projection best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const Vec2 a = points_[i];
    const Vec2 d = points_[i + 1] - a;
    const double len2 = d.squaredNorm();
    if (len2 <= 0.0) continue;
    const double u = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    const Vec2 closest = a + u * d;
    const double d2 = (p - closest).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      const Vec2 t = d / std::sqrt(len2);
      best.station = cumulative_[i] + u * std::sqrt(len2);
      best.distance = std::sqrt(d2);
      best.lateral = cross2(t, p - a);
    }
  }
  return best;
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a + std::numbers::pi, two_pi);
  if (a < 0.0) a += two_pi;
  return a - std::numbers::pi;
}

}  // namespace pedmotion
