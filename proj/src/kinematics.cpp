#include "cablesim/kinematics.hpp"

#include <cmath>

#include <fmt/format.h>

namespace cablesim {

SpeedLimitError::SpeedLimitError(double requested, double limit)
    : std::runtime_error(fmt::format("motor speed {:.3f} rad/s exceeds limit {:.3f} rad/s",
                                     requested, limit)),
      requested_(requested),
      limit_(limit) {}

Vec2 CableGeom::unit(Cable c) const {
  const double a = angle[idx(c)];
  return {std::cos(a), std::sin(a)};
}

CableGeom cable_geometry(Vec2 p, const RobotGeometry& g) {
  CableGeom out;
  for (Cable c : kAllCables) {
    const Vec2 away = p - g.anchor(c);
    const double d = away.norm();
    if (!(d > 0.0)) {
      throw GeometryError(fmt::format("payload coincides with the {} anchor", cable_name(c)));
    }
    out.length[idx(c)] = d;
    out.angle[idx(c)] = std::atan2(away.y, away.x);
  }
  return out;
}

Side active_side(Vec2 p, const RobotGeometry& g) {
  return p.x < g.anchor_top.x ? Side::kLeft : Side::kRight;
}

// The Jacobian maps cable rates to Cartesian velocity with entries
// -sin(a_j)/s, sin(a_1)/s, cos(a_j)/s, -cos(a_1)/s where s = sin(a_1 - a_j).
// Its inverse has rows (cos a_i, sin a_i): each rate is the projection of v
// onto that cable's away-from-anchor direction.
CableRates inverse_velocity(double alpha_top, double alpha_side, Vec2 v, double eps) {
  const double s = std::sin(alpha_top - alpha_side);
  if (std::abs(s) <= eps) {
    throw SingularityError(fmt::format("cables near collinear: |sin| = {:.3e}", std::abs(s)));
  }
  return {v.x * std::cos(alpha_top) + v.y * std::sin(alpha_top),
          v.x * std::cos(alpha_side) + v.y * std::sin(alpha_side)};
}

Vec2 forward_velocity(double alpha_top, double alpha_side, CableRates rates, double eps) {
  const double s = std::sin(alpha_top - alpha_side);
  if (std::abs(s) <= eps) {
    throw SingularityError(fmt::format("cables near collinear: |sin| = {:.3e}", std::abs(s)));
  }
  return {(-std::sin(alpha_side) * rates.top + std::sin(alpha_top) * rates.side) / s,
          (std::cos(alpha_side) * rates.top - std::cos(alpha_top) * rates.side) / s};
}

double cable_rate_to_motor_speed(double cable_rate, const MotorParams& m) {
  const double w = cable_rate / m.cable_per_rad();
  if (std::abs(w) > m.max_speed) throw SpeedLimitError(w, m.max_speed);
  return w;
}

ArcState constrained_arc_state(Vec2 p, const RobotGeometry& g) {
  const Vec2 rel = p - g.anchor_top;
  ArcState a;
  a.radius = rel.norm();
  if (!(a.radius > 0.0)) throw GeometryError("payload coincides with the top anchor");
  a.phi = std::atan2(rel.x, -rel.y);
  a.tangent = {std::cos(a.phi), std::sin(a.phi)};
  return a;
}

std::optional<Vec2> circle_intersection_lower(Vec2 a0, double r0, Vec2 a1, double r1) {
  const Vec2 d = a1 - a0;
  const double dist = d.norm();
  if (!(dist > 0.0) || dist > r0 + r1 || dist < std::abs(r0 - r1)) return std::nullopt;
  const double along = (r0 * r0 - r1 * r1 + dist * dist) / (2.0 * dist);
  const double h = std::sqrt(std::max(0.0, r0 * r0 - along * along));
  const Vec2 ex = (1.0 / dist) * d;
  const Vec2 ey{-ex.y, ex.x};
  const Vec2 base = a0 + along * ex;
  const Vec2 p1 = base + h * ey;
  const Vec2 p2 = base - h * ey;
  return p1.y <= p2.y ? p1 : p2;
}

}  // namespace cablesim
