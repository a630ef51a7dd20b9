#pragma once

#include <optional>
#include <stdexcept>

#include "cablesim/core_model.hpp"

namespace cablesim {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularityError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class SpeedLimitError : public std::runtime_error {
 public:
  SpeedLimitError(double requested, double limit);
  double requested() const { return requested_; }
  double limit() const { return limit_; }
  // Factor in (0, 1) that brings the request back inside the limit.
  double scale() const { return limit_ / std::abs(requested_); }

 private:
  double requested_;
  double limit_;
};

inline constexpr double kSingularityEps = 1e-3;

// Per-cable length and direction. angle is the direction of the unit vector
// pointing from the payload away from the anchor.
struct CableGeom {
  PerCable<double> length{};
  PerCable<double> angle{};

  Vec2 unit(Cable c) const;
};

enum class Side { kLeft, kRight };

inline Cable side_cable(Side s) { return s == Side::kLeft ? Cable::kLeft : Cable::kRight; }
inline Side other_side(Side s) { return s == Side::kLeft ? Side::kRight : Side::kLeft; }

CableGeom cable_geometry(Vec2 p, const RobotGeometry& g);

// Half-plane rule. Payload exactly under the top anchor resolves to Right.
Side active_side(Vec2 p, const RobotGeometry& g);

struct CableRates {
  double top = 0.0;   // m/s, positive = paying out
  double side = 0.0;  // m/s
};

// Unique cable rates (top, driven side) realizing Cartesian velocity v.
// Throws SingularityError when |sin(alpha_top - alpha_side)| <= eps.
CableRates inverse_velocity(double alpha_top, double alpha_side, Vec2 v,
                            double eps = kSingularityEps);

// Cartesian velocity produced by the two cable rates (inverse of the above).
Vec2 forward_velocity(double alpha_top, double alpha_side, CableRates rates,
                      double eps = kSingularityEps);

// Motor shaft speed for a cable rate. Throws SpeedLimitError past max_speed.
double cable_rate_to_motor_speed(double cable_rate, const MotorParams& m);

struct ArcState {
  double radius = 0.0;
  double phi = 0.0;  // rad from straight-down, positive toward +x
  Vec2 tangent;      // unit, direction of increasing phi
};

ArcState constrained_arc_state(Vec2 p, const RobotGeometry& g);

// Lower intersection of two anchor circles; nullopt when they do not meet.
std::optional<Vec2> circle_intersection_lower(Vec2 a0, double r0, Vec2 a1, double r1);

}  // namespace cablesim
