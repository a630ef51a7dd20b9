#include "cablesim/ptp.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace cablesim {

double TrapezoidProfile::position(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= t_total) return distance;
  const double a = v_peak / t_acc;
  if (t < t_acc) return 0.5 * a * t * t;
  if (t < t_acc + t_cruise) return 0.5 * v_peak * t_acc + v_peak * (t - t_acc);
  const double td = t_total - t;
  return distance - 0.5 * a * td * td;
}

double TrapezoidProfile::velocity(double t) const {
  if (t <= 0.0 || t >= t_total) return 0.0;
  const double a = v_peak / t_acc;
  if (t < t_acc) return a * t;
  if (t < t_acc + t_cruise) return v_peak;
  return a * (t_total - t);
}

double TrapezoidProfile::acceleration(double t) const {
  if (t <= 0.0 || t >= t_total) return 0.0;
  const double a = v_peak / t_acc;
  if (t < t_acc) return a;
  if (t < t_acc + t_cruise) return 0.0;
  return -a;
}

TrapezoidProfile trapezoid(double distance, double v_max, double a_max, double stretch_to) {
  using C = ProfileError::Constraint;
  if (!(distance > 0.0)) throw ProfileError(C::kDistance, "distance must be positive");
  if (!(v_max > 0.0)) throw ProfileError(C::kVelocity, "v_max must be positive");
  if (!(a_max > 0.0)) throw ProfileError(C::kAcceleration, "a_max must be positive");

  TrapezoidProfile p;
  p.distance = distance;
  p.v_max = v_max;
  p.a_max = a_max;
  if (distance < v_max * v_max / a_max) {
    p.shape = ProfileShape::kTriangular;
    p.v_peak = std::sqrt(distance * a_max);
    p.t_acc = p.v_peak / a_max;
    p.t_cruise = 0.0;
  } else {
    p.v_peak = v_max;
    p.t_acc = v_max / a_max;
    p.t_cruise = distance / v_max - p.t_acc;
  }
  p.t_total = 2.0 * p.t_acc + p.t_cruise;

  if (stretch_to <= 0.0) return p;
  const double tol = 1e-12 * p.t_total;
  if (stretch_to < p.t_total - tol) {
    throw ProfileError(C::kDuration,
                       fmt::format("stretch_to {} s is below the minimum {} s", stretch_to,
                                   p.t_total));
  }
  if (stretch_to <= p.t_total + tol) return p;

  // Cruise speed v with full-acceleration ramps: v^2 - a T v + a d = 0,
  // smaller root, in the form that does not cancel.
  const double disc = a_max * a_max * stretch_to * stretch_to - 4.0 * a_max * distance;
  const double v = 2.0 * a_max * distance / (a_max * stretch_to + std::sqrt(std::max(0.0, disc)));
  p.shape = ProfileShape::kTrapezoidal;
  p.v_peak = v;
  p.t_acc = v / a_max;
  p.t_total = stretch_to;
  p.t_cruise = std::max(0.0, stretch_to - 2.0 * p.t_acc);
  return p;
}

std::vector<int> PtpPlan::markers() const {
  std::vector<int> out{start_marker};
  for (const auto& s : segments) out.push_back(s.end_marker);
  return out;
}

std::size_t PtpPlan::segment_at(double t) const {
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (t < segments[i].t_start + segments[i].profile.t_total) return i;
  }
  return segments.empty() ? 0 : segments.size() - 1;
}

namespace {

Vec2 direction(const PtpSegment& s) {
  const Vec2 d = s.to - s.from;
  return (1.0 / d.norm()) * d;
}

}  // namespace

Vec2 PtpPlan::position(double t) const {
  if (segments.empty()) return {};
  if (t <= 0.0) return segments.front().from;
  const auto& s = segments[segment_at(t)];
  if (t >= s.t_start + s.profile.t_total) return s.to;
  return s.from + s.profile.position(t - s.t_start) * direction(s);
}

Vec2 PtpPlan::velocity(double t) const {
  if (segments.empty() || t <= 0.0) return {};
  const auto& s = segments[segment_at(t)];
  return s.profile.velocity(t - s.t_start) * direction(s);
}

std::string ptp_phase_label(const PtpPlan& plan, std::size_t segment) {
  const int from = segment == 0 ? plan.start_marker : plan.segments[segment - 1].end_marker;
  return fmt::format("{}-{}", from, plan.segments[segment].end_marker);
}

namespace {

struct Leg {
  Vec2 to;
  double v_max;
  bool transport;
  int marker;
};

std::vector<Leg> plan_legs(const RobotGeometry& g, Vec2 start, Vec2 target,
                           const ScenarioConfig& cfg) {
  const double low = g.ground_y + cfg.payload_halfwidth + cfg.ptp.drop_clearance;
  const double mirror_x = 2.0 * g.anchor_top.x - start.x;
  return {
      {{start.x, cfg.task.h_d}, cfg.task.lift_speed, false, 2},
      {{mirror_x, cfg.task.h_d}, cfg.ptp.v_max, true, 3},
      {{mirror_x, low}, cfg.task.lift_speed, false, 5},
      {{target.x, low}, cfg.ptp.v_max, true, 6},
      {target, cfg.task.fine_speed, false, 7},
  };
}

}  // namespace

double ptp_minimum_duration(const RobotGeometry& g, Vec2 start, Vec2 target,
                            const ScenarioConfig& cfg) {
  double total = 0.0;
  Vec2 from = start;
  for (const auto& leg : plan_legs(g, start, target, cfg)) {
    total += trapezoid((leg.to - from).norm(), leg.v_max, cfg.ptp.a_max).t_total;
    from = leg.to;
  }
  return total;
}

PtpPlan build_ptp_plan(const RobotGeometry& g, Vec2 start, Vec2 target,
                       double reference_duration, const ScenarioConfig& cfg) {
  const auto legs = plan_legs(g, start, target, cfg);
  std::vector<TrapezoidProfile> fastest;
  double fixed = 0.0;
  double transport = 0.0;
  Vec2 from = start;
  for (const auto& leg : legs) {
    fastest.push_back(trapezoid((leg.to - from).norm(), leg.v_max, cfg.ptp.a_max));
    (leg.transport ? transport : fixed) += fastest.back().t_total;
    from = leg.to;
  }
  const double k = (reference_duration - fixed) / transport;
  if (k < 1.0 - 1e-12) {
    throw ProfileError(ProfileError::Constraint::kDuration,
                       fmt::format("reference duration {} s is below the minimum {} s",
                                   reference_duration, fixed + transport));
  }

  PtpPlan plan;
  from = start;
  double t = 0.0;
  for (std::size_t i = 0; i < legs.size(); ++i) {
    PtpSegment s;
    s.from = from;
    s.to = legs[i].to;
    s.end_marker = legs[i].marker;
    s.t_start = t;
    if (legs[i].transport) {
      s.profile = trapezoid(fastest[i].distance, legs[i].v_max, cfg.ptp.a_max,
                            std::max(k, 1.0) * fastest[i].t_total);
      s.stretch = s.profile.t_total / fastest[i].t_total;
    } else {
      s.profile = fastest[i];
    }
    t += s.profile.t_total;
    from = s.to;
    plan.segments.push_back(s);
  }
  plan.total_time = t;
  return plan;
}

ActuatorCommand ptp_tracking_cmd(const PtpPlan& plan, double t, const SensorFrame& sensors,
                                 const ScenarioConfig& cfg) {
  const Vec2 v_des =
      plan.velocity(t) + cfg.ptp.kp * (plan.position(t) - sensors.position);
  ActuatorCommand cmd = cartesian_velocity_cmd(v_des, sensors, cfg, {.keep_inactive_taut = true});
  cmd.brake_energize = {true, true, true};
  return cmd;
}

}  // namespace cablesim
