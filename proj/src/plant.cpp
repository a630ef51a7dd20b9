#include "cablesim/plant.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace cablesim {

namespace {

constexpr double kTautTol = 1e-7;     // m
constexpr double kTensionTol = -1e-6;  // N, statics round-off

std::string describe(const PlantState& s) {
  return fmt::format(
      "t={:.6f} p=({:.6f},{:.6f}) v=({:.6f},{:.6f}) len=({:.6f},{:.6f},{:.6f}) mode={}", s.time,
      s.p.x, s.p.y, s.v.x, s.v.y, s.length[0], s.length[1], s.length[2],
      dyn_mode_name(s.mode));
}

}  // namespace

std::string_view dyn_mode_name(DynMode m) {
  switch (m) {
    case DynMode::kFullyConstrained: return "FullyConstrained";
    case DynMode::kPendulum: return "Pendulum";
    case DynMode::kFreeFall: return "FreeFall";
  }
  return "?";
}

ConstraintError::ConstraintError(const std::string& what, const PlantState& s)
    : std::runtime_error(what + " [" + describe(s) + "]"), state_(s) {}

PlantState initial_plant_state(const ScenarioConfig& cfg) {
  PlantState s;
  s.p = cfg.start_position();
  const auto geom = cable_geometry(s.p, cfg.geometry);
  s.length = geom.length;
  const Side side = active_side(s.p, cfg.geometry);
  s.taut[idx(Cable::kTop)] = true;
  s.taut[idx(side_cable(side))] = true;
  s.taut[idx(side_cable(other_side(side)))] = true;
  const auto [tt, ts] = static_tensions(s.p, side_cable(side), cfg.geometry, cfg.payload_mass);
  s.tension[idx(Cable::kTop)] = std::max(0.0, tt);
  s.tension[idx(side_cable(side))] = std::max(0.0, ts);
  s.mode = DynMode::kFullyConstrained;
  s.ground_contact = true;
  return s;
}

bool length_controlled(const MotorState& m, const BrakeState& b) {
  return b.engaged || m.mode == MotorMode::kVelocity;
}

DynMode classify_mode(const PlantState& s, const PerCable<BrakeState>& brakes,
                      const PerCable<MotorState>& motors, const RobotGeometry& g) {
  auto held = [&](Cable c) {
    return s.taut[idx(c)] && length_controlled(motors[idx(c)], brakes[idx(c)]);
  };
  if (!held(Cable::kTop)) return DynMode::kFreeFall;
  const Cable act = side_cable(active_side(s.p, g));
  const Cable oth = side_cable(other_side(active_side(s.p, g)));
  if (held(act) || held(oth)) return DynMode::kFullyConstrained;
  return DynMode::kPendulum;
}

std::pair<double, double> static_tensions(Vec2 p, Cable side, const RobotGeometry& g,
                                          double mass) {
  const Vec2 to_top = g.anchor_top - p;
  const Vec2 to_side = g.anchor(side) - p;
  const Vec2 ut = (1.0 / to_top.norm()) * to_top;
  const Vec2 us = (1.0 / to_side.norm()) * to_side;
  const Vec2 f{0.0, mass * kGravity};
  const double det = cross(ut, us);
  if (std::abs(det) < 1e-12) return {mass * kGravity, 0.0};
  return {cross(f, us) / det, cross(ut, f) / det};
}

double impact_current(double impulse, double dt, const MotorParams& top) {
  return impulse / dt * top.drum_radius * top.gear_ratio / top.kt;
}

double mechanical_energy(const PlantState& s, double mass) {
  return 0.5 * mass * dot(s.v, s.v) + mass * kGravity * s.p.y;
}

namespace {

struct Control {
  PerCable<bool> controlled{};
  PerCable<double> rate{};  // only meaningful where controlled
};

Control resolve_control(const PerCable<MotorState>& motors, const PerCable<BrakeState>& brakes,
                        const ScenarioConfig& cfg) {
  Control c;
  for (Cable cab : kAllCables) {
    const int i = idx(cab);
    c.controlled[i] = length_controlled(motors[i], brakes[i]);
    c.rate[i] = brakes[i].engaged ? 0.0 : motors[i].shaft_speed * cfg.motor(cab).cable_per_rad();
  }
  return c;
}

// The side cable paired with top for the fully constrained solve, if any.
std::optional<Cable> constraining_side(const PlantState& s, const Control& c,
                                       const RobotGeometry& g) {
  const Side act = active_side(s.p, g);
  for (Cable cab : {side_cable(act), side_cable(other_side(act))}) {
    if (c.controlled[idx(cab)] && s.taut[idx(cab)]) return cab;
  }
  return std::nullopt;
}

// Velocity-Verlet on the arc angle about the top anchor with a time-varying
// radius L(t) = L0 + Ldot * t.
void pendulum_update(PlantState& s, const Vec2 anchor, double len0, double len1, double dt,
                     double damping) {
  const Vec2 rel = s.p - anchor;
  const double phi = std::atan2(rel.x, -rel.y);
  const Vec2 tangent{std::cos(phi), std::sin(phi)};
  const double ldot = (len1 - len0) / dt;
  const double r0 = rel.norm();
  double phidot = dot(s.v, tangent) / r0;

  auto accel = [&](double ang, double angdot, double len) {
    return -(kGravity / len) * std::sin(ang) - (2.0 * ldot / len) * angdot - damping * angdot;
  };
  const double half = phidot + 0.5 * dt * accel(phi, phidot, len0);
  const double phi1 = phi + dt * half;
  phidot = half + 0.5 * dt * accel(phi1, half, len1);

  const Vec2 radial{std::sin(phi1), -std::cos(phi1)};
  const Vec2 tan1{std::cos(phi1), std::sin(phi1)};
  s.p = anchor + len1 * radial;
  s.v = (len1 * phidot) * tan1 + ldot * radial;
}

// Inelastic snap onto a single cable circle: position projected, radial
// velocity faster than the cable pays out removed.
void snap_single(PlantState& s, Vec2 anchor, double len, double len_rate) {
  const Vec2 rel = s.p - anchor;
  const double d = rel.norm();
  const Vec2 u = (1.0 / d) * rel;
  s.p = anchor + len * u;
  const double vr = dot(s.v, u);
  if (vr > len_rate) s.v = s.v - (vr - len_rate) * u;
}

bool solve_pair(PlantState& s, Cable side, const PerCable<double>& len, const Control& c,
                const RobotGeometry& g) {
  const auto q = circle_intersection_lower(g.anchor_top, len[idx(Cable::kTop)], g.anchor(side),
                                           len[idx(side)]);
  if (!q) return false;
  s.p = *q;
  const auto geom = cable_geometry(s.p, g);
  try {
    s.v = forward_velocity(geom.angle[idx(Cable::kTop)], geom.angle[idx(side)],
                           {c.rate[idx(Cable::kTop)], c.rate[idx(side)]});
  } catch (const SingularityError&) {
    s.v = {0.0, 0.0};
  }
  return true;
}

void resolve_contacts(PlantState& s, Vec2 p_prev, const ScenarioConfig& cfg) {
  const double hw = cfg.payload_halfwidth;
  const double m = cfg.payload_mass;
  const double e = cfg.task.restitution;
  const auto& g = cfg.geometry;

  const Rect box = g.neighbor_box();
  const double pen_left = (s.p.x + hw) - box.x_min;   // payload left of box
  const double pen_right = box.x_max - (s.p.x - hw);  // payload right of box
  const double pen_top = box.y_max - (s.p.y - hw);
  if (pen_left > -1e-12 && pen_right > -1e-12 && pen_top > -1e-12) {
    s.neighbor_contact = true;
    if (pen_top <= std::min(pen_left, pen_right)) {
      s.p.y += std::max(0.0, pen_top);
      if (s.v.y < 0.0) {
        s.contact_impulse += m * (1.0 + e) * (-s.v.y);
        s.v.y = -e * s.v.y;
      }
    } else {
      if (pen_right <= pen_left) {
        s.p.x += std::max(0.0, pen_right);
        if (s.v.x < 0.0) {
          s.contact_impulse += m * (1.0 + e) * (-s.v.x);
          s.v.x = -e * s.v.x;
        }
      } else {
        s.p.x -= std::max(0.0, pen_left);
        if (s.v.x > 0.0) {
          s.contact_impulse += m * (1.0 + e) * s.v.x;
          s.v.x = -e * s.v.x;
        }
      }
      // Sliding along the wall: the vertical velocity is what the projected
      // position actually did.
      s.v.y = (s.p.y - p_prev.y) / cfg.dt;
    }
  }

  const double ground_top = g.ground_y + hw;
  if (s.p.y <= ground_top + 1e-12) {
    s.p.y = std::max(s.p.y, ground_top);
    if (s.v.y < 0.0) {
      s.contact_impulse += m * (1.0 + e) * (-s.v.y);
      s.v.y = -e * s.v.y;
    }
    // Sticking friction: a payload resting on the ground does not slide.
    if (s.v.y <= 0.0) s.v.x = 0.0;
    s.ground_contact = true;
  }
}

}  // namespace

PlantStepResult plant_step(const PlantState& state, const PerCable<MotorState>& motors,
                           const PerCable<BrakeState>& brakes, const ScenarioConfig& cfg) {
  const double dt = cfg.dt;
  const auto& g = cfg.geometry;
  const Control ctl = resolve_control(motors, brakes, cfg);
  const DynMode mode = classify_mode(state, brakes, motors, g);

  PlantState s = state;
  s.time = state.time + dt;
  s.contact_impulse = 0.0;
  s.ground_contact = false;
  s.neighbor_contact = false;

  PerCable<double> len = state.length;
  for (int i = 0; i < kNumCables; ++i) {
    if (ctl.controlled[i]) len[i] = std::max(1e-6, state.length[i] + ctl.rate[i] * dt);
  }

  const int top = idx(Cable::kTop);
  DynMode used = mode;
  if (mode == DynMode::kFullyConstrained) {
    const Cable side = *constraining_side(state, ctl, g);
    PlantState trial = s;
    if (!solve_pair(trial, side, len, ctl, g)) {
      throw ConstraintError(
          fmt::format("cable lengths inconsistent: top {:.6f} m and {} {:.6f} m do not meet",
                      len[top], cable_name(side), len[idx(side)]),
          state);
    }
    const auto [tt, ts] = static_tensions(trial.p, side, g, cfg.payload_mass);
    if (tt >= kTensionTol && ts >= kTensionTol) {
      s = trial;
    } else {
      // One cable would have to push: it goes slack and the other carries the
      // payload from the current state.
      used = tt >= kTensionTol ? DynMode::kPendulum : DynMode::kFreeFall;
    }
  }
  if (used == DynMode::kPendulum) {
    pendulum_update(s, g.anchor_top, state.length[top], len[top], dt, cfg.task.swing_damping);
  } else if (used == DynMode::kFreeFall) {
    s.v.y -= kGravity * dt;
    s.p = s.p + dt * s.v;
  }

  // Unilateral limits on length-controlled cables.
  if (used != DynMode::kFullyConstrained) {
    if (ctl.controlled[top] && (s.p - g.anchor_top).norm() > len[top]) {
      snap_single(s, g.anchor_top, len[top], ctl.rate[top]);
      used = DynMode::kPendulum;
    }
    const Side act = active_side(s.p, g);
    for (Cable side : {side_cable(act), side_cable(other_side(act))}) {
      const int i = idx(side);
      if (!ctl.controlled[i] || (s.p - g.anchor(side)).norm() <= len[i]) continue;
      if (used == DynMode::kPendulum) {
        if (!solve_pair(s, side, len, ctl, g)) {
          throw ConstraintError(
              fmt::format("snap onto {} cable has no consistent position", cable_name(side)),
              state);
        }
        used = DynMode::kFullyConstrained;
      } else {
        snap_single(s, g.anchor(side), len[i], ctl.rate[i]);
      }
      break;
    }
  }

  resolve_contacts(s, state.p, cfg);

  // Followers: a reeling current keeps the cable taut, a passive drum only
  // pays out.
  for (Cable cab : kAllCables) {
    const int i = idx(cab);
    if (ctl.controlled[i]) continue;
    const double d = (s.p - g.anchor(cab)).norm();
    const auto& m = motors[i];
    const bool reeling = m.mode == MotorMode::kCurrent && m.current < 0.0;
    len[i] = reeling ? d : std::max(state.length[i], d);
  }

  PlantStepResult out;
  for (Cable cab : kAllCables) {
    const int i = idx(cab);
    const double d = (s.p - g.anchor(cab)).norm();
    s.taut[i] = d >= len[i] - kTautTol;
    s.length[i] = len[i];
    s.tension[i] = 0.0;
    out.cable_rate[i] = (len[i] - state.length[i]) / dt;
  }

  s.mode = used;
  if (used == DynMode::kFullyConstrained) {
    const auto side = constraining_side(s, ctl, g);
    if (side && s.taut[top]) {
      const auto [tt, ts] = static_tensions(s.p, *side, g, cfg.payload_mass);
      s.tension[top] = std::max(0.0, tt);
      s.tension[idx(*side)] = std::max(0.0, ts);
    }
  } else if (used == DynMode::kPendulum && s.taut[top]) {
    const Vec2 rel = s.p - g.anchor_top;
    const double len_top = rel.norm();
    const double cos_phi = -rel.y / len_top;
    const Vec2 tangent{-rel.y / len_top, rel.x / len_top};
    const double vt = dot(s.v, tangent);
    s.tension[top] =
        std::max(0.0, cfg.payload_mass * (kGravity * cos_phi + vt * vt / len_top));
  }
  if (s.ground_contact || s.neighbor_contact) {
    // Contact carries weight; cables that went slack already read zero.
    for (int i = 0; i < kNumCables; ++i) {
      if (!s.taut[i]) s.tension[i] = 0.0;
    }
  }
  if (!s.p.finite()) throw ConstraintError("non-finite payload state", state);

  out.state = s;
  return out;
}

SensorSampler::SensorSampler(double rate, double noise_sigma, std::uint64_t seed)
    : period_(1.0 / rate), sigma_(noise_sigma), rng_(seed) {}

SensorFrame SensorSampler::sample(const PlantState& s, const PerCable<MotorState>& motors,
                                  const PerCable<BrakeState>& brakes,
                                  const ScenarioConfig& cfg) {
  SensorFrame f;
  f.timestamp = s.time;
  const double next_time = static_cast<double>(next_index_) * period_;
  if (s.time + 1e-12 >= next_time) {
    Vec2 meas = s.p;
    if (sigma_ > 0.0) {
      meas.x += sigma_ * noise_(rng_);
      meas.y += sigma_ * noise_(rng_);
    }
    held_ = meas;
    held_time_ = s.time;
    f.fresh = true;
    // Skip any sample instants missed by a coarse dt.
    next_index_ = static_cast<long long>(std::floor(s.time / period_ + 1e-9)) + 1;
  }
  f.position = held_;
  f.sample_time = held_time_;
  for (Cable cab : kAllCables) {
    const int i = idx(cab);
    f.encoder_length[i] = s.length[i];
    f.motor_current[i] = motors[i].current;
    f.expected_current[i] = motors[i].pid_output;
    f.brake_engaged[i] = brakes[i].engaged;
    f.motor_mode[i] = motors[i].mode;
  }
  f.motor_current[idx(Cable::kTop)] +=
      impact_current(s.contact_impulse, cfg.dt, cfg.motor(Cable::kTop));
  return f;
}

}  // namespace cablesim
