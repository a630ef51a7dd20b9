#include "cablesim/controllers.hpp"

#include <algorithm>
#include <cmath>

namespace cablesim {

ActuatorCommand cartesian_velocity_cmd(Vec2 v_des, const SensorFrame& sensors,
                                       const ScenarioConfig& cfg, CartesianOptions opts) {
  const auto& g = cfg.geometry;
  const Vec2 p = sensors.position;
  const CableGeom geom = cable_geometry(p, g);
  const Side side = active_side(p, g);
  const Cable driven = side_cable(side);
  const Cable idle = side_cable(other_side(side));

  const CableRates rates =
      inverse_velocity(geom.angle[idx(Cable::kTop)], geom.angle[idx(driven)], v_des);

  const auto& mt = cfg.motor(Cable::kTop);
  const auto& ms = cfg.motor(driven);
  double w_top = rates.top / mt.cable_per_rad();
  double w_side = rates.side / ms.cable_per_rad();

  ActuatorCommand cmd;
  const double scale = std::min({1.0, mt.max_speed / std::max(std::abs(w_top), 1e-300),
                                 ms.max_speed / std::max(std::abs(w_side), 1e-300)});
  if (scale < 1.0) {
    w_top *= scale;
    w_side *= scale;
    v_des = scale * v_des;
    cmd.speed_scaled = true;
    cmd.speed_scale = scale;
  }
  cmd[Cable::kTop] = MotorCommand::velocity(w_top);
  cmd[driven] = MotorCommand::velocity(w_side);

  // Gravity tensions the idle cable while it lengthens; while it shortens a
  // reeling current just above static friction keeps it from going slack.
  const double idle_rate = dot(v_des, geom.unit(idle));
  if (opts.keep_inactive_taut && idle_rate <= 0.0) {
    cmd[idle] = MotorCommand::current(-cfg.task.keeper_current);
  } else {
    cmd[idle] = MotorCommand::passive();
  }
  cmd.brake_energize = {true, true, true};
  return gate_on_brakes(cmd, sensors);
}

void VelocityEstimator::push(const SensorFrame& f) {
  if (!f.fresh) return;
  samples_.emplace_back(f.sample_time, f.position);
  while (samples_.size() > window_) samples_.pop_front();
}

Vec2 VelocityEstimator::velocity() const {
  const std::size_t n = samples_.size();
  if (n < 2) return {};
  double tm = 0.0;
  Vec2 pm;
  for (const auto& [t, p] : samples_) {
    tm += t;
    pm = pm + p;
  }
  tm /= static_cast<double>(n);
  pm = (1.0 / static_cast<double>(n)) * pm;
  double stt = 0.0;
  Vec2 stp;
  for (const auto& [t, p] : samples_) {
    stt += (t - tm) * (t - tm);
    stp = stp + (t - tm) * (p - pm);
  }
  if (stt <= 0.0) return {};
  return (1.0 / stt) * stp;
}

void EncoderRate::push(const SensorFrame& f) {
  samples_.emplace_back(f.timestamp, f.encoder_length);
  while (samples_.size() > window_ + 1) samples_.pop_front();
}

double EncoderRate::rate(Cable c) const {
  if (samples_.size() < 2) return 0.0;
  const auto& [t0, l0] = samples_.front();
  const auto& [t1, l1] = samples_.back();
  return t1 > t0 ? (l1[idx(c)] - l0[idx(c)]) / (t1 - t0) : 0.0;
}

Side arriving_side(const ScenarioConfig& cfg) {
  return cfg.geometry.target_x < cfg.geometry.anchor_top.x ? Side::kLeft : Side::kRight;
}

namespace {

// Close the top brake; the loop holds position until it reads engaged.
void brake_top(ActuatorCommand& cmd, const SensorFrame& sensors) {
  cmd.brake_energize[idx(Cable::kTop)] = false;
  cmd[Cable::kTop] = sensors.brake_engaged[idx(Cable::kTop)] ? MotorCommand::passive()
                                                             : MotorCommand::velocity(0.0);
}

}  // namespace

ActuatorCommand swing_cmd(const SensorFrame& sensors, const ScenarioConfig& cfg) {
  const Cable arrive = side_cable(arriving_side(cfg));
  const Cable depart = side_cable(other_side(arriving_side(cfg)));
  ActuatorCommand cmd;
  brake_top(cmd, sensors);
  cmd[depart] = MotorCommand::passive();
  cmd[arrive] = MotorCommand::current(-cfg.task.keeper_current);
  cmd.brake_energize[idx(depart)] = true;
  cmd.brake_energize[idx(arrive)] = true;
  return cmd;
}

ActuatorCommand hold_cmd(const SensorFrame& sensors, const ScenarioConfig& cfg) {
  const Cable arrive = side_cable(arriving_side(cfg));
  const Cable depart = side_cable(other_side(arriving_side(cfg)));
  ActuatorCommand cmd;
  brake_top(cmd, sensors);
  cmd[arrive] = MotorCommand::current(-cfg.task.keeper_current);
  cmd.brake_energize[idx(arrive)] = false;
  cmd[depart] = MotorCommand::passive();
  cmd.brake_energize[idx(depart)] = true;
  return cmd;
}

ActuatorCommand drop_cmd(const SensorFrame& sensors, double descent_speed, BrakeLatch& latch,
                         const ScenarioConfig& cfg) {
  const Cable arrive = side_cable(arriving_side(cfg));
  const Cable depart = side_cable(other_side(arriving_side(cfg)));
  if (descent_speed < cfg.task.drop_v_lo) {
    latch.released = true;
  } else if (descent_speed > cfg.task.drop_v_hi) {
    latch.released = false;
  }
  ActuatorCommand cmd;
  // The winch cannot be back-driven by the payload, so the top cable is paid
  // out actively.
  const auto& mt = cfg.motor(Cable::kTop);
  cmd[Cable::kTop] = MotorCommand::velocity(cfg.task.drop_payout_speed / mt.cable_per_rad());
  cmd.brake_energize[idx(Cable::kTop)] = true;
  cmd[arrive] = MotorCommand::passive();
  cmd.brake_energize[idx(arrive)] = latch.released;
  cmd[depart] = MotorCommand::passive();
  cmd.brake_energize[idx(depart)] = true;
  return gate_on_brakes(cmd, sensors);
}

ActuatorCommand fine_positioning_cmd(FineSubphase sub, const SensorFrame& sensors,
                                     double side_cable_speed, BrakeLatch& latch,
                                     const ScenarioConfig& cfg) {
  const double v = cfg.task.fine_speed;
  const Cable arrive = side_cable(arriving_side(cfg));
  const Cable depart = side_cable(other_side(arriving_side(cfg)));
  // The departed side carries no load for the rest of the task; its brake
  // is left closed.
  switch (sub) {
    case FineSubphase::kLift:
    case FineSubphase::kDrop: {
      const double vy = sub == FineSubphase::kLift ? v : -v;
      ActuatorCommand cmd =
          cartesian_velocity_cmd({0.0, vy}, sensors, cfg, {.keep_inactive_taut = false});
      cmd.brake_energize[idx(depart)] = false;
      return cmd;
    }
    case FineSubphase::kSwing: {
      // Pulse the side brake to keep the approach slow.
      if (std::abs(side_cable_speed) > v) {
        latch.released = false;
      } else if (std::abs(side_cable_speed) < 0.25 * v) {
        latch.released = true;
      }
      ActuatorCommand cmd;
      brake_top(cmd, sensors);
      cmd[arrive] = MotorCommand::passive();
      cmd.brake_energize[idx(arrive)] = latch.released;
      cmd[depart] = MotorCommand::passive();
      cmd.brake_energize[idx(depart)] = false;
      return cmd;
    }
  }
  return {};
}

ActuatorCommand gate_on_brakes(ActuatorCommand cmd, const SensorFrame& sensors) {
  for (Cable c : kAllCables) {
    auto& m = cmd[c];
    if (m.mode == MotorMode::kVelocity && sensors.brake_engaged[idx(c)]) m.setpoint = 0.0;
  }
  return cmd;
}

}  // namespace cablesim
