#include "cablesim/actuation.hpp"

#include <algorithm>
#include <cmath>

namespace cablesim {

double electrical_power(double voltage, double current) { return voltage * current; }

double copper_loss(double resistance, double current) { return resistance * current * current; }

namespace {

double sign(double v) { return (v > 0.0) - (v < 0.0); }

// Shaft speed below this is treated as standstill for the stick test.
constexpr double kStickSpeed = 1e-9;

}  // namespace

MotorState motor_step(const MotorState& state, const MotorParams& p, double load_torque_at_drum,
                      double dt, bool locked) {
  MotorState s = state;
  const double n = p.gear_ratio;

  switch (s.mode) {
    case MotorMode::kPassive:
      s.current = 0.0;
      s.pid_output = 0.0;
      s.integrator = 0.0;
      break;
    case MotorMode::kCurrent:
      s.current = std::clamp(s.setpoint, -p.max_current, p.max_current);
      s.pid_output = s.current;
      s.integrator = 0.0;
      break;
    case MotorMode::kVelocity: {
      const double target = std::clamp(s.setpoint, -p.max_speed, p.max_speed);
      const double err = target - s.shaft_speed;
      const double unclamped = p.pid_kp * err + s.integrator;
      const double out = std::clamp(unclamped, -p.max_current, p.max_current);
      // Conditional integration: hold the integrator while locked or saturated
      // in the direction of the error.
      const bool saturated = out != unclamped && sign(err) == sign(unclamped);
      if (!locked && !saturated) {
        s.integrator = std::clamp(s.integrator + p.pid_ki * err * dt, -p.max_current,
                                  p.max_current);
      }
      s.current = out;
      s.pid_output = out;
      break;
    }
  }

  if (locked) {
    s.shaft_speed = 0.0;
  } else if (s.mode == MotorMode::kVelocity) {
    // Rotor dynamics at the motor shaft; friction and load reflect through n.
    const double drive = p.kt * s.current + n * load_torque_at_drum;
    const double coulomb = n * p.static_friction;
    const double w = s.shaft_speed;
    double w_next = 0.0;
    if (std::abs(w) < kStickSpeed) {
      if (std::abs(drive) > coulomb) {
        w_next = (drive - sign(drive) * coulomb) * dt / p.rotor_inertia;
      }
    } else {
      const double friction = coulomb * sign(w) + n * n * p.viscous_friction * w;
      w_next = w + (drive - friction) * dt / p.rotor_inertia;
      if (sign(w_next) != sign(w)) w_next = 0.0;
    }
    s.shaft_speed = std::clamp(w_next, -p.max_speed, p.max_speed);
  }
  // Followers keep their last speed until motor_follow resolves it.

  s.shaft_angle += s.shaft_speed * dt;
  s.voltage = s.mode == MotorMode::kPassive
                  ? 0.0
                  : p.resistance * s.current + p.ke * s.shaft_speed;
  return s;
}

MotorState motor_follow(const MotorState& state, const MotorParams& p, double cable_rate,
                        double dt) {
  MotorState s = state;
  // Undo the provisional angle advance from motor_step.
  s.shaft_angle -= s.shaft_speed * dt;
  s.shaft_speed = cable_rate / p.cable_per_rad();
  s.shaft_angle += s.shaft_speed * dt;
  s.voltage = s.mode == MotorMode::kPassive
                  ? 0.0
                  : p.resistance * s.current + p.ke * s.shaft_speed;
  return s;
}

PowerSplit power_split(const MotorState& s, const MotorParams& p) {
  PowerSplit out;
  out.copper = copper_loss(p.resistance, s.current);
  out.mechanical = p.kt * s.current * s.shaft_speed;
  const double n = p.gear_ratio;
  out.friction = std::abs(s.shaft_speed) *
                 (n * p.static_friction + n * n * p.viscous_friction * std::abs(s.shaft_speed));
  return out;
}

BrakeStepResult brake_step(const BrakeState& state, bool command_energized,
                           const BrakeParams& params, double now, double dt) {
  BrakeStepResult r;
  r.state = state;
  BrakeState& b = r.state;
  if (command_energized != b.energized) {
    b.energized = command_energized;
    const bool target_engaged = !command_energized;
    if (target_engaged == b.engaged) {
      b.transition_deadline.reset();
    } else {
      b.transition_deadline = now + params.switch_delay;
    }
  }
  const double t_end = now + dt;
  // Small tolerance so a delay that is a whole number of ticks lands on a tick.
  if (b.transition_deadline && *b.transition_deadline <= t_end + 1e-9 * dt) {
    b.engaged = !b.energized;
    b.transition_deadline.reset();
  }
  r.energy = b.energized ? params.power * dt : 0.0;
  return r;
}

void EnergyLedger::mark(const std::string& phase, double t) {
  if (marks_.empty() || marks_.back().label != phase) marks_.push_back({phase, t});
}

void EnergyLedger::integrate(const PerCable<double>& power_begin,
                             const PerCable<double>& power_end, double dt,
                             const std::string& phase, double t_begin) {
  mark(phase, t_begin);
  for (int i = 0; i < kNumCables; ++i) {
    motor_[i] += 0.5 * (clamp_power(power_begin[i]) + clamp_power(power_end[i])) * dt;
  }
}

void EnergyLedger::integrate(const PerCable<double>& motor_power_begin,
                             const PerCable<double>& motor_power_end,
                             const PerCable<bool>& brake_energized,
                             const PerCable<double>& brake_power, double dt,
                             const std::string& phase, double t_begin) {
  integrate(motor_power_begin, motor_power_end, dt, phase, t_begin);
  for (int i = 0; i < kNumCables; ++i) {
    if (brake_energized[i]) ++brake_ticks_[i];
    brake_[i] = brake_power[i] * (static_cast<double>(brake_ticks_[i]) * dt);
  }
}

double EnergyLedger::motor_total() const { return motor_[0] + motor_[1] + motor_[2]; }
double EnergyLedger::brake_total() const { return brake_[0] + brake_[1] + brake_[2]; }

}  // namespace cablesim
