#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cablesim/core_model.hpp"

namespace cablesim {

enum class MotorMode { kVelocity, kCurrent, kPassive };

// Sign convention for every motor quantity: positive shaft speed and positive
// current both act in the cable pay-out direction.
struct MotorState {
  double shaft_angle = 0.0;  // rad
  double shaft_speed = 0.0;  // rad/s
  double current = 0.0;      // A
  double voltage = 0.0;      // V
  MotorMode mode = MotorMode::kPassive;
  double setpoint = 0.0;  // rad/s in kVelocity, A in kCurrent
  double integrator = 0.0;
  // Velocity-loop output before the readback surrogate; equals current.
  double pid_output = 0.0;
};

struct BrakeState {
  bool energized = false;  // normally-on: power flows while held open
  bool engaged = true;
  std::optional<double> transition_deadline;  // absolute sim time of the pending flip
};

double electrical_power(double voltage, double current);
double copper_loss(double resistance, double current);

// Advances one motor by dt. locked means the shaft is held by an engaged brake.
// Passive and current-controlled shafts follow the cable; call motor_follow
// once the plant has resolved the cable rate.
MotorState motor_step(const MotorState& state, const MotorParams& params,
                      double load_torque_at_drum, double dt, bool locked);

// Sets a follower shaft to the speed implied by a cable rate and refreshes V.
MotorState motor_follow(const MotorState& state, const MotorParams& params, double cable_rate,
                        double dt);

// Diagnostic split of the electrical power (not ledger entries).
struct PowerSplit {
  double mechanical = 0.0;  // tau * w at the shaft
  double friction = 0.0;
  double copper = 0.0;
};
PowerSplit power_split(const MotorState& s, const MotorParams& p);

struct BrakeStepResult {
  BrakeState state;
  double energy = 0.0;  // J
};

// now is the absolute time at the start of the step.
BrakeStepResult brake_step(const BrakeState& state, bool command_energized,
                           const BrakeParams& params, double now, double dt);

// Energy integrals. Motor energy is trapezoidal over clamped electrical power;
// brake energy is power x energized time, counted in whole ticks.
class EnergyLedger {
 public:
  struct PhaseMark {
    std::string label;
    double time = 0.0;
  };

  void set_allow_regen(bool allow) { allow_regen_ = allow; }

  // One tick: power samples at the start and end of the step for each motor,
  // and whether each brake was energized during the step.
  void integrate(const PerCable<double>& motor_power_begin,
                 const PerCable<double>& motor_power_end, const PerCable<bool>& brake_energized,
                 const PerCable<double>& brake_power, double dt, const std::string& phase,
                 double t_begin);

  // Generic trapezoidal accumulation over device power samples.
  void integrate(const PerCable<double>& power_begin, const PerCable<double>& power_end,
                 double dt, const std::string& phase, double t_begin);

  double clamp_power(double p) const { return allow_regen_ ? p : std::max(0.0, p); }

  const PerCable<double>& motor_energy() const { return motor_; }
  const PerCable<double>& brake_energy() const { return brake_; }
  const PerCable<long long>& brake_ticks() const { return brake_ticks_; }
  const std::vector<PhaseMark>& phase_marks() const { return marks_; }

  double motor_total() const;
  double brake_total() const;
  double total() const { return motor_total() + brake_total(); }

 private:
  void mark(const std::string& phase, double t);

  bool allow_regen_ = false;
  PerCable<double> motor_{};
  PerCable<double> brake_{};
  PerCable<long long> brake_ticks_{};
  std::vector<PhaseMark> marks_;
};

}  // namespace cablesim
