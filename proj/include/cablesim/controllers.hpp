#pragma once

#include <deque>

#include "cablesim/actuation.hpp"
#include "cablesim/core_model.hpp"
#include "cablesim/kinematics.hpp"
#include "cablesim/plant.hpp"

namespace cablesim {

struct MotorCommand {
  MotorMode mode = MotorMode::kPassive;
  double setpoint = 0.0;  // rad/s or A

  static MotorCommand velocity(double w) { return {MotorMode::kVelocity, w}; }
  static MotorCommand current(double a) { return {MotorMode::kCurrent, a}; }
  static MotorCommand passive() { return {MotorMode::kPassive, 0.0}; }
  friend bool operator==(const MotorCommand&, const MotorCommand&) = default;
};

struct ActuatorCommand {
  PerCable<MotorCommand> motor{};
  PerCable<bool> brake_energize{true, true, true};
  bool speed_scaled = false;  // the Cartesian request was scaled to the motor limit
  double speed_scale = 1.0;

  MotorCommand& operator[](Cable c) { return motor[idx(c)]; }
  const MotorCommand& operator[](Cable c) const { return motor[idx(c)]; }
  friend bool operator==(const ActuatorCommand&, const ActuatorCommand&) = default;
};

struct CartesianOptions {
  // Hold the inactive-side cable with the keeper current while it shortens.
  bool keep_inactive_taut = true;
};

// Top plus active-side velocity setpoints from the inverse kinematics at the
// measured position. Scales the request uniformly when a motor would exceed
// its speed limit. Throws SingularityError.
ActuatorCommand cartesian_velocity_cmd(Vec2 v_des, const SensorFrame& sensors,
                                       const ScenarioConfig& cfg,
                                       CartesianOptions opts = {});

// Least-squares slope over the most recent camera samples.
class VelocityEstimator {
 public:
  explicit VelocityEstimator(std::size_t window = 10) : window_(window) {}
  void push(const SensorFrame& f);
  Vec2 velocity() const;
  bool ready() const { return samples_.size() >= 3; }
  void reset() { samples_.clear(); }

 private:
  std::size_t window_;
  std::deque<std::pair<double, Vec2>> samples_;
};

// Mean encoder rate per cable over a short tick window.
class EncoderRate {
 public:
  explicit EncoderRate(std::size_t window = 10) : window_(window) {}
  void push(const SensorFrame& f);
  double rate(Cable c) const;
  void reset() { samples_.clear(); }

 private:
  std::size_t window_;
  std::deque<std::pair<double, PerCable<double>>> samples_;
};

// Bang-bang latch on the arriving-side brake.
struct BrakeLatch {
  bool released = false;
};

// Side whose brake controls the drop and the fine swing: the half plane the
// payload arrives in.
Side arriving_side(const ScenarioConfig& cfg);

// Both swing-phase roles: top brake closes, departing side goes passive,
// arriving side holds the keeper current.
ActuatorCommand swing_cmd(const SensorFrame& sensors, const ScenarioConfig& cfg);

ActuatorCommand hold_cmd(const SensorFrame& sensors, const ScenarioConfig& cfg);

ActuatorCommand drop_cmd(const SensorFrame& sensors, double descent_speed, BrakeLatch& latch,
                         const ScenarioConfig& cfg);

enum class FineSubphase { kLift, kSwing, kDrop };

ActuatorCommand fine_positioning_cmd(FineSubphase sub, const SensorFrame& sensors,
                                     double side_cable_speed, BrakeLatch& latch,
                                     const ScenarioConfig& cfg);

// Velocity setpoints are zeroed on motors whose brake still reads engaged, so
// the loop does not wind up against a closed brake.
ActuatorCommand gate_on_brakes(ActuatorCommand cmd, const SensorFrame& sensors);

}  // namespace cablesim
