#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "cablesim/actuation.hpp"
#include "cablesim/core_model.hpp"
#include "cablesim/kinematics.hpp"

namespace cablesim {

enum class DynMode { kFullyConstrained, kPendulum, kFreeFall };
std::string_view dyn_mode_name(DynMode m);

struct PlantState {
  Vec2 p;
  Vec2 v;
  PerCable<double> length{};  // spooled length, anchor to payload
  PerCable<bool> taut{};
  PerCable<double> tension{};
  DynMode mode = DynMode::kFreeFall;
  bool ground_contact = false;
  bool neighbor_contact = false;
  double contact_impulse = 0.0;  // N s, accumulated over the last step
  double time = 0.0;
};

class ConstraintError : public std::runtime_error {
 public:
  ConstraintError(const std::string& what, const PlantState& s);
  const PlantState& state() const { return state_; }

 private:
  PlantState state_;
};

// Payload at the scenario start position with top and left cables taut.
PlantState initial_plant_state(const ScenarioConfig& cfg);

// A cable is length-controlled when its brake is engaged or its motor runs
// the velocity loop; otherwise it follows the payload.
bool length_controlled(const MotorState& m, const BrakeState& b);

DynMode classify_mode(const PlantState& s, const PerCable<BrakeState>& brakes,
                      const PerCable<MotorState>& motors, const RobotGeometry& g);

// Cable tensions (top, side) holding the payload statically at p. Negative
// values mean the cable would have to push.
std::pair<double, double> static_tensions(Vec2 p, Cable side, const RobotGeometry& g,
                                          double mass);

// Advances the payload by cfg.dt. motors must already be stepped for this
// tick; the returned follower rates are used to resolve follower shafts.
struct PlantStepResult {
  PlantState state;
  PerCable<double> cable_rate{};  // m/s over the step
};

PlantStepResult plant_step(const PlantState& state, const PerCable<MotorState>& motors,
                           const PerCable<BrakeState>& brakes, const ScenarioConfig& cfg);

// Current spike surrogate for a contact impulse on the top motor readback.
double impact_current(double impulse, double dt, const MotorParams& top);

struct SensorFrame {
  Vec2 position;        // camera, zero-order hold
  bool fresh = false;   // a new camera sample arrived this tick
  double sample_time = 0.0;
  PerCable<double> encoder_length{};
  PerCable<double> motor_current{};  // readback, with the impact surrogate on top
  PerCable<double> expected_current{};  // loop output or current setpoint
  PerCable<bool> brake_engaged{};
  PerCable<MotorMode> motor_mode{};
  double timestamp = 0.0;
};

class SensorSampler {
 public:
  SensorSampler(double rate, double noise_sigma, std::uint64_t seed);

  SensorFrame sample(const PlantState& s, const PerCable<MotorState>& motors,
                     const PerCable<BrakeState>& brakes, const ScenarioConfig& cfg);

 private:
  double period_;
  double sigma_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};
  long long next_index_ = 0;
  Vec2 held_;
  double held_time_ = 0.0;
};

// Mechanical energy 1/2 m v^2 + m g y.
double mechanical_energy(const PlantState& s, double mass);

}  // namespace cablesim
