#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "cablesim/core_model.hpp"
#include "cablesim/plant.hpp"
#include "cablesim/ptp.hpp"
#include "cablesim/supervisor.hpp"

namespace cablesim::testing {

inline double deg(double d) { return d * std::numbers::pi / 180.0; }

// Payload hanging from a braked top cable of length len at angle phi0 from
// straight down, released from rest. Both side cables are unbraked passive
// followers.
struct FreeSwing {
  ScenarioConfig cfg;
  PlantState state;
  PerCable<MotorState> motors{};
  PerCable<BrakeState> brakes{};

  FreeSwing(double len, double phi0, double damping) {
    cfg = default_scenario();
    cfg.task.swing_damping = damping;
    cfg.sensor_noise_sigma = 0.0;
    const Vec2 a = cfg.geometry.anchor_top;
    state.p = {a.x + len * std::sin(phi0), a.y - len * std::cos(phi0)};
    state.v = {0.0, 0.0};
    for (Cable c : kAllCables) {
      state.length[idx(c)] = (state.p - cfg.geometry.anchor(c)).norm();
      state.taut[idx(c)] = true;
    }
    state.mode = DynMode::kPendulum;
    brakes[idx(Cable::kTop)] = {.energized = false, .engaged = true};
    for (Cable c : {Cable::kLeft, Cable::kRight}) brakes[idx(c)] = {.energized = true, .engaged = false};
  }

  void step() { state = plant_step(state, motors, brakes, cfg).state; }

  double energy() const { return mechanical_energy(state, cfg.payload_mass); }
};

// Time at which the apex monitor fires on a free swing, or nullopt.
inline std::optional<double> apex_time(FreeSwing& s, double limit) {
  MonitorBank bank(s.cfg);
  SensorSampler sampler(s.cfg.sensor_rate, 0.0, 1);
  while (s.state.time < limit) {
    const SensorFrame f = sampler.sample(s.state, s.motors, s.brakes, s.cfg);
    const auto ev = bank.evaluate(f, Phase::kSwing, 0.0);
    if (!ev.empty()) return ev.front().timestamp;
    s.step();
  }
  return std::nullopt;
}

inline double small_amplitude_half_period(double len) {
  return std::numbers::pi * std::sqrt(len / kGravity);
}

using Mat2 = std::array<std::array<long double, 2>, 2>;

// Cable rates -> Cartesian velocity, written out entry by entry.
inline Mat2 jacobian(double a1, double aj) {
  const long double l1 = a1;
  const long double lj = aj;
  const long double s = std::sin(l1 - lj);
  return {{{-std::sin(lj) / s, std::sin(l1) / s}, {std::cos(lj) / s, -std::cos(l1) / s}}};
}

// Gauss-Jordan with partial pivoting.
inline Mat2 invert(Mat2 m) {
  Mat2 inv{{{1.0L, 0.0L}, {0.0L, 1.0L}}};
  for (int col = 0; col < 2; ++col) {
    int piv = col;
    if (std::fabs(m[1][col]) > std::fabs(m[piv][col])) piv = 1;
    std::swap(m[col], m[piv]);
    std::swap(inv[col], inv[piv]);
    const long double d = m[col][col];
    for (int k = 0; k < 2; ++k) {
      m[col][k] /= d;
      inv[col][k] /= d;
    }
    const int other = 1 - col;
    const long double f = m[other][col];
    for (int k = 0; k < 2; ++k) {
      m[other][k] -= f * m[col][k];
      inv[other][k] -= f * inv[col][k];
    }
  }
  return inv;
}

struct KinDraw {
  double a_top;
  double a_side;
  Vec2 v;
};

// Random cable angles at least |sin| >= 0.05 away from collinear.
inline KinDraw random_kinematics(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> vel(-1.0, 1.0);
  while (true) {
    const double a = ang(rng);
    const double b = ang(rng);
    if (std::abs(std::sin(a - b)) < 0.05) continue;
    return {a, b, {vel(rng), vel(rng)}};
  }
}

// Velocity is piecewise linear, so the trapezoid rule over a grid holding the
// two corner times integrates it exactly up to round-off.
inline double integrate_velocity(const TrapezoidProfile& p) {
  const double knots[] = {0.0, p.t_acc, p.t_acc + p.t_cruise, p.t_total};
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const int n = 16;
    const double h = (knots[i + 1] - knots[i]) / n;
    for (int k = 0; k < n; ++k) {
      const double a = knots[i] + k * h;
      const double b = a + h;
      // Sample strictly inside the piece so branch edges do not matter.
      sum += 0.5 * (p.velocity(std::nextafter(a, b)) + p.velocity(std::nextafter(b, a))) * h;
    }
  }
  return sum;
}

struct ProfileDraw {
  double d;
  double v;
  double a;
};

inline ProfileDraw random_profile(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ld(-3.0, 1.0), lv(-2.0, 0.5), la(-1.0, 1.0);
  return {std::pow(10.0, ld(rng)), std::pow(10.0, lv(rng)), std::pow(10.0, la(rng))};
}

}  // namespace cablesim::testing
