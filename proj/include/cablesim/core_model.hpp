#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cablesim {

inline constexpr double kGravity = 9.81;

struct Vec2 {
  double x = 0.0;  // m, rightward positive
  double y = 0.0;  // m, upward positive

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;

  double norm() const { return std::hypot(x, y); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// Axis-aligned rectangle, min/max corners.
struct Rect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  bool contains(Vec2 p) const {
    return p.x > x_min && p.x < x_max && p.y > y_min && p.y < y_max;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

// The three planar actuators. Index order is fixed and used for every
// per-cable/per-motor/per-brake array in the project.
enum class Cable : int { kTop = 0, kLeft = 1, kRight = 2 };
inline constexpr int kNumCables = 3;
inline constexpr std::array<Cable, 3> kAllCables = {Cable::kTop, Cable::kLeft, Cable::kRight};
inline constexpr int idx(Cable c) { return static_cast<int>(c); }
std::string_view cable_name(Cable c);

template <typename T>
using PerCable = std::array<T, kNumCables>;

struct RobotGeometry {
  Vec2 anchor_top{0.5, 1.3};
  Vec2 anchor_left{-0.05, 1.0};
  Vec2 anchor_right{1.05, 1.0};
  double ground_y = 0.0;
  // The previously placed payload. x is the center of the box.
  double neighbor_x = 0.5;
  double neighbor_width = 0.2;
  double neighbor_height = 0.2;
  Rect workspace{0.0, 1.0, 0.0, 1.0};
  double target_x = 0.7;

  Rect neighbor_box() const {
    return {neighbor_x - 0.5 * neighbor_width, neighbor_x + 0.5 * neighbor_width, ground_y,
            ground_y + neighbor_height};
  }
  Vec2 anchor(Cable c) const;

  friend bool operator==(const RobotGeometry&, const RobotGeometry&) = default;
};

struct MotorParams {
  double rated_power = 0.0;       // W
  double gear_ratio = 0.0;        // drum revs per motor rev, <= 1
  double drum_radius = 0.0;       // m
  double resistance = 0.0;        // ohm
  double kt = 0.0;                // N m / A
  double ke = 0.0;                // V s / rad
  double static_friction = 0.0;   // N m at drum
  double viscous_friction = 0.0;  // N m s / rad at drum
  double max_speed = 0.0;         // rad/s at motor shaft
  double max_current = 0.0;       // A
  // Velocity loop and rotor model.
  double rotor_inertia = 0.0;  // kg m^2 at motor shaft
  double pid_kp = 0.0;         // A per rad/s
  double pid_ki = 0.0;         // A per rad

  // Cable metres per motor radian.
  double cable_per_rad() const { return gear_ratio * drum_radius; }

  friend bool operator==(const MotorParams&, const MotorParams&) = default;
};

struct BrakeParams {
  double hold_torque = 0.0;   // N m at drum
  double power = 0.0;         // W while energized (held open)
  double switch_delay = 0.0;  // s

  friend bool operator==(const BrakeParams&, const BrakeParams&) = default;
};

struct TaskParams {
  double start_x = 0.2;          // payload centre at start, resting on the ground
  double h_d = 0.45;             // payload centre height that ends lifting
  double l2_threshold = 1.2;     // top cable length that ends the fine lift
  double lift_speed = 0.1;
  double fine_speed = 0.04;
  double drop_v_lo = 0.06;
  double drop_v_hi = 0.15;
  double drop_payout_speed = 0.11;  // top cable payout during the drop
  double keeper_current = 0.07;
  double impact_current_threshold = 0.5;
  double swing_damping = 0.05;
  double restitution = 0.0;
  double hold_settle = 0.5;
  double monitor_arm_time = 0.1;
  double stall_speed = 0.01;
  double stall_time = 0.1;

  friend bool operator==(const TaskParams&, const TaskParams&) = default;
};

struct PtpParams {
  double v_max = 0.25;       // Cartesian cruise speed cap, m/s
  double a_max = 1.0;        // m/s^2
  double kp = 2.0;           // 1/s
  double drop_clearance = 0.03;

  friend bool operator==(const PtpParams&, const PtpParams&) = default;
};

struct ScenarioConfig {
  RobotGeometry geometry;
  PerCable<MotorParams> motors;
  PerCable<BrakeParams> brakes;
  double payload_mass = 14.0;
  double payload_halfwidth = 0.1;
  double dt = 0.001;
  std::uint64_t rng_seed = 1;
  double timeout = 60.0;
  TaskParams task;
  PtpParams ptp;
  double sensor_rate = 150.0;
  double sensor_noise_sigma = 0.001;
  bool allow_regen = false;

  const MotorParams& motor(Cable c) const { return motors[idx(c)]; }
  const BrakeParams& brake(Cable c) const { return brakes[idx(c)]; }
  Vec2 start_position() const {
    return {task.start_x, geometry.ground_y + payload_halfwidth};
  }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class ParseError : public ConfigError {
 public:
  ParseError(int line, const std::string& what)
      : ConfigError("line " + std::to_string(line), what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

ScenarioConfig default_scenario();

// Throws ConfigError naming the first offending key.
void validate(const ScenarioConfig& cfg);

ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Emits every key in canonical order with round-trip precision.
std::string serialize_scenario(const ScenarioConfig& cfg);

// FNV-1a over the canonical serialization.
std::uint64_t scenario_hash(const ScenarioConfig& cfg);

}  // namespace cablesim
