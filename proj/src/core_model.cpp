#include "cablesim/core_model.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

#include <fmt/format.h>

namespace cablesim {

std::string_view cable_name(Cable c) {
  switch (c) {
    case Cable::kTop: return "top";
    case Cable::kLeft: return "left";
    case Cable::kRight: return "right";
  }
  return "?";
}

Vec2 RobotGeometry::anchor(Cable c) const {
  switch (c) {
    case Cable::kTop: return anchor_top;
    case Cable::kLeft: return anchor_left;
    case Cable::kRight: return anchor_right;
  }
  return {};
}

namespace {

// Nameplate: 750 W servo, 70:1 gearbox, 42 mm drum. Electrical constants are
// calibration values (rated torque 2.39 N m at 314 rad/s). Static friction at
// the drum is 1.2 x m g r so the payload cannot back-drive the winch.
MotorParams default_top_motor() {
  MotorParams m;
  m.rated_power = 750.0;
  m.gear_ratio = 1.0 / 70.0;
  m.drum_radius = 0.042;
  m.resistance = 2.0;
  m.kt = 0.4;
  m.ke = 0.4;
  m.static_friction = 7.0;
  m.viscous_friction = 0.5;
  m.max_speed = 314.0;
  m.max_current = 10.0;
  m.rotor_inertia = 1.1e-4;
  m.pid_kp = 0.05;
  m.pid_ki = 2.2;
  return m;
}

// 188 W BLDC, internal 8:1 plus 30/16 belt, 8 mm shaft.
MotorParams default_side_motor() {
  MotorParams m;
  m.rated_power = 188.0;
  m.gear_ratio = 1.0 / 15.0;
  m.drum_radius = 0.008;
  m.resistance = 0.2;
  m.kt = 0.05;
  m.ke = 0.05;
  m.static_friction = 0.05;
  m.viscous_friction = 0.01;
  m.max_speed = 419.0;
  m.max_current = 20.0;
  m.rotor_inertia = 2.0e-5;
  m.pid_kp = 0.0728;
  m.pid_ki = 3.2;
  return m;
}

}  // namespace

ScenarioConfig default_scenario() {
  ScenarioConfig cfg;
  cfg.motors[idx(Cable::kTop)] = default_top_motor();
  cfg.motors[idx(Cable::kLeft)] = default_side_motor();
  cfg.motors[idx(Cable::kRight)] = default_side_motor();
  cfg.brakes[idx(Cable::kTop)] = BrakeParams{20.0, 11.0, 0.05};
  cfg.brakes[idx(Cable::kLeft)] = BrakeParams{5.0, 8.0, 0.05};
  cfg.brakes[idx(Cable::kRight)] = BrakeParams{5.0, 8.0, 0.05};
  return cfg;
}

namespace {

enum class KeyKind { kReal, kSeed, kFlag };

struct KeyRef {
  std::string name;
  KeyKind kind;
  double* real = nullptr;
  std::uint64_t* seed = nullptr;
  bool* flag = nullptr;
};

// Single source of truth for the file format: every key, in canonical order.
std::vector<KeyRef> key_table(ScenarioConfig& c) {
  std::vector<KeyRef> keys;
  auto real = [&](std::string name, double& v) {
    keys.push_back({std::move(name), KeyKind::kReal, &v, nullptr, nullptr});
  };
  auto& g = c.geometry;
  real("geometry.anchor_top.x", g.anchor_top.x);
  real("geometry.anchor_top.y", g.anchor_top.y);
  real("geometry.anchor_left.x", g.anchor_left.x);
  real("geometry.anchor_left.y", g.anchor_left.y);
  real("geometry.anchor_right.x", g.anchor_right.x);
  real("geometry.anchor_right.y", g.anchor_right.y);
  real("geometry.ground_y", g.ground_y);
  real("geometry.neighbor.x", g.neighbor_x);
  real("geometry.neighbor.width", g.neighbor_width);
  real("geometry.neighbor.height", g.neighbor_height);
  real("geometry.target_x", g.target_x);
  real("geometry.workspace.x_min", g.workspace.x_min);
  real("geometry.workspace.x_max", g.workspace.x_max);
  real("geometry.workspace.y_min", g.workspace.y_min);
  real("geometry.workspace.y_max", g.workspace.y_max);
  for (Cable cab : kAllCables) {
    auto& m = c.motors[idx(cab)];
    const std::string p = fmt::format("motor.{}.", cable_name(cab));
    real(p + "rated_power", m.rated_power);
    real(p + "gear_ratio", m.gear_ratio);
    real(p + "drum_radius", m.drum_radius);
    real(p + "resistance", m.resistance);
    real(p + "kt", m.kt);
    real(p + "ke", m.ke);
    real(p + "static_friction", m.static_friction);
    real(p + "viscous_friction", m.viscous_friction);
    real(p + "max_speed", m.max_speed);
    real(p + "max_current", m.max_current);
    real(p + "rotor_inertia", m.rotor_inertia);
    real(p + "pid_kp", m.pid_kp);
    real(p + "pid_ki", m.pid_ki);
  }
  for (Cable cab : kAllCables) {
    auto& b = c.brakes[idx(cab)];
    const std::string p = fmt::format("brake.{}.", cable_name(cab));
    real(p + "hold_torque", b.hold_torque);
    real(p + "power", b.power);
    real(p + "switch_delay", b.switch_delay);
  }
  real("payload.mass", c.payload_mass);
  real("payload.halfwidth", c.payload_halfwidth);
  real("sim.dt", c.dt);
  keys.push_back({"sim.seed", KeyKind::kSeed, nullptr, &c.rng_seed, nullptr});
  real("sim.timeout", c.timeout);
  keys.push_back({"sim.allow_regen", KeyKind::kFlag, nullptr, nullptr, &c.allow_regen});
  auto& t = c.task;
  real("task.start_x", t.start_x);
  real("task.h_d", t.h_d);
  real("task.l2_threshold", t.l2_threshold);
  real("task.lift_speed", t.lift_speed);
  real("task.fine_speed", t.fine_speed);
  real("task.drop_v_lo", t.drop_v_lo);
  real("task.drop_v_hi", t.drop_v_hi);
  real("task.drop_payout_speed", t.drop_payout_speed);
  real("task.keeper_current", t.keeper_current);
  real("task.impact_current_threshold", t.impact_current_threshold);
  real("task.swing_damping", t.swing_damping);
  real("task.restitution", t.restitution);
  real("task.hold_settle", t.hold_settle);
  real("task.monitor_arm_time", t.monitor_arm_time);
  real("task.stall_speed", t.stall_speed);
  real("task.stall_time", t.stall_time);
  real("ptp.v_max", c.ptp.v_max);
  real("ptp.a_max", c.ptp.a_max);
  real("ptp.kp", c.ptp.kp);
  real("ptp.drop_clearance", c.ptp.drop_clearance);
  real("sensor.rate", c.sensor_rate);
  real("sensor.noise_sigma", c.sensor_noise_sigma);
  return keys;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(std::string_view v, int line) {
  // std::from_chars for double is available in libstdc++ 11.
  double out = 0.0;
  const auto* first = v.data();
  const auto* last = v.data() + v.size();
  if (!v.empty() && v.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(line, fmt::format("expected a number, got '{}'", v));
  }
  return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

}  // namespace

void validate(const ScenarioConfig& cfg) {
  ScenarioConfig copy = cfg;
  for (const auto& k : key_table(copy)) {
    if (k.kind == KeyKind::kReal) require(std::isfinite(*k.real), k.name, "must be finite");
  }

  const auto& g = cfg.geometry;
  require(g.anchor_top.y > g.anchor_left.y, "geometry.anchor_top.y",
          "must be above the left anchor");
  require(g.anchor_top.y > g.anchor_right.y, "geometry.anchor_top.y",
          "must be above the right anchor");
  require(g.anchor_left.x < g.anchor_top.x, "geometry.anchor_left.x",
          "must be left of the top anchor");
  require(g.anchor_top.x < g.anchor_right.x, "geometry.anchor_right.x",
          "must be right of the top anchor");
  require(g.neighbor_width > 0.0, "geometry.neighbor.width", "must be positive");
  require(g.neighbor_height > 0.0, "geometry.neighbor.height", "must be positive");
  require(g.workspace.x_max > g.workspace.x_min, "geometry.workspace.x_max",
          "must exceed x_min");
  require(g.workspace.y_max > g.workspace.y_min, "geometry.workspace.y_max",
          "must exceed y_min");

  for (Cable c : kAllCables) {
    const auto& m = cfg.motor(c);
    const std::string p = fmt::format("motor.{}.", cable_name(c));
    require(m.rated_power > 0.0, p + "rated_power", "must be positive");
    require(m.gear_ratio > 0.0 && m.gear_ratio <= 1.0, p + "gear_ratio",
            "must be in (0, 1] (drum revs per motor rev)");
    require(m.drum_radius > 0.0, p + "drum_radius", "must be positive");
    require(m.resistance > 0.0, p + "resistance", "must be positive");
    require(m.kt > 0.0, p + "kt", "must be positive");
    require(m.ke > 0.0, p + "ke", "must be positive");
    require(std::abs(m.kt - m.ke) <= 1e-9 * m.kt, p + "ke", "must equal kt in SI units");
    require(m.static_friction > 0.0, p + "static_friction", "must be positive");
    require(m.viscous_friction > 0.0, p + "viscous_friction", "must be positive");
    require(m.max_speed > 0.0, p + "max_speed", "must be positive");
    require(m.max_current > 0.0, p + "max_current", "must be positive");
    require(m.rotor_inertia > 0.0, p + "rotor_inertia", "must be positive");
    require(m.pid_kp > 0.0, p + "pid_kp", "must be positive");
    require(m.pid_ki >= 0.0, p + "pid_ki", "must be non-negative");

    const auto& b = cfg.brake(c);
    const std::string q = fmt::format("brake.{}.", cable_name(c));
    require(b.power >= 0.0, q + "power", "must be non-negative");
    require(b.switch_delay >= 0.0, q + "switch_delay", "must be non-negative");
    const double max_static_load = cfg.payload_mass * kGravity * m.drum_radius;
    require(b.hold_torque > max_static_load, q + "hold_torque",
            fmt::format("must exceed the static cable load torque {:.4f} N m", max_static_load));
  }

  require(cfg.payload_mass > 0.0, "payload.mass", "must be positive");
  require(cfg.payload_halfwidth > 0.0, "payload.halfwidth", "must be positive");
  require(cfg.dt > 0.0, "sim.dt", "must be positive");
  require(cfg.timeout > 0.0, "sim.timeout", "must be positive");

  const auto& t = cfg.task;
  require(t.drop_v_lo >= 0.0, "task.drop_v_lo", "must be non-negative");
  require(t.drop_v_lo < t.drop_v_hi, "task.drop_v_hi", "must exceed task.drop_v_lo");
  require(t.h_d - cfg.payload_halfwidth > g.ground_y + g.neighbor_height, "task.h_d",
          "payload must clear the neighbor box at the lift height");
  require(t.l2_threshold > 0.0, "task.l2_threshold", "must be positive");
  require(t.lift_speed > 0.0, "task.lift_speed", "must be positive");
  require(t.fine_speed > 0.0, "task.fine_speed", "must be positive");
  require(t.drop_payout_speed > 0.0, "task.drop_payout_speed", "must be positive");
  require(t.keeper_current > 0.0, "task.keeper_current", "must be positive");
  require(t.impact_current_threshold > 0.0, "task.impact_current_threshold",
          "must be positive");
  require(t.swing_damping >= 0.0, "task.swing_damping", "must be non-negative");
  require(t.restitution >= 0.0 && t.restitution < 1.0, "task.restitution",
          "must be in [0, 1)");
  require(t.hold_settle >= 0.0, "task.hold_settle", "must be non-negative");
  require(t.monitor_arm_time >= 0.0, "task.monitor_arm_time", "must be non-negative");
  require(t.stall_speed > 0.0, "task.stall_speed", "must be positive");
  require(t.stall_time > 0.0, "task.stall_time", "must be positive");

  require(cfg.ptp.v_max > 0.0, "ptp.v_max", "must be positive");
  require(cfg.ptp.a_max > 0.0, "ptp.a_max", "must be positive");
  require(cfg.ptp.kp >= 0.0, "ptp.kp", "must be non-negative");
  require(cfg.ptp.drop_clearance >= 0.0, "ptp.drop_clearance", "must be non-negative");

  require(cfg.sensor_rate > 0.0, "sensor.rate", "must be positive");
  require(cfg.sensor_noise_sigma >= 0.0, "sensor.noise_sigma", "must be non-negative");

  const Vec2 start = cfg.start_position();
  require(start.x - cfg.payload_halfwidth >= g.workspace.x_min &&
              start.x + cfg.payload_halfwidth <= g.workspace.x_max,
          "task.start_x", "start position must lie in the workspace");
  const Rect nb = g.neighbor_box();
  require(start.x + cfg.payload_halfwidth <= nb.x_min ||
              start.x - cfg.payload_halfwidth >= nb.x_max,
          "task.start_x", "payload must not overlap the neighbor box at start");
}

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig cfg = default_scenario();
  auto keys = key_table(cfg);
  std::map<std::string, const KeyRef*, std::less<>> by_name;
  for (const auto& k : keys) by_name.emplace(k.name, &k);

  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "empty key");
    if (value.empty()) throw ParseError(line_no, fmt::format("missing value for '{}'", key));

    auto it = by_name.find(key);
    if (it == by_name.end()) throw ParseError(line_no, fmt::format("unknown key '{}'", key));
    if (!seen.emplace(key).second) {
      throw ParseError(line_no, fmt::format("duplicate key '{}'", key));
    }
    const KeyRef& ref = *it->second;
    switch (ref.kind) {
      case KeyKind::kReal:
        *ref.real = parse_real(value, line_no);
        break;
      case KeyKind::kSeed: {
        std::uint64_t s = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
        if (ec != std::errc() || ptr != value.data() + value.size()) {
          throw ParseError(line_no, fmt::format("expected an unsigned integer, got '{}'", value));
        }
        *ref.seed = s;
        break;
      }
      case KeyKind::kFlag:
        if (value == "true" || value == "1") {
          *ref.flag = true;
        } else if (value == "false" || value == "0") {
          *ref.flag = false;
        } else {
          throw ParseError(line_no, fmt::format("expected true/false, got '{}'", value));
        }
        break;
    }
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
  ScenarioConfig copy = cfg;
  std::string out;
  for (const auto& k : key_table(copy)) {
    switch (k.kind) {
      case KeyKind::kReal: out += fmt::format("{} = {}\n", k.name, *k.real); break;
      case KeyKind::kSeed: out += fmt::format("{} = {}\n", k.name, *k.seed); break;
      case KeyKind::kFlag: out += fmt::format("{} = {}\n", k.name, *k.flag); break;
    }
  }
  return out;
}

std::uint64_t scenario_hash(const ScenarioConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_scenario(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace cablesim
