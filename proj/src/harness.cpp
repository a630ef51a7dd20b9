#include "cablesim/harness.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "cablesim/controllers.hpp"
#include "cablesim/version.hpp"

namespace cablesim {

using nlohmann::json;

std::string_view controller_name(ControllerKind k) {
  return k == ControllerKind::kProposed ? "proposed" : "ptp";
}

std::optional<ControllerKind> parse_controller(std::string_view s) {
  if (s == "proposed") return ControllerKind::kProposed;
  if (s == "ptp") return ControllerKind::kPtp;
  return std::nullopt;
}

std::string phase_label(Phase p) {
  switch (p) {
    case Phase::kInit: return "0-1";
    case Phase::kLifting: return "1-2";
    case Phase::kSwing: return "2-3";
    case Phase::kHold:
    case Phase::kDrop: return "3-4";
    case Phase::kFineLift: return "4-5";
    case Phase::kFineSwing: return "5-6";
    case Phase::kFineDrop: return "6-7";
    case Phase::kDone: return "7-";
  }
  return "?";
}

namespace {

class ProposedController {
 public:
  explicit ProposedController(const ScenarioConfig& cfg) : cfg_(cfg) {}

  ActuatorCommand command(Phase phase, const SensorFrame& f) {
    if (phase != last_) {
      drop_latch_ = {};
      fine_latch_ = {};
      last_ = phase;
    }
    vel_.push(f);
    enc_.push(f);
    const Cable arrive = side_cable(arriving_side(cfg_));
    switch (phase) {
      case Phase::kInit:
        return cartesian_velocity_cmd({0.0, 0.0}, f, cfg_);
      case Phase::kLifting:
        return cartesian_velocity_cmd({0.0, cfg_.task.lift_speed}, f, cfg_);
      case Phase::kSwing:
        return swing_cmd(f, cfg_);
      case Phase::kHold:
        return hold_cmd(f, cfg_);
      case Phase::kDrop:
        return drop_cmd(f, -vel_.velocity().y, drop_latch_, cfg_);
      case Phase::kFineLift:
        return fine_positioning_cmd(FineSubphase::kLift, f, 0.0, fine_latch_, cfg_);
      case Phase::kFineSwing:
        return fine_positioning_cmd(FineSubphase::kSwing, f, enc_.rate(arrive), fine_latch_,
                                    cfg_);
      case Phase::kFineDrop:
        return fine_positioning_cmd(FineSubphase::kDrop, f, 0.0, fine_latch_, cfg_);
      case Phase::kDone:
        break;
    }
    ActuatorCommand idle;
    idle.brake_energize = {false, false, false};
    return idle;
  }

 private:
  const ScenarioConfig& cfg_;
  Phase last_ = Phase::kInit;
  VelocityEstimator vel_;
  EncoderRate enc_;
  BrakeLatch drop_latch_;
  BrakeLatch fine_latch_;
};

double event_coordinate(const PtpSegment& s, Vec2 p) {
  return std::abs(s.to.x - s.from.x) > std::abs(s.to.y - s.from.y) ? p.x : p.y;
}

}  // namespace

RunLog run(const ScenarioConfig& cfg, ControllerKind kind, std::optional<double> reference_duration,
           RunOptions opts) {
  validate(cfg);
  RunLog log;
  auto& h = log.header;
  h.config_hash = scenario_hash(cfg);
  h.controller = kind;
  h.seed = cfg.rng_seed;
  h.code_version = kVersion;
  h.dt = cfg.dt;
  for (Cable c : kAllCables) h.brake_power[idx(c)] = cfg.brake(c).power;

  const auto& g = cfg.geometry;
  if (kind == ControllerKind::kPtp) {
    if (!reference_duration) {
      throw ConfigError("ref-duration", "a PTP run needs the duration of a proposed run");
    }
    h.reference_duration = reference_duration;
    try {
      h.plan = build_ptp_plan(g, cfg.start_position(),
                              {g.target_x, g.ground_y + cfg.payload_halfwidth},
                              *reference_duration, cfg);
    } catch (const ProfileError& e) {
      throw ConfigError("ref-duration", e.what());
    }
  }

  PlantState plant = initial_plant_state(cfg);
  PerCable<MotorState> motors{};
  PerCable<BrakeState> brakes{};
  for (auto& b : brakes) {
    b.energized = true;
    b.engaged = false;
  }
  SensorSampler sampler(cfg.sensor_rate, cfg.sensor_noise_sigma, cfg.rng_seed);
  MonitorBank monitors(cfg);
  ProposedController proposed(cfg);
  EnergyLedger ledger;
  ledger.set_allow_regen(cfg.allow_regen);

  auto& sum = log.summary;
  Phase phase = Phase::kInit;
  double phase_start = 0.0;
  std::size_t next_segment = 0;
  PerCable<double> power_prev{};
  const double dt = cfg.dt;
  double t = 0.0;

  try {
    for (long long k = 0;; ++k) {
      t = static_cast<double>(k) * dt;
      plant.time = t;
      const SensorFrame frame = sampler.sample(plant, motors, brakes, cfg);

      ActuatorCommand cmd;
      std::string label;
      if (kind == ControllerKind::kProposed) {
        const auto events = monitors.evaluate(frame, phase, phase_start);
        const Phase next = step_fsm(phase, events, t - phase_start, cfg);
        log.events.insert(log.events.end(), events.begin(), events.end());
        if (next != phase) {
          spdlog::debug("t={:.6f} {} -> {}", t, phase_name(phase), phase_name(next));
          phase = next;
          phase_start = t;
        }
        if (phase == Phase::kDone) break;
        label = phase_label(phase);
        cmd = proposed.command(phase, frame);
      } else {
        const PtpPlan& plan = *h.plan;
        if (k == 0) log.events.push_back({plan.start_marker, t, frame.position.y});
        while (next_segment < plan.segments.size()) {
          const auto& s = plan.segments[next_segment];
          if (t < s.t_start + s.profile.t_total - 1e-9) break;
          log.events.push_back({s.end_marker, t, event_coordinate(s, frame.position)});
          ++next_segment;
        }
        if (next_segment == plan.segments.size()) break;
        label = ptp_phase_label(plan, plan.segment_at(t));
        cmd = ptp_tracking_cmd(plan, t, frame, cfg);
      }
      if (t >= cfg.timeout - 1e-12) {
        sum.failed = true;
        sum.failure = fmt::format("timeout after {} s in phase {}", cfg.timeout, label);
        break;
      }
      if (sum.phases.empty() || sum.phases.back().label != label) {
        sum.phases.push_back({label, t, t, {}});
      }

      PerCable<bool> energized{};
      for (Cable c : kAllCables) {
        const int i = idx(c);
        const bool was = brakes[i].energized;
        brakes[i] = brake_step(brakes[i], cmd.brake_energize[i], cfg.brake(c), t, dt).state;
        energized[i] = brakes[i].energized;
        if (energized[i] != was) ++sum.brake_transitions[i];

        MotorState& m = motors[i];
        const MotorCommand& mc = cmd[c];
        if (mc.mode != m.mode && mc.mode == MotorMode::kVelocity) m.integrator = m.current;
        m.mode = mc.mode;
        m.setpoint = mc.setpoint;
        m = motor_step(m, cfg.motor(c), plant.tension[i] * cfg.motor(c).drum_radius, dt,
                       brakes[i].engaged);
      }

      const PlantStepResult step = plant_step(plant, motors, brakes, cfg);
      plant = step.state;

      PerCable<double> power{};
      for (Cable c : kAllCables) {
        const int i = idx(c);
        if (!brakes[i].engaged && motors[i].mode != MotorMode::kVelocity) {
          motors[i] = motor_follow(motors[i], cfg.motor(c), step.cable_rate[i], dt);
        }
        power[i] = electrical_power(motors[i].voltage, motors[i].current);
      }

      ledger.integrate(power_prev, power, energized, h.brake_power, dt, label, t);
      auto& ph = sum.phases.back();
      for (int i = 0; i < kNumCables; ++i) {
        ph.motor[i] +=
            0.5 * (ledger.clamp_power(power_prev[i]) + ledger.clamp_power(power[i])) * dt;
      }
      power_prev = power;
      ph.t_end = t + dt;

      if (opts.record_ticks) {
        TickRecord r;
        r.time = t + dt;
        r.p = plant.p;
        r.v = plant.v;
        r.phase = static_cast<int>(sum.phases.size()) - 1;
        r.mode = plant.mode;
        for (int i = 0; i < kNumCables; ++i) {
          r.voltage[i] = motors[i].voltage;
          r.current[i] = motors[i].current;
          r.speed[i] = motors[i].shaft_speed;
          r.brake_energized[i] = brakes[i].energized;
          r.brake_engaged[i] = brakes[i].engaged;
          r.length[i] = plant.length[i];
          r.taut[i] = plant.taut[i];
          r.tension[i] = plant.tension[i];
        }
        r.motor_energy = ledger.motor_energy();
        r.brake_energy = ledger.brake_energy();
        r.total_energy = ledger.total();
        log.ticks.push_back(r);
      }
    }
  } catch (const FsmFault& e) {
    sum.failed = true;
    sum.failure = fmt::format("supervisor fault at t={:.6f}: {}", t, e.what());
  } catch (const ConstraintError& e) {
    sum.failed = true;
    sum.failure = fmt::format("constraint failure at t={:.6f}: {}", t, e.what());
  } catch (const GeometryError& e) {
    sum.failed = true;
    sum.failure = fmt::format("geometry failure at t={:.6f}: {}", t, e.what());
  }

  if (sum.failed) spdlog::warn("{} run failed: {}", controller_name(kind), sum.failure);
  sum.duration = t;
  sum.motor_energy = ledger.motor_energy();
  sum.brake_energy = ledger.brake_energy();
  for (int i = 0; i < kNumCables; ++i) {
    sum.brake_on_time[i] = static_cast<double>(ledger.brake_ticks()[i]) * dt;
  }
  sum.motor_total = ledger.motor_total();
  sum.brake_total = ledger.brake_total();
  sum.total = ledger.total();
  return log;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c{"time", "phase", "mode", "x", "y", "vx", "vy"};
    for (Cable cab : kAllCables) {
      const std::string n(cable_name(cab));
      for (const char* f : {"voltage_", "current_", "speed_"}) c.push_back(f + n);
    }
    for (Cable cab : kAllCables) {
      const std::string n(cable_name(cab));
      c.push_back("brake_energized_" + n);
      c.push_back("brake_engaged_" + n);
    }
    for (Cable cab : kAllCables) {
      const std::string n(cable_name(cab));
      for (const char* f : {"length_", "taut_", "tension_"}) c.push_back(f + n);
    }
    for (Cable cab : kAllCables) c.push_back("energy_motor_" + std::string(cable_name(cab)));
    for (Cable cab : kAllCables) c.push_back("energy_brake_" + std::string(cable_name(cab)));
    c.push_back("energy_total");
    return c;
  }();
  return cols;
}

std::string csv_body(const RunLog& log) {
  std::string out;
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out += cols[i];
    out += i + 1 < cols.size() ? ',' : '\n';
  }
  auto it = std::back_inserter(out);
  for (const auto& r : log.ticks) {
    fmt::format_to(it, "{:.6f},{},{},{},{},{},{}", r.time, log.summary.phases[r.phase].label,
                   dyn_mode_name(r.mode), r.p.x, r.p.y, r.v.x, r.v.y);
    for (int i = 0; i < kNumCables; ++i) {
      fmt::format_to(it, ",{},{},{}", r.voltage[i], r.current[i], r.speed[i]);
    }
    for (int i = 0; i < kNumCables; ++i) {
      fmt::format_to(it, ",{:d},{:d}", r.brake_energized[i], r.brake_engaged[i]);
    }
    for (int i = 0; i < kNumCables; ++i) {
      fmt::format_to(it, ",{},{:d},{}", r.length[i], r.taut[i], r.tension[i]);
    }
    for (double e : r.motor_energy) fmt::format_to(it, ",{:.4f}", e);
    for (double e : r.brake_energy) fmt::format_to(it, ",{:.4f}", e);
    fmt::format_to(it, ",{:.4f}\n", r.total_energy);
  }
  return out;
}

namespace {

json per_cable(const PerCable<double>& v) {
  return {{"top", v[0]}, {"left", v[1]}, {"right", v[2]}};
}

template <typename T>
PerCable<T> per_cable_from(const json& j) {
  return {j.at("top").get<T>(), j.at("left").get<T>(), j.at("right").get<T>()};
}

json profile_json(const TrapezoidProfile& p) {
  return {{"distance", p.distance},
          {"v_max", p.v_max},
          {"a_max", p.a_max},
          {"v_peak", p.v_peak},
          {"t_acc", p.t_acc},
          {"t_cruise", p.t_cruise},
          {"t_total", p.t_total},
          {"shape", p.shape == ProfileShape::kTriangular ? "triangular" : "trapezoidal"}};
}

TrapezoidProfile profile_from(const json& j) {
  TrapezoidProfile p;
  p.distance = j.at("distance").get<double>();
  p.v_max = j.at("v_max").get<double>();
  p.a_max = j.at("a_max").get<double>();
  p.v_peak = j.at("v_peak").get<double>();
  p.t_acc = j.at("t_acc").get<double>();
  p.t_cruise = j.at("t_cruise").get<double>();
  p.t_total = j.at("t_total").get<double>();
  p.shape = j.at("shape") == "triangular" ? ProfileShape::kTriangular : ProfileShape::kTrapezoidal;
  return p;
}

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }
Vec2 vec_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

std::string summary_json(const RunLog& log) {
  const auto& h = log.header;
  const auto& s = log.summary;
  json header{{"config_hash", fmt::format("{:016x}", h.config_hash)},
              {"controller", controller_name(h.controller)},
              {"seed", h.seed},
              {"code_version", h.code_version},
              {"dt", h.dt},
              {"brake_power", per_cable(h.brake_power)},
              {"reference_duration", nullptr},
              {"plan", nullptr}};
  if (h.reference_duration) header["reference_duration"] = *h.reference_duration;
  if (h.plan) {
    json segs = json::array();
    for (const auto& seg : h.plan->segments) {
      segs.push_back({{"from", vec_json(seg.from)},
                      {"to", vec_json(seg.to)},
                      {"t_start", seg.t_start},
                      {"end_marker", seg.end_marker},
                      {"stretch", seg.stretch},
                      {"profile", profile_json(seg.profile)}});
    }
    header["plan"] = {{"start_marker", h.plan->start_marker},
                      {"total_time", h.plan->total_time},
                      {"segments", segs}};
  }

  json events = json::array();
  for (const auto& e : log.events) {
    events.push_back({{"id", e.id}, {"timestamp", e.timestamp}, {"trigger_value", e.trigger_value}});
  }
  json phases = json::array();
  for (const auto& p : s.phases) {
    phases.push_back({{"label", p.label},
                      {"t_begin", p.t_begin},
                      {"t_end", p.t_end},
                      {"motor", per_cable(p.motor)}});
  }
  json summary{{"phases", phases},
               {"motor_energy", per_cable(s.motor_energy)},
               {"brake_energy", per_cable(s.brake_energy)},
               {"brake_on_time", per_cable(s.brake_on_time)},
               {"brake_transitions",
                {{"top", s.brake_transitions[0]},
                 {"left", s.brake_transitions[1]},
                 {"right", s.brake_transitions[2]}}},
               {"motor_total", s.motor_total},
               {"brake_total", s.brake_total},
               {"total", s.total},
               {"duration", s.duration},
               {"failed", s.failed},
               {"failure", s.failure}};
  return json{{"header", header}, {"events", events}, {"summary", summary}}.dump(2) + "\n";
}

RunLog parse_summary_json(const std::string& text) {
  const json j = json::parse(text);
  RunLog log;
  const auto& jh = j.at("header");
  auto& h = log.header;
  h.config_hash = std::stoull(jh.at("config_hash").get<std::string>(), nullptr, 16);
  const auto kind = parse_controller(jh.at("controller").get<std::string>());
  if (!kind) throw std::runtime_error("unknown controller in run log");
  h.controller = *kind;
  h.seed = jh.at("seed").get<std::uint64_t>();
  h.code_version = jh.at("code_version").get<std::string>();
  h.dt = jh.at("dt").get<double>();
  h.brake_power = per_cable_from<double>(jh.at("brake_power"));
  if (!jh.at("reference_duration").is_null()) {
    h.reference_duration = jh.at("reference_duration").get<double>();
  }
  if (!jh.at("plan").is_null()) {
    const auto& jp = jh.at("plan");
    PtpPlan plan;
    plan.start_marker = jp.at("start_marker").get<int>();
    plan.total_time = jp.at("total_time").get<double>();
    for (const auto& js : jp.at("segments")) {
      PtpSegment seg;
      seg.from = vec_from(js.at("from"));
      seg.to = vec_from(js.at("to"));
      seg.t_start = js.at("t_start").get<double>();
      seg.end_marker = js.at("end_marker").get<int>();
      seg.stretch = js.at("stretch").get<double>();
      seg.profile = profile_from(js.at("profile"));
      plan.segments.push_back(seg);
    }
    h.plan = plan;
  }

  for (const auto& je : j.at("events")) {
    log.events.push_back({je.at("id").get<int>(), je.at("timestamp").get<double>(),
                          je.at("trigger_value").get<double>()});
  }

  const auto& js = j.at("summary");
  auto& s = log.summary;
  for (const auto& jp : js.at("phases")) {
    s.phases.push_back({jp.at("label").get<std::string>(), jp.at("t_begin").get<double>(),
                        jp.at("t_end").get<double>(), per_cable_from<double>(jp.at("motor"))});
  }
  s.motor_energy = per_cable_from<double>(js.at("motor_energy"));
  s.brake_energy = per_cable_from<double>(js.at("brake_energy"));
  s.brake_on_time = per_cable_from<double>(js.at("brake_on_time"));
  s.brake_transitions = per_cable_from<int>(js.at("brake_transitions"));
  s.motor_total = js.at("motor_total").get<double>();
  s.brake_total = js.at("brake_total").get<double>();
  s.total = js.at("total").get<double>();
  s.duration = js.at("duration").get<double>();
  s.failed = js.at("failed").get<bool>();
  s.failure = js.at("failure").get<std::string>();
  return log;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error(fmt::format("bad number '{}' in run log", s));
  }
  return v;
}

DynMode mode_from(std::string_view s) {
  for (DynMode m : {DynMode::kFullyConstrained, DynMode::kPendulum, DynMode::kFreeFall}) {
    if (dyn_mode_name(m) == s) return m;
  }
  throw std::runtime_error(fmt::format("bad dynamics mode '{}' in run log", s));
}

}  // namespace

std::vector<TickRecord> parse_csv_body(const std::string& text, const RunSummary& summary) {
  std::vector<TickRecord> ticks;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  const auto& cols = csv_columns();
  const auto header = split(line, ',');
  if (header.size() != cols.size() || !std::equal(header.begin(), header.end(), cols.begin())) {
    throw std::runtime_error("run log CSV header does not match the frozen column order");
  }
  int phase = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != cols.size()) throw std::runtime_error("run log CSV row has wrong width");
    TickRecord r;
    std::size_t k = 0;
    r.time = to_double(f[k++]);
    const std::string_view label = f[k++];
    while (phase < static_cast<int>(summary.phases.size()) &&
           summary.phases[phase].label != label) {
      ++phase;
    }
    if (phase == static_cast<int>(summary.phases.size())) {
      throw std::runtime_error(fmt::format("phase '{}' missing from the summary", label));
    }
    r.phase = phase;
    r.mode = mode_from(f[k++]);
    r.p = {to_double(f[k]), to_double(f[k + 1])};
    r.v = {to_double(f[k + 2]), to_double(f[k + 3])};
    k += 4;
    for (int i = 0; i < kNumCables; ++i) {
      r.voltage[i] = to_double(f[k++]);
      r.current[i] = to_double(f[k++]);
      r.speed[i] = to_double(f[k++]);
    }
    for (int i = 0; i < kNumCables; ++i) {
      r.brake_energized[i] = f[k++] == "1";
      r.brake_engaged[i] = f[k++] == "1";
    }
    for (int i = 0; i < kNumCables; ++i) {
      r.length[i] = to_double(f[k++]);
      r.taut[i] = f[k++] == "1";
      r.tension[i] = to_double(f[k++]);
    }
    for (int i = 0; i < kNumCables; ++i) r.motor_energy[i] = to_double(f[k++]);
    for (int i = 0; i < kNumCables; ++i) r.brake_energy[i] = to_double(f[k++]);
    r.total_energy = to_double(f[k++]);
    ticks.push_back(r);
  }
  return ticks;
}

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", p.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", p.string()));
  out << text;
}

}  // namespace

void write_run_log(const RunLog& log, const std::filesystem::path& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  write_file(dir / (stem + ".csv"), csv_body(log));
  write_file(dir / (stem + ".json"), summary_json(log));
}

RunLog read_run_log(const std::filesystem::path& json_path) {
  RunLog log = parse_summary_json(read_file(json_path));
  auto csv = json_path;
  csv.replace_extension(".csv");
  if (std::filesystem::exists(csv)) log.ticks = parse_csv_body(read_file(csv), log.summary);
  return log;
}

std::vector<PhaseEnergy> rederive_phase_energy(const RunLog& log, bool allow_regen) {
  std::vector<PhaseEnergy> out;
  for (const auto& p : log.summary.phases) out.push_back({p.label, p.t_begin, p.t_end, {}});
  const double dt = log.header.dt;
  auto clamp = [&](double p) { return allow_regen ? p : std::max(0.0, p); };
  PerCable<double> prev{};
  for (const auto& r : log.ticks) {
    for (int i = 0; i < kNumCables; ++i) {
      const double p = r.voltage[i] * r.current[i];
      out[r.phase].motor[i] += 0.5 * (clamp(prev[i]) + clamp(p)) * dt;
      prev[i] = p;
    }
  }
  return out;
}

}  // namespace cablesim
