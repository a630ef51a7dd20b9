#include "cablesim/supervisor.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "cablesim/controllers.hpp"
#include "cablesim/kinematics.hpp"

namespace cablesim {

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::kInit: return "Init";
    case Phase::kLifting: return "Lifting";
    case Phase::kSwing: return "Swing";
    case Phase::kHold: return "Hold";
    case Phase::kDrop: return "Drop";
    case Phase::kFineLift: return "FineLift";
    case Phase::kFineSwing: return "FineSwing";
    case Phase::kFineDrop: return "FineDrop";
    case Phase::kDone: return "Done";
  }
  return "?";
}

FsmFault::FsmFault(Phase phase, int event_id)
    : std::runtime_error(
          fmt::format("monitor {} fired during phase {}", event_id, phase_name(phase))),
      phase_(phase),
      event_id_(event_id) {}

int owning_monitor(Phase p) {
  switch (p) {
    case Phase::kInit: return 1;
    case Phase::kLifting: return 2;
    case Phase::kSwing: return 3;
    case Phase::kHold: return 0;
    case Phase::kDrop: return 4;
    case Phase::kFineLift: return 5;
    case Phase::kFineSwing: return 6;
    case Phase::kFineDrop: return 7;
    case Phase::kDone: return 0;
  }
  return 0;
}

namespace {

Phase next_phase(Phase p) {
  return p == Phase::kDone ? Phase::kDone : static_cast<Phase>(static_cast<int>(p) + 1);
}

constexpr double kApexMinTravel = 5.0 * std::numbers::pi / 180.0;
constexpr std::size_t kApexDebounce = 3;       // samples, monotone after the turn
constexpr double kExpectedCurrentCutoff = 20.0;  // Hz
constexpr double kResidualWindow = 0.2;          // s

}  // namespace

Phase step_fsm(Phase phase, const std::vector<MonitorEvent>& events, double time_in_phase,
               const ScenarioConfig& cfg) {
  const int owner = owning_monitor(phase);
  for (const auto& e : events) {
    if (e.id != owner || owner == 0) throw FsmFault(phase, e.id);
  }
  if (phase == Phase::kHold) {
    return time_in_phase >= cfg.task.hold_settle - 1e-9 ? Phase::kDrop : Phase::kHold;
  }
  return events.empty() ? phase : next_phase(phase);
}

MonitorBank::MonitorBank(const ScenarioConfig& cfg) : cfg_(cfg) {}

double MonitorBank::impact_threshold() const {
  double thr = cfg_.task.impact_current_threshold;
  if (residuals_.size() >= 2) {
    double mean = 0.0;
    for (double r : residuals_) mean += r;
    mean /= static_cast<double>(residuals_.size());
    double var = 0.0;
    for (double r : residuals_) var += (r - mean) * (r - mean);
    var /= static_cast<double>(residuals_.size() - 1);
    thr = std::max(thr, 2.0 * std::sqrt(var));
  }
  return thr;
}

void MonitorBank::enter(Phase phase, const SensorFrame& f) {
  current_ = phase;
  phi_start_.reset();
  direction_ = 0;
  recent_x_.clear();
  residuals_.clear();
  lp_current_ = f.expected_current[idx(Cable::kTop)];
  side_len_.clear();
  still_since_.reset();
}

std::optional<MonitorEvent> MonitorBank::operational(const SensorFrame& f) const {
  if (!f.fresh) return std::nullopt;
  const auto& g = cfg_.geometry;
  const Cable side = side_cable(active_side(cfg_.start_position(), g));
  const double tol = 0.002 + 5.0 * cfg_.sensor_noise_sigma;
  for (Cable c : {Cable::kTop, side}) {
    if (f.brake_engaged[idx(c)]) return std::nullopt;
    const double d = (f.position - g.anchor(c)).norm();
    if (std::abs(d - f.encoder_length[idx(c)]) > tol) return std::nullopt;
  }
  return MonitorEvent{1, f.timestamp, f.position.y};
}

std::optional<MonitorEvent> MonitorBank::apex(const SensorFrame& f) {
  if (!f.fresh) return std::nullopt;
  const ArcState arc = constrained_arc_state(f.position, cfg_.geometry);
  if (!phi_start_) {
    phi_start_ = arc.phi;
    x_start_ = f.position.x;
  }
  recent_x_.push_back(f.position.x);
  while (recent_x_.size() > kApexDebounce) recent_x_.pop_front();

  if (direction_ == 0) {
    if (std::abs(arc.phi - *phi_start_) < kApexMinTravel) return std::nullopt;
    direction_ = f.position.x > x_start_ ? 1 : -1;
    return std::nullopt;
  }
  if (recent_x_.size() < kApexDebounce) return std::nullopt;
  for (std::size_t i = 1; i < recent_x_.size(); ++i) {
    if ((recent_x_[i] - recent_x_[i - 1]) * direction_ >= 0.0) return std::nullopt;
  }
  return MonitorEvent{3, f.timestamp, f.position.x};
}

std::optional<MonitorEvent> MonitorBank::impact(const SensorFrame& f, double armed_since) {
  const int top = idx(Cable::kTop);
  const double tau = 1.0 / (2.0 * std::numbers::pi * kExpectedCurrentCutoff);
  const double alpha = cfg_.dt / (tau + cfg_.dt);
  lp_current_ += alpha * (f.expected_current[top] - lp_current_);
  const double residual = f.motor_current[top] - lp_current_;

  std::optional<MonitorEvent> ev;
  if (f.timestamp >= armed_since - 1e-12 && std::abs(residual) > impact_threshold()) {
    ev = MonitorEvent{0, f.timestamp, residual};
  }
  residuals_.push_back(residual);
  const auto window = static_cast<std::size_t>(std::lround(kResidualWindow / cfg_.dt));
  while (residuals_.size() > window) residuals_.pop_front();
  return ev;
}

std::optional<MonitorEvent> MonitorBank::stall(const SensorFrame& f) {
  const Cable side = side_cable(arriving_side(cfg_));
  const int i = idx(side);
  side_len_.emplace_back(f.timestamp, f.encoder_length[i]);
  while (side_len_.size() > 11) side_len_.pop_front();
  if (side_len_.size() < 2 || f.brake_engaged[i]) {
    still_since_.reset();
    return std::nullopt;
  }
  const auto& [t0, l0] = side_len_.front();
  const auto& [t1, l1] = side_len_.back();
  const double speed = std::abs(l1 - l0) / (t1 - t0);
  if (speed >= cfg_.task.stall_speed) {
    still_since_.reset();
    return std::nullopt;
  }
  if (!still_since_) still_since_ = f.timestamp;
  if (f.timestamp - *still_since_ >= cfg_.task.stall_time - 1e-9) {
    return MonitorEvent{6, f.timestamp, speed};
  }
  return std::nullopt;
}

std::vector<MonitorEvent> MonitorBank::evaluate(const SensorFrame& f, Phase phase,
                                                double phase_start) {
  if (current_ != phase) enter(phase, f);
  const double armed = phase_start + cfg_.task.monitor_arm_time;
  std::optional<MonitorEvent> ev;
  switch (phase) {
    case Phase::kInit:
      ev = operational(f);
      break;
    case Phase::kLifting:
      if (f.fresh && f.position.y >= cfg_.task.h_d) ev = MonitorEvent{2, f.timestamp, f.position.y};
      break;
    case Phase::kSwing:
      ev = apex(f);
      break;
    case Phase::kDrop:
      if ((ev = impact(f, armed))) ev->id = 4;
      break;
    case Phase::kFineLift: {
      const double l2 = f.encoder_length[idx(Cable::kTop)];
      if (l2 <= cfg_.task.l2_threshold) ev = MonitorEvent{5, f.timestamp, l2};
      break;
    }
    case Phase::kFineSwing: {
      auto spike = impact(f, armed);
      ev = stall(f);
      if (!ev && spike) ev = MonitorEvent{6, f.timestamp, spike->trigger_value};
      break;
    }
    case Phase::kFineDrop:
      if ((ev = impact(f, armed))) ev->id = 7;
      break;
    case Phase::kHold:
    case Phase::kDone:
      break;
  }
  if (!ev) return {};
  return {*ev};
}

}  // namespace cablesim
