#pragma once

#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cablesim/core_model.hpp"
#include "cablesim/plant.hpp"

namespace cablesim {

enum class Phase { kInit, kLifting, kSwing, kHold, kDrop, kFineLift, kFineSwing, kFineDrop, kDone };
std::string_view phase_name(Phase p);

struct MonitorEvent {
  int id = 0;  // 1..7
  double timestamp = 0.0;
  double trigger_value = 0.0;
  friend bool operator==(const MonitorEvent&, const MonitorEvent&) = default;
};

class FsmFault : public std::runtime_error {
 public:
  FsmFault(Phase phase, int event_id);
  Phase phase() const { return phase_; }
  int event_id() const { return event_id_; }

 private:
  Phase phase_;
  int event_id_;
};

// Monitor owning each phase, or 0 when the phase ends on a timer or never.
int owning_monitor(Phase p);

// Advances at most one phase. Hold leaves on its settle timer; every other
// transition needs the owning monitor's event. Throws FsmFault on an event
// that does not belong to the phase.
Phase step_fsm(Phase phase, const std::vector<MonitorEvent>& events, double time_in_phase,
               const ScenarioConfig& cfg);

// Stateful evaluation of the seven end-of-subtask monitors over the sensor
// stream. Only the monitor owned by the current phase is evaluated.
class MonitorBank {
 public:
  explicit MonitorBank(const ScenarioConfig& cfg);

  // Call once per tick. phase_start is the time the current phase began.
  std::vector<MonitorEvent> evaluate(const SensorFrame& f, Phase phase, double phase_start);

  // Diagnostics for the impact monitor.
  double expected_top_current() const { return lp_current_; }
  double impact_threshold() const;

 private:
  void enter(Phase phase, const SensorFrame& f);
  std::optional<MonitorEvent> operational(const SensorFrame& f) const;
  std::optional<MonitorEvent> apex(const SensorFrame& f);
  std::optional<MonitorEvent> impact(const SensorFrame& f, double armed_since);
  std::optional<MonitorEvent> stall(const SensorFrame& f);

  const ScenarioConfig& cfg_;
  std::optional<Phase> current_;

  // Apex: measured arc angle travel and direction-change debounce.
  std::optional<double> phi_start_;
  double x_start_ = 0.0;
  int direction_ = 0;
  std::deque<double> recent_x_;

  // Impact: low-passed expected current and rolling residual statistics.
  double lp_current_ = 0.0;
  std::deque<double> residuals_;

  // Stall: side-cable encoder history.
  std::deque<std::pair<double, double>> side_len_;
  std::optional<double> still_since_;
};

}  // namespace cablesim
