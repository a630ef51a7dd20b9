#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cablesim/actuation.hpp"
#include "cablesim/core_model.hpp"
#include "cablesim/plant.hpp"
#include "cablesim/ptp.hpp"
#include "cablesim/supervisor.hpp"

namespace cablesim {

enum class ControllerKind { kProposed, kPtp };
std::string_view controller_name(ControllerKind k);
std::optional<ControllerKind> parse_controller(std::string_view s);

// Ledger label of a proposed-controller phase: the monitor pair it spans.
// Hold and Drop share "3-4".
std::string phase_label(Phase p);

struct TickRecord {
  double time = 0.0;  // end of the step
  Vec2 p;
  Vec2 v;
  int phase = 0;  // index into RunSummary::phases
  DynMode mode = DynMode::kFreeFall;
  PerCable<double> voltage{};
  PerCable<double> current{};
  PerCable<double> speed{};  // motor shaft, rad/s
  PerCable<bool> brake_energized{};
  PerCable<bool> brake_engaged{};
  PerCable<double> length{};
  PerCable<bool> taut{};
  PerCable<double> tension{};
  PerCable<double> motor_energy{};  // cumulative
  PerCable<double> brake_energy{};  // cumulative
  double total_energy = 0.0;
};

struct PhaseEnergy {
  std::string label;
  double t_begin = 0.0;
  double t_end = 0.0;
  PerCable<double> motor{};
};

struct RunHeader {
  std::uint64_t config_hash = 0;
  ControllerKind controller = ControllerKind::kProposed;
  std::uint64_t seed = 0;
  std::string code_version;
  double dt = 0.0;
  PerCable<double> brake_power{};
  std::optional<double> reference_duration;
  std::optional<PtpPlan> plan;
};

struct RunSummary {
  std::vector<PhaseEnergy> phases;  // in execution order
  PerCable<double> motor_energy{};
  PerCable<double> brake_energy{};
  PerCable<double> brake_on_time{};
  PerCable<int> brake_transitions{};  // energized-state changes
  double motor_total = 0.0;
  double brake_total = 0.0;
  double total = 0.0;
  double duration = 0.0;
  bool failed = false;
  std::string failure;
};

struct RunLog {
  RunHeader header;
  std::vector<TickRecord> ticks;
  std::vector<MonitorEvent> events;
  RunSummary summary;
};

struct RunOptions {
  bool record_ticks = true;
};

// Runs one experiment to Done, a fault or the timeout. Faults produce a log
// flagged failed rather than an exception. A PTP run needs the duration of a
// completed proposed run; without one it throws ConfigError.
RunLog run(const ScenarioConfig& cfg, ControllerKind kind,
           std::optional<double> reference_duration = std::nullopt, RunOptions opts = {});

// Frozen CSV column order.
const std::vector<std::string>& csv_columns();

std::string csv_body(const RunLog& log);
std::string summary_json(const RunLog& log);

// Writes <stem>.csv and <stem>.json into dir.
void write_run_log(const RunLog& log, const std::filesystem::path& dir, const std::string& stem);

// Header, events and summary from a JSON sidecar; ticks from the CSV next to
// it when present.
RunLog read_run_log(const std::filesystem::path& json_path);
RunLog parse_summary_json(const std::string& text);
std::vector<TickRecord> parse_csv_body(const std::string& text, const RunSummary& summary);

// Per-phase motor energy re-derived from the tick records alone.
std::vector<PhaseEnergy> rederive_phase_energy(const RunLog& log, bool allow_regen);

}  // namespace cablesim
