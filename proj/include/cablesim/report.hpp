#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "cablesim/harness.hpp"

namespace cablesim {

class ComparisonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One row of the motor table: a run's energy for one motor, cells keyed by
// that run's own phase labels.
struct MotorRow {
  std::string run;
  Cable motor = Cable::kTop;
  std::vector<PhaseEnergy> cells;
  double total = 0.0;
};

// A span of marker boundaries shared by both runs, e.g. "3-5" when one run
// merges what the other splits at 4.
struct ColumnGroup {
  std::string label;
  double baseline = 0.0;   // all motors
  double candidate = 0.0;
  double saving() const { return baseline - candidate; }
};

struct ComparisonReport {
  std::string baseline_name;
  std::string candidate_name;
  std::vector<std::string> columns;  // finest labels over both runs
  std::vector<MotorRow> motor_rows;  // baseline then candidate, per motor
  std::vector<ColumnGroup> groups;
  PerCable<double> baseline_brake{};
  PerCable<double> candidate_brake{};
  double baseline_motor_total = 0.0;
  double candidate_motor_total = 0.0;
  double baseline_brake_total = 0.0;
  double candidate_brake_total = 0.0;
  double baseline_total = 0.0;
  double candidate_total = 0.0;
  double savings = 0.0;  // fraction, 1 - candidate / baseline
  std::vector<std::string> notes;

  const ColumnGroup& largest_saving() const;
  std::string text() const;
  std::string json() const;
};

// Baseline first. Both logs must be complete and share a scenario hash.
ComparisonReport compare(const RunLog& baseline, const RunLog& candidate);

std::string energy_svg(const std::vector<const RunLog*>& logs);
std::string trajectory_svg(const std::vector<const RunLog*>& logs, const RobotGeometry& g,
                           double payload_halfwidth);
std::string brake_svg(const std::vector<const RunLog*>& logs);

// Writes energy.svg, trajectory.svg and brakes.svg into dir.
std::vector<std::filesystem::path> render_plots(const std::vector<const RunLog*>& logs,
                                                const RobotGeometry& g, double payload_halfwidth,
                                                const std::filesystem::path& dir);

}  // namespace cablesim
