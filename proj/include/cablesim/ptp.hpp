#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cablesim/controllers.hpp"
#include "cablesim/core_model.hpp"
#include "cablesim/plant.hpp"

namespace cablesim {

enum class ProfileShape { kTrapezoidal, kTriangular };

struct TrapezoidProfile {
  double distance = 0.0;
  double v_max = 0.0;   // limit the profile was planned against
  double a_max = 0.0;
  double v_peak = 0.0;  // cruise speed actually reached
  double t_acc = 0.0;
  double t_cruise = 0.0;
  double t_total = 0.0;
  ProfileShape shape = ProfileShape::kTrapezoidal;

  double position(double t) const;  // clamped to [0, t_total]
  double velocity(double t) const;
  double acceleration(double t) const;
};

class ProfileError : public std::invalid_argument {
 public:
  enum class Constraint { kDistance, kVelocity, kAcceleration, kDuration };
  ProfileError(Constraint c, const std::string& what)
      : std::invalid_argument(what), constraint_(c) {}
  Constraint constraint() const { return constraint_; }

 private:
  Constraint constraint_;
};

// Minimum-time profile, or with stretch_to > 0 the profile that covers the
// distance in exactly stretch_to seconds at full acceleration and reduced
// cruise speed.
TrapezoidProfile trapezoid(double distance, double v_max, double a_max, double stretch_to = 0.0);

struct PtpSegment {
  Vec2 from;
  Vec2 to;
  TrapezoidProfile profile;
  double t_start = 0.0;
  int end_marker = 0;      // monitor id reached at the end of the segment
  double stretch = 1.0;    // duration over minimum duration
};

struct PtpPlan {
  int start_marker = 1;
  std::vector<PtpSegment> segments;
  double total_time = 0.0;

  // Markers in order, starting with the start marker.
  std::vector<int> markers() const;
  // Segment index active at t; the last segment for t past the end.
  std::size_t segment_at(double t) const;
  Vec2 position(double t) const;
  Vec2 velocity(double t) const;
};

// Label of the ledger phase covering a segment, e.g. "3-5".
std::string ptp_phase_label(const PtpPlan& plan, std::size_t segment);

// Lift, transport to the mirror point of the start about the top anchor, drop
// to just above the ground, transport to the target, set down. Transport
// segments share one stretch factor so the plan lasts reference_duration.
PtpPlan build_ptp_plan(const RobotGeometry& g, Vec2 start, Vec2 target,
                       double reference_duration, const ScenarioConfig& cfg);

// Minimum duration of the plan build_ptp_plan would produce.
double ptp_minimum_duration(const RobotGeometry& g, Vec2 start, Vec2 target,
                            const ScenarioConfig& cfg);

ActuatorCommand ptp_tracking_cmd(const PtpPlan& plan, double t, const SensorFrame& sensors,
                                 const ScenarioConfig& cfg);

}  // namespace cablesim
