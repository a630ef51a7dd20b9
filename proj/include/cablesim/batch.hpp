#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cablesim/harness.hpp"

namespace cablesim {

struct BatchResult {
  std::uint64_t seed = 0;
  std::vector<MonitorEvent> events;
  RunSummary summary;
  friend bool operator==(const BatchResult& a, const BatchResult& b) {
    return a.seed == b.seed && a.events == b.events && a.summary.total == b.summary.total &&
           a.summary.duration == b.summary.duration && a.summary.failed == b.summary.failed;
  }
};

// One run per seed, without tick records. Results are in seed order.
std::vector<BatchResult> run_batch_serial(const ScenarioConfig& cfg, ControllerKind kind,
                                          const std::vector<std::uint64_t>& seeds,
                                          std::optional<double> reference_duration = {});

// Same contract, runs spread over OpenMP threads. Each run owns its state.
std::vector<BatchResult> run_batch(const ScenarioConfig& cfg, ControllerKind kind,
                                   const std::vector<std::uint64_t>& seeds,
                                   std::optional<double> reference_duration = {});

int batch_threads();

}  // namespace cablesim
