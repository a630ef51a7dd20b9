#include "cablesim/batch.hpp"

#include <exception>

#include <omp.h>

namespace cablesim {

namespace {

BatchResult run_one(ScenarioConfig cfg, ControllerKind kind, std::uint64_t seed,
                    std::optional<double> reference_duration) {
  cfg.rng_seed = seed;
  RunLog log = run(cfg, kind, reference_duration, {.record_ticks = false});
  return {seed, std::move(log.events), std::move(log.summary)};
}

}  // namespace

std::vector<BatchResult> run_batch_serial(const ScenarioConfig& cfg, ControllerKind kind,
                                          const std::vector<std::uint64_t>& seeds,
                                          std::optional<double> reference_duration) {
  std::vector<BatchResult> out;
  out.reserve(seeds.size());
  for (auto seed : seeds) out.push_back(run_one(cfg, kind, seed, reference_duration));
  return out;
}

std::vector<BatchResult> run_batch(const ScenarioConfig& cfg, ControllerKind kind,
                                   const std::vector<std::uint64_t>& seeds,
                                   std::optional<double> reference_duration) {
  validate(cfg);
  std::vector<BatchResult> out(seeds.size());
  std::exception_ptr error;
  const auto n = static_cast<long long>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) {
    try {
      out[i] = run_one(cfg, kind, seeds[i], reference_duration);
    } catch (...) {
#pragma omp critical(batch_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

int batch_threads() { return omp_get_max_threads(); }

}  // namespace cablesim
