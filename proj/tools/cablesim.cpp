// cablesim: run, compare and plot planar cable-robot pick-and-place runs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "cablesim/core_model.hpp"
#include "cablesim/harness.hpp"
#include "cablesim/log.hpp"
#include "cablesim/report.hpp"

namespace fs = std::filesystem;
using namespace cablesim;

namespace {

constexpr int kOk = 0;
constexpr int kRunFault = 1;
constexpr int kConfigError = 2;

struct Options {
  std::string scenario;
  std::string controller = "proposed";
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> ref_duration;
  std::optional<double> timeout;
  std::vector<std::string> logs;
};

ScenarioConfig load(const Options& o) {
  ScenarioConfig cfg = o.scenario.empty() ? default_scenario() : load_scenario(o.scenario);
  if (o.seed) cfg.rng_seed = *o.seed;
  if (o.timeout) cfg.timeout = *o.timeout;
  validate(cfg);
  return cfg;
}

void print_summary(const RunLog& log) {
  const auto& s = log.summary;
  fmt::print("{} run: {} after {:.3f} s\n", controller_name(log.header.controller),
             s.failed ? "FAILED" : "done", s.duration);
  if (s.failed) fmt::print("  {}\n", s.failure);
  std::string ids;
  for (const auto& e : log.events) ids += fmt::format(" {}@{:.3f}", e.id, e.timestamp);
  fmt::print("  events:{}\n", ids);
  fmt::print("  energy: motors {:.2f} J, brakes {:.2f} J, total {:.2f} J\n", s.motor_total,
             s.brake_total, s.total);
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

int cmd_run(const Options& o) {
  const auto kind = parse_controller(o.controller);
  if (!kind) throw ConfigError("controller", "expected proposed or ptp");
  const ScenarioConfig cfg = load(o);
  const RunLog log = run(cfg, *kind, o.ref_duration);
  write_run_log(log, o.out, std::string(controller_name(*kind)));
  print_summary(log);
  return log.summary.failed ? kRunFault : kOk;
}

// PTP is the baseline whenever it is one of the two.
std::pair<const RunLog*, const RunLog*> order(const RunLog& a, const RunLog& b) {
  if (b.header.controller == ControllerKind::kPtp && a.header.controller != ControllerKind::kPtp) {
    return {&b, &a};
  }
  return {&a, &b};
}

int report(const RunLog& a, const RunLog& b, const fs::path& out) {
  const auto [base, cand] = order(a, b);
  const ComparisonReport rep = compare(*base, *cand);
  fmt::print("{}", rep.text());
  fs::create_directories(out);
  write_text(out / "report.txt", rep.text());
  write_text(out / "report.json", rep.json());
  return kOk;
}

int cmd_compare(const Options& o) {
  if (o.logs.size() != 2) throw ConfigError("logs", "compare needs exactly two run logs");
  const RunLog a = read_run_log(o.logs[0]);
  const RunLog b = read_run_log(o.logs[1]);
  return report(a, b, o.out);
}

int cmd_plot(const Options& o) {
  if (o.logs.empty()) throw ConfigError("logs", "plot needs at least one run log");
  const ScenarioConfig cfg = load(o);
  std::vector<RunLog> logs;
  for (const auto& p : o.logs) logs.push_back(read_run_log(p));
  std::vector<const RunLog*> ptrs;
  for (const auto& l : logs) ptrs.push_back(&l);
  for (const auto& p : render_plots(ptrs, cfg.geometry, cfg.payload_halfwidth, o.out)) {
    fmt::print("wrote {}\n", p.string());
  }
  return kOk;
}

int cmd_demo(const Options& o) {
  const ScenarioConfig cfg = load(o);
  const RunLog proposed = run(cfg, ControllerKind::kProposed);
  write_run_log(proposed, o.out, "proposed");
  print_summary(proposed);
  if (proposed.summary.failed) return kRunFault;

  const RunLog ptp = run(cfg, ControllerKind::kPtp, proposed.summary.duration);
  write_run_log(ptp, o.out, "ptp");
  print_summary(ptp);
  if (ptp.summary.failed) return kRunFault;

  fmt::print("\n");
  report(proposed, ptp, o.out);
  render_plots({&proposed, &ptp}, cfg.geometry, cfg.payload_halfwidth, o.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  init_logging();
  CLI::App app{"Planar cable robot pick-and-place simulator"};
  app.require_subcommand(1);
  Options o;

  auto add_scenario = [&](CLI::App* sc) {
    sc->add_option("--scenario", o.scenario, "scenario file (key = value)")
        ->check(CLI::ExistingFile);
    sc->add_option("--seed", o.seed, "sensor noise seed");
    sc->add_option("--timeout", o.timeout, "simulated time limit [s]");
  };

  auto* run_cmd = app.add_subcommand("run", "run one controller and write its log");
  add_scenario(run_cmd);
  run_cmd->add_option("--controller", o.controller, "proposed or ptp")
      ->check(CLI::IsMember({"proposed", "ptp"}));
  run_cmd->add_option("--ref-duration", o.ref_duration,
                      "duration of a proposed run [s], required for ptp");
  run_cmd->add_option("--out", o.out, "output directory");

  auto* cmp = app.add_subcommand("compare", "energy tables for two run logs");
  cmp->add_option("logs", o.logs, "two JSON run summaries")->required()->expected(2);
  cmp->add_option("--out", o.out, "output directory");

  auto* plot = app.add_subcommand("plot", "SVG plots for run logs");
  plot->add_option("logs", o.logs, "JSON run summaries")->required()->expected(1, 2);
  plot->add_option("--scenario", o.scenario, "scenario file for the geometry")
      ->check(CLI::ExistingFile);
  plot->add_option("--out", o.out, "output directory");

  auto* demo = app.add_subcommand("demo", "proposed run, time-matched PTP run, report, plots");
  add_scenario(demo);
  demo->add_option("--out", o.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run_cmd) return cmd_run(o);
    if (*cmp) return cmd_compare(o);
    if (*plot) return cmd_plot(o);
    if (*demo) return cmd_demo(o);
  } catch (const ConfigError& e) {
    spdlog::error("configuration: {}", e.what());
    return kConfigError;
  } catch (const ComparisonError& e) {
    spdlog::error("{}", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kRunFault;
  }
  return kOk;
}
