#include "cablesim/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace cablesim {

namespace {

std::pair<int, int> span_of(const std::string& label) {
  const auto dash = label.find('-');
  if (dash == std::string::npos) throw ComparisonError("bad phase label " + label);
  return {std::stoi(label.substr(0, dash)), std::stoi(label.substr(dash + 1))};
}

std::set<int> boundaries(const RunLog& log) {
  std::set<int> b;
  for (const auto& p : log.summary.phases) {
    const auto [lo, hi] = span_of(p.label);
    b.insert(lo);
    b.insert(hi);
  }
  return b;
}

std::vector<std::string> consecutive(const std::set<int>& b) {
  std::vector<std::string> out;
  for (auto it = b.begin(); it != b.end() && std::next(it) != b.end(); ++it) {
    out.push_back(fmt::format("{}-{}", *it, *std::next(it)));
  }
  return out;
}

double phase_total(const PhaseEnergy& p) { return p.motor[0] + p.motor[1] + p.motor[2]; }

std::string run_name(const RunLog& log) {
  return log.header.controller == ControllerKind::kPtp ? "PTP" : "Proposed";
}

}  // namespace

ComparisonReport compare(const RunLog& baseline, const RunLog& candidate) {
  for (const RunLog* l : {&baseline, &candidate}) {
    if (l->summary.failed) {
      throw ComparisonError(
          fmt::format("{} log is incomplete: {}", run_name(*l), l->summary.failure));
    }
  }
  if (baseline.header.config_hash != candidate.header.config_hash) {
    throw ComparisonError(fmt::format("scenario mismatch: {:016x} vs {:016x}",
                                      baseline.header.config_hash,
                                      candidate.header.config_hash));
  }

  ComparisonReport r;
  r.baseline_name = run_name(baseline);
  r.candidate_name = run_name(candidate);
  if (r.baseline_name == r.candidate_name) {
    r.baseline_name += " (a)";
    r.candidate_name += " (b)";
  }

  const auto ba = boundaries(baseline);
  const auto ca = boundaries(candidate);
  std::set<int> all = ba;
  all.insert(ca.begin(), ca.end());
  std::set<int> shared;
  std::set_intersection(ba.begin(), ba.end(), ca.begin(), ca.end(),
                        std::inserter(shared, shared.begin()));
  r.columns = consecutive(all);

  for (const auto& label : consecutive(shared)) {
    const auto [lo, hi] = span_of(label);
    ColumnGroup g{label};
    auto within = [&](const std::string& l) {
      const auto [a, b] = span_of(l);
      return a >= lo && b <= hi;
    };
    for (const auto& p : baseline.summary.phases) {
      if (within(p.label)) g.baseline += phase_total(p);
    }
    for (const auto& p : candidate.summary.phases) {
      if (within(p.label)) g.candidate += phase_total(p);
    }
    r.groups.push_back(g);
  }

  for (Cable c : kAllCables) {
    const std::pair<const RunLog*, std::string> runs[] = {{&baseline, r.baseline_name},
                                                          {&candidate, r.candidate_name}};
    for (const auto& [log, name] : runs) {
      MotorRow row{name, c, log->summary.phases, log->summary.motor_energy[idx(c)]};
      r.motor_rows.push_back(row);
    }
  }

  const auto& bs = baseline.summary;
  const auto& cs = candidate.summary;
  r.baseline_brake = bs.brake_energy;
  r.candidate_brake = cs.brake_energy;
  r.baseline_motor_total = bs.motor_total;
  r.candidate_motor_total = cs.motor_total;
  r.baseline_brake_total = bs.brake_total;
  r.candidate_brake_total = cs.brake_total;
  r.baseline_total = bs.motor_total + bs.brake_total;
  r.candidate_total = cs.motor_total + cs.brake_total;
  r.savings = 1.0 - r.candidate_total / r.baseline_total;

  for (const auto& [log, name] : {std::pair{&baseline, r.baseline_name},
                                  std::pair{&candidate, r.candidate_name}}) {
    double cells = 0.0;
    for (const auto& p : log->summary.phases) cells += phase_total(p);
    if (std::abs(cells - log->summary.motor_total) > 0.005) {
      r.notes.push_back(fmt::format(
          "{}: subtask cells sum to {:.2f} J but the recorded motor total is {:.2f} J; "
          "totals use the recorded value",
          name, cells, log->summary.motor_total));
    }
    const auto& b = log->summary.brake_energy;
    const double brakes = b[0] + b[1] + b[2];
    if (std::abs(brakes - log->summary.brake_total) > 0.005) {
      r.notes.push_back(fmt::format(
          "{}: brake cells sum to {:.2f} J but the recorded brake total is {:.2f} J; "
          "totals use the recorded value",
          name, brakes, log->summary.brake_total));
    }
  }
  return r;
}

const ColumnGroup& ComparisonReport::largest_saving() const {
  return *std::max_element(groups.begin(), groups.end(),
                           [](const auto& a, const auto& b) { return a.saving() < b.saving(); });
}

namespace {

constexpr int kLabelWidth = 20;
constexpr int kCellWidth = 10;

// One table line: each cell spans the finest columns its label covers.
std::string table_line(const std::string& head, const std::vector<std::string>& columns,
                       const std::vector<std::pair<std::string, std::string>>& cells) {
  std::string out = fmt::format("{:<{}}", head, kLabelWidth);
  std::size_t col = 0;
  for (const auto& [label, text] : cells) {
    const auto [lo, hi] = span_of(label);
    std::size_t width = 0;
    while (col < columns.size()) {
      const auto [a, b] = span_of(columns[col]);
      if (a < lo) {
        out += fmt::format("{:>{}}", "", kCellWidth);
        ++col;
        continue;
      }
      if (b > hi) break;
      width += kCellWidth;
      ++col;
    }
    out += fmt::format("{:^{}}", text, static_cast<int>(width));
  }
  return out;
}

}  // namespace

std::string ComparisonReport::text() const {
  std::string out = "Subtask motor energy [J]\n";
  std::vector<std::pair<std::string, std::string>> header;
  for (const auto& c : columns) header.emplace_back(c, c);
  out += table_line("", columns, header) + fmt::format("{:>{}}\n", "sum", kCellWidth);

  for (const auto& row : motor_rows) {
    std::vector<std::pair<std::string, std::string>> cells;
    for (const auto& p : row.cells) {
      cells.emplace_back(p.label, fmt::format("{:.2f}", p.motor[idx(row.motor)]));
    }
    out += table_line(fmt::format("{:<6} {}", cable_name(row.motor), row.run), columns, cells);
    out += fmt::format("{:>{}.2f}\n", row.total, kCellWidth);
  }
  for (const auto& name : {baseline_name, candidate_name}) {
    std::vector<std::pair<std::string, std::string>> cells;
    double cum = 0.0;
    for (const auto& row : motor_rows) {
      if (row.run != name || row.motor != Cable::kTop) continue;
      for (std::size_t i = 0; i < row.cells.size(); ++i) {
        for (const auto& other : motor_rows) {
          if (other.run == name) cum += other.cells[i].motor[idx(other.motor)];
        }
        cells.emplace_back(row.cells[i].label, fmt::format("{:.2f}", cum));
      }
    }
    out += table_line(fmt::format("cumul. {}", name), columns, cells) + "\n";
  }

  out += "\nBrake energy [J]\n";
  out += fmt::format("{:<{}}{:>{}}{:>{}}{:>{}}{:>{}}\n", "", kLabelWidth, "left", kCellWidth,
                     "right", kCellWidth, "top", kCellWidth, "total", kCellWidth);
  for (const auto& [name, b, total] :
       {std::tuple{baseline_name, baseline_brake, baseline_brake_total},
        std::tuple{candidate_name, candidate_brake, candidate_brake_total}}) {
    out += fmt::format("{:<{}}{:>{}.2f}{:>{}.2f}{:>{}.2f}{:>{}.2f}\n", name, kLabelWidth,
                       b[idx(Cable::kLeft)], kCellWidth, b[idx(Cable::kRight)], kCellWidth,
                       b[idx(Cable::kTop)], kCellWidth, total, kCellWidth);
  }

  out += "\n";
  out += fmt::format("grand total {}: {:.2f} J (motors {:.2f} + brakes {:.2f})\n", baseline_name,
                     baseline_total, baseline_motor_total, baseline_brake_total);
  out += fmt::format("grand total {}: {:.2f} J (motors {:.2f} + brakes {:.2f})\n",
                     candidate_name, candidate_total, candidate_motor_total,
                     candidate_brake_total);
  if (!groups.empty()) {
    const auto& g = largest_saving();
    out += fmt::format("largest subtask saving: {} ({:.2f} J)\n", g.label, g.saving());
  }
  out += fmt::format("savings {:.1f}%\n", 100.0 * savings);
  for (const auto& n : notes) out += "note: " + n + "\n";
  return out;
}

std::string ComparisonReport::json() const {
  using nlohmann::json;
  auto per_cable = [](const PerCable<double>& v) {
    return json{{"top", v[0]}, {"left", v[1]}, {"right", v[2]}};
  };
  json rows = json::array();
  for (const auto& row : motor_rows) {
    json cells = json::object();
    for (const auto& p : row.cells) cells[p.label] = p.motor[idx(row.motor)];
    rows.push_back({{"run", row.run},
                    {"motor", cable_name(row.motor)},
                    {"cells", cells},
                    {"total", row.total}});
  }
  json groups_j = json::array();
  for (const auto& g : groups) {
    groups_j.push_back({{"label", g.label},
                        {"baseline", g.baseline},
                        {"candidate", g.candidate},
                        {"saving", g.saving()}});
  }
  json j{{"baseline", baseline_name},
         {"candidate", candidate_name},
         {"columns", columns},
         {"motor_table", rows},
         {"column_groups", groups_j},
         {"brake_table",
          {{baseline_name, per_cable(baseline_brake)}, {candidate_name, per_cable(candidate_brake)}}},
         {"totals",
          {{baseline_name,
            {{"motor", baseline_motor_total},
             {"brake", baseline_brake_total},
             {"grand", baseline_total}}},
           {candidate_name,
            {{"motor", candidate_motor_total},
             {"brake", candidate_brake_total},
             {"grand", candidate_total}}}}},
         {"savings", savings},
         {"notes", notes}};
  return j.dump(2) + "\n";
}

// SVG rendering.

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 460.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

double nice_step(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

class Canvas {
 public:
  Canvas(double x0, double x1, double y0, double y1, bool equal_aspect = false)
      : x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
    if (x1_ <= x0_) x1_ = x0_ + 1.0;
    if (y1_ <= y0_) y1_ = y0_ + 1.0;
    if (equal_aspect) {
      const double sx = (kWidth - kLeft - kRight) / (x1_ - x0_);
      const double sy = (kHeight - kTop - kBottom) / (y1_ - y0_);
      if (sx > sy) {
        x1_ = x0_ + (kWidth - kLeft - kRight) / sy;
      } else {
        y1_ = y0_ + (kHeight - kTop - kBottom) / sx;
      }
    }
  }

  double px(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * (kWidth - kLeft - kRight); }
  double py(double y) const {
    return kHeight - kBottom - (y - y0_) / (y1_ - y0_) * (kHeight - kTop - kBottom);
  }

  void begin(const std::string& title) {
    out_ = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:g}\" height=\"{:g}\" "
        "viewBox=\"0 0 {:g} {:g}\" font-family=\"sans-serif\" font-size=\"12\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<text x=\"{:g}\" y=\"22\" font-size=\"15\">{}</text>\n",
        kWidth, kHeight, kWidth, kHeight, kLeft, title);
  }

  void axes(const std::string& xlabel, const std::string& ylabel, bool yticks = true) {
    const double xl = px(x0_), xr = px(x1_), yb = py(y0_), yt = py(y1_);
    out_ += fmt::format(
        "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" "
        "stroke=\"black\"/>\n",
        xl, yt, xr - xl, yb - yt);
    const double sx = nice_step(x1_ - x0_);
    for (double v = std::ceil(x0_ / sx) * sx; v <= x1_ + 1e-9 * sx; v += sx) {
      out_ += fmt::format(
          "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>"
          "<text x=\"{0:.1f}\" y=\"{3:.1f}\" text-anchor=\"middle\">{4:g}</text>\n",
          px(v), yb, yb + 5, yb + 18, std::abs(v) < 1e-12 ? 0.0 : v);
    }
    if (yticks) {
      const double sy = nice_step(y1_ - y0_);
      for (double v = std::ceil(y0_ / sy) * sy; v <= y1_ + 1e-9 * sy; v += sy) {
        out_ += fmt::format(
            "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"black\"/>"
            "<text x=\"{3:.1f}\" y=\"{4:.1f}\" text-anchor=\"end\">{5:g}</text>\n",
            xl - 5, py(v), xl, xl - 8, py(v) + 4, std::abs(v) < 1e-12 ? 0.0 : v);
      }
    }
    out_ += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n"
        "<text x=\"18\" y=\"{:.1f}\" text-anchor=\"middle\" "
        "transform=\"rotate(-90 18 {:.1f})\">{}</text>\n",
        0.5 * (xl + xr), kHeight - 20, xlabel, 0.5 * (yt + yb), 0.5 * (yt + yb), ylabel);
  }

  void polyline(const std::vector<Vec2>& pts, const std::string& color, const std::string& dash) {
    if (pts.empty()) return;
    out_ += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{} points=\"",
                        color, dash.empty() ? "" : " stroke-dasharray=\"" + dash + "\"");
    for (const auto& p : pts) out_ += fmt::format("{:.2f},{:.2f} ", px(p.x), py(p.y));
    out_ += "\"/>\n";
  }

  void legend(int row, const std::string& text, const std::string& color,
              const std::string& dash) {
    const double x = kWidth - kRight + 12;
    const double y = kTop + 10 + 18 * row;
    out_ += fmt::format(
        "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"{}\" "
        "stroke-width=\"2\"{}/><text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n",
        x, y, x + 20, y, color, dash.empty() ? "" : " stroke-dasharray=\"" + dash + "\"", x + 25,
        y + 4, text);
  }

  void raw(const std::string& s) { out_ += s; }
  std::string finish() { return out_ + "</svg>\n"; }

 private:
  double x0_, x1_, y0_, y1_;
  std::string out_;
};

// Decimates long tick series to keep the files small.
template <typename F>
std::vector<Vec2> series(const RunLog& log, F&& f) {
  std::vector<Vec2> pts;
  const std::size_t stride = std::max<std::size_t>(1, log.ticks.size() / 2000);
  for (std::size_t i = 0; i < log.ticks.size(); i += stride) pts.push_back(f(log.ticks[i]));
  if (!log.ticks.empty() && (log.ticks.size() - 1) % stride != 0) pts.push_back(f(log.ticks.back()));
  return pts;
}

std::string dash_for(std::size_t run) { return run == 0 ? "" : "6 3"; }

}  // namespace

std::string energy_svg(const std::vector<const RunLog*>& logs) {
  double t_max = 0.0, e_max = 0.0;
  for (const auto* l : logs) {
    if (l->ticks.empty()) continue;
    t_max = std::max(t_max, l->ticks.back().time);
    e_max = std::max(e_max, l->ticks.back().total_energy);
  }
  Canvas c(0.0, t_max, 0.0, e_max * 1.05);
  c.begin("Cumulative energy");
  c.axes("time [s]", "energy [J]");
  int row = 0;
  for (std::size_t k = 0; k < logs.size(); ++k) {
    const RunLog& l = *logs[k];
    const std::string name(controller_name(l.header.controller));
    for (Cable cab : kAllCables) {
      const int i = idx(cab);
      c.polyline(series(l, [&](const TickRecord& r) { return Vec2{r.time, r.motor_energy[i]}; }),
                 kColors[i], dash_for(k));
      c.legend(row++, fmt::format("{} {}", name, cable_name(cab)), kColors[i], dash_for(k));
    }
    c.polyline(series(l, [](const TickRecord& r) { return Vec2{r.time, r.total_energy}; }),
               "black", dash_for(k));
    c.legend(row++, fmt::format("{} system", name), "black", dash_for(k));
  }
  return c.finish();
}

namespace {

// Payload position when an event fired: the state at the start of that tick.
Vec2 position_at(const RunLog& l, double t) {
  const auto it = std::lower_bound(l.ticks.begin(), l.ticks.end(), t - 1e-9,
                                   [](const TickRecord& r, double v) { return r.time < v; });
  if (it == l.ticks.end()) return l.ticks.back().p;
  return it->p;
}

}  // namespace

std::string trajectory_svg(const std::vector<const RunLog*>& logs, const RobotGeometry& g,
                           double hw) {
  const Rect ws = g.workspace;
  Canvas c(ws.x_min - 0.1, ws.x_max + 0.1, g.ground_y - 0.05,
           std::max(ws.y_max, g.anchor_top.y) + 0.05, true);
  c.begin("Payload trajectory");
  c.axes("x [m]", "y [m]");
  const Rect box = g.neighbor_box();
  c.raw(fmt::format(
      "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#dddddd\" "
      "stroke=\"gray\"/>\n",
      c.px(box.x_min), c.py(box.y_max), c.px(box.x_max) - c.px(box.x_min),
      c.py(box.y_min) - c.py(box.y_max)));
  c.raw(fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
                    "stroke=\"gray\"/>\n",
                    c.px(ws.x_min - 0.1), c.py(g.ground_y), c.px(ws.x_max + 0.1), c.py(g.ground_y)));
  for (Cable cab : kAllCables) {
    const Vec2 a = g.anchor(cab);
    c.raw(fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"black\"/>\n", c.px(a.x),
                      c.py(a.y)));
  }
  for (std::size_t k = 0; k < logs.size(); ++k) {
    const RunLog& l = *logs[k];
    if (l.ticks.empty()) continue;
    const char* color = kColors[k % 6];
    c.polyline(series(l, [](const TickRecord& r) { return r.p; }), color, dash_for(k));
    const Vec2 end = l.ticks.back().p;
    c.raw(fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
        "stroke=\"{}\"/>\n",
        c.px(end.x - hw), c.py(end.y + hw), c.px(end.x + hw) - c.px(end.x - hw),
        c.py(end.y - hw) - c.py(end.y + hw), color));
    c.legend(static_cast<int>(k), std::string(controller_name(l.header.controller)), color,
             dash_for(k));
    for (const auto& e : l.events) {
      const Vec2 p = position_at(l, e.timestamp);
      c.raw(fmt::format(
          "<g class=\"marker\"><circle cx=\"{0:.2f}\" cy=\"{1:.2f}\" r=\"8\" fill=\"white\" "
          "stroke=\"{2}\"/><text x=\"{0:.2f}\" y=\"{3:.2f}\" text-anchor=\"middle\" "
          "font-size=\"10\">{4}</text></g>\n",
          c.px(p.x), c.py(p.y), color, c.py(p.y) + 3.5, e.id));
    }
  }
  return c.finish();
}

std::string brake_svg(const std::vector<const RunLog*>& logs) {
  struct Lane {
    std::string name;
    const RunLog* log;
    int cable;
  };
  std::vector<Lane> lanes;
  std::vector<std::string> omitted;
  double t_max = 0.0;
  for (const auto* l : logs) {
    const std::string run(controller_name(l->header.controller));
    if (!l->ticks.empty()) t_max = std::max(t_max, l->ticks.back().time);
    for (Cable cab : {Cable::kTop, Cable::kRight, Cable::kLeft}) {
      const int i = idx(cab);
      if (l->summary.brake_transitions[i] == 0) {
        omitted.push_back(fmt::format("{} {}", run, cable_name(cab)));
      } else {
        lanes.push_back({fmt::format("{} {}", run, cable_name(cab)), l, i});
      }
    }
  }

  Canvas c(0.0, t_max, 0.0, std::max<double>(1.0, static_cast<double>(lanes.size())));
  c.begin("Brake energized time");
  c.axes("time [s]", "", false);
  for (std::size_t k = 0; k < lanes.size(); ++k) {
    const auto& lane = lanes[k];
    const double y_lo = static_cast<double>(lanes.size() - k - 1) + 0.2;
    const double y_hi = y_lo + 0.6;
    c.raw(fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n",
                      kLeft - 6, c.py(0.5 * (y_lo + y_hi)) + 4, lane.name));
    const auto& ticks = lane.log->ticks;
    const double dt = lane.log->header.dt;
    std::size_t i = 0;
    while (i < ticks.size()) {
      if (!ticks[i].brake_energized[lane.cable]) {
        ++i;
        continue;
      }
      const double t0 = ticks[i].time - dt;
      while (i < ticks.size() && ticks[i].brake_energized[lane.cable]) ++i;
      const double t1 = ticks[i - 1].time;
      c.raw(fmt::format(
          "<rect class=\"on\" x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" "
          "fill=\"{}\"/>\n",
          c.px(t0), c.py(y_hi), std::max(0.5, c.px(t1) - c.px(t0)), c.py(y_lo) - c.py(y_hi),
          kColors[lane.cable]));
    }
  }
  if (!omitted.empty()) {
    std::string names;
    for (std::size_t k = 0; k < omitted.size(); ++k) {
      names += (k == 0 ? "" : ", ") + omitted[k];
    }
    c.raw(fmt::format(
        "<text class=\"caption\" x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"11\">Omitted, never "
        "switched: {}</text>\n",
        kLeft, kHeight - 4, names));
  }
  return c.finish();
}

std::vector<std::filesystem::path> render_plots(const std::vector<const RunLog*>& logs,
                                                const RobotGeometry& g, double hw,
                                                const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::pair<std::string, std::string> files[] = {
      {"energy.svg", energy_svg(logs)},
      {"trajectory.svg", trajectory_svg(logs, g, hw)},
      {"brakes.svg", brake_svg(logs)},
  };
  std::vector<std::filesystem::path> out;
  for (const auto& [name, svg] : files) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    f << svg;
    out.push_back(dir / name);
  }
  return out;
}

}  // namespace cablesim
