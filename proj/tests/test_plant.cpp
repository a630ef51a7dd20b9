#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cablesim/plant.hpp"
#include "support.hpp"

using namespace cablesim;
using namespace cablesim::testing;

TEST_CASE("initial state rests on the ground with taut cables") {
  const auto cfg = default_scenario();
  const PlantState s = initial_plant_state(cfg);
  CHECK(s.p == cfg.start_position());
  CHECK(s.mode == DynMode::kFullyConstrained);
  for (Cable c : kAllCables) {
    CHECK(s.length[idx(c)] == doctest::Approx((s.p - cfg.geometry.anchor(c)).norm()));
  }
}

TEST_CASE("static tensions balance the weight") {
  const auto cfg = default_scenario();
  const auto& g = cfg.geometry;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (int i = 0; i < 500; ++i) {
    const Vec2 p{u(rng), u(rng) * 0.8};
    const Cable side = side_cable(active_side(p, g));
    const auto [tt, ts] = static_tensions(p, side, g, cfg.payload_mass);
    const Vec2 ut = (1.0 / (g.anchor_top - p).norm()) * (g.anchor_top - p);
    const Vec2 us = (1.0 / (g.anchor(side) - p).norm()) * (g.anchor(side) - p);
    const Vec2 net = tt * ut + ts * us + Vec2{0.0, -cfg.payload_mass * kGravity};
    CHECK(net.norm() < 1e-9);
  }
}

TEST_CASE("mode classification") {
  auto cfg = default_scenario();
  PlantState s = initial_plant_state(cfg);
  PerCable<MotorState> motors{};
  PerCable<BrakeState> brakes{};  // all engaged
  CHECK(classify_mode(s, brakes, motors, cfg.geometry) == DynMode::kFullyConstrained);
  brakes[idx(Cable::kLeft)] = {.energized = true, .engaged = false};
  brakes[idx(Cable::kRight)] = {.energized = true, .engaged = false};
  CHECK(classify_mode(s, brakes, motors, cfg.geometry) == DynMode::kPendulum);
  motors[idx(Cable::kLeft)].mode = MotorMode::kVelocity;
  CHECK(classify_mode(s, brakes, motors, cfg.geometry) == DynMode::kFullyConstrained);
  brakes[idx(Cable::kTop)] = {.energized = true, .engaged = false};
  CHECK(classify_mode(s, brakes, motors, cfg.geometry) == DynMode::kFreeFall);
}

TEST_CASE("undamped swing conserves mechanical energy") {
  FreeSwing s(1.0, deg(10.0), 0.0);
  const double half = small_amplitude_half_period(1.0);
  double e_prev = s.energy();
  double worst = 0.0;
  int k = 1;
  while (s.state.time < 10.0 * half) {
    s.step();
    REQUIRE(s.state.mode == DynMode::kPendulum);
    if (s.state.time >= k * half - 1e-9) {
      worst = std::max(worst, std::abs(s.energy() - e_prev) / e_prev);
      e_prev = s.energy();
      ++k;
    }
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("swing stays on the cable circle") {
  FreeSwing s(0.9, deg(15.0), 0.05);
  for (int k = 0; k < 3000; ++k) {
    s.step();
    CHECK((s.state.p - s.cfg.geometry.anchor_top).norm() == doctest::Approx(0.9).epsilon(1e-12));
  }
}

TEST_CASE("damping removes energy") {
  FreeSwing s(1.0, deg(10.0), 0.5);
  const double e0 = s.energy();
  for (int k = 0; k < 2000; ++k) s.step();
  CHECK(s.energy() < e0);
}

TEST_CASE("small-amplitude period") {
  // Zero crossings of x relative to the anchor, spaced by the half period.
  FreeSwing s(1.0, deg(3.0), 0.0);
  const double ax = s.cfg.geometry.anchor_top.x;
  std::vector<double> crossings;
  double prev = s.state.p.x - ax;
  while (crossings.size() < 5) {
    s.step();
    const double cur = s.state.p.x - ax;
    if ((prev > 0.0) != (cur > 0.0)) {
      crossings.push_back(s.state.time - s.cfg.dt * cur / (cur - prev));
    }
    prev = cur;
  }
  const double half = (crossings.back() - crossings.front()) / 4.0;
  // Amplitude correction 1 + phi0^2 / 16.
  const double expect = small_amplitude_half_period(1.0) * (1.0 + deg(3.0) * deg(3.0) / 16.0);
  CHECK(half == doctest::Approx(expect).epsilon(2e-4));
}

TEST_CASE("free fall follows the parabola") {
  FreeSwing s(0.6, 0.0, 0.0);
  s.brakes[idx(Cable::kTop)] = {.energized = true, .engaged = false};
  const double y0 = s.state.p.y;
  const int n = 200;
  for (int k = 0; k < n; ++k) s.step();
  REQUIRE(s.state.mode == DynMode::kFreeFall);
  const double t = n * s.cfg.dt;
  // Semi-implicit Euler: y0 - g dt^2 n(n+1)/2.
  CHECK(s.state.p.y == doctest::Approx(y0 - kGravity * s.cfg.dt * s.cfg.dt * n * (n + 1) / 2.0));
  CHECK(s.state.p.y == doctest::Approx(y0 - 0.5 * kGravity * t * t).epsilon(0.01));
}

TEST_CASE("fully constrained motion follows the commanded cable rates") {
  auto cfg = default_scenario();
  PlantState s = initial_plant_state(cfg);
  PerCable<MotorState> motors{};
  PerCable<BrakeState> brakes{};
  for (Cable c : {Cable::kTop, Cable::kLeft}) {
    brakes[idx(c)] = {.energized = true, .engaged = false};
    motors[idx(c)].mode = MotorMode::kVelocity;
  }
  // Reel both cables in at constant rates.
  motors[idx(Cable::kTop)].shaft_speed = -0.05 / cfg.motor(Cable::kTop).cable_per_rad();
  motors[idx(Cable::kLeft)].shaft_speed = -0.03 / cfg.motor(Cable::kLeft).cable_per_rad();
  const PerCable<double> l0 = s.length;
  for (int k = 0; k < 1000; ++k) {
    s = plant_step(s, motors, brakes, cfg).state;
    REQUIRE(s.mode == DynMode::kFullyConstrained);
  }
  CHECK(s.length[0] == doctest::Approx(l0[0] - 0.05));
  CHECK(s.length[1] == doctest::Approx(l0[1] - 0.03));
  const auto q = circle_intersection_lower(cfg.geometry.anchor_top, s.length[0],
                                           cfg.geometry.anchor_left, s.length[1]);
  REQUIRE(q);
  CHECK((*q - s.p).norm() < 1e-12);
  CHECK(s.tension[0] > 0.0);
  CHECK(s.tension[1] > 0.0);
}

TEST_CASE("ground contact is inelastic and reported as an impulse") {
  FreeSwing s(1.0, 0.0, 0.0);
  s.brakes[idx(Cable::kTop)] = {.energized = true, .engaged = false};
  s.state.p = {0.8, 0.15};
  double impulse = 0.0;
  double v_before = 0.0;
  for (int k = 0; k < 200; ++k) {
    v_before = s.state.v.y;
    s.step();
    if (s.state.contact_impulse > 0.0) {
      impulse = s.state.contact_impulse;
      break;
    }
  }
  CHECK(s.state.ground_contact);
  CHECK(s.state.p.y == doctest::Approx(s.cfg.payload_halfwidth));
  CHECK(s.state.v.y == 0.0);
  CHECK(impulse == doctest::Approx(s.cfg.payload_mass * (-(v_before - kGravity * s.cfg.dt))));
}

TEST_CASE("touchdown while sliding down the neighbor box still registers") {
  // Pendulum pressed against the right face of the box while the top cable
  // pays out: the landing impulse must reflect the real descent speed.
  auto cfg = default_scenario();
  cfg.sensor_noise_sigma = 0.0;
  const Rect box = cfg.geometry.neighbor_box();
  PlantState s;
  s.p = {box.x_max + cfg.payload_halfwidth, cfg.payload_halfwidth + 0.01};
  for (Cable c : kAllCables) {
    s.length[idx(c)] = (s.p - cfg.geometry.anchor(c)).norm();
    s.taut[idx(c)] = true;
  }
  s.mode = DynMode::kPendulum;
  PerCable<MotorState> motors{};
  PerCable<BrakeState> brakes{};
  for (Cable c : kAllCables) brakes[idx(c)] = {.energized = true, .engaged = false};
  motors[idx(Cable::kTop)].mode = MotorMode::kVelocity;
  const double payout = 0.04;
  motors[idx(Cable::kTop)].shaft_speed = payout / cfg.motor(Cable::kTop).cable_per_rad();
  double impulse = 0.0;
  for (int k = 0; k < 1000 && impulse == 0.0; ++k) {
    s = plant_step(s, motors, brakes, cfg).state;
    if (s.ground_contact) impulse = s.contact_impulse;
  }
  REQUIRE(impulse > 0.0);
  const double cos_phi = (cfg.geometry.anchor_top.y - s.p.y) / s.length[0];
  CHECK(impulse >= 0.8 * cfg.payload_mass * payout * cos_phi);
}

TEST_CASE("paying out keeps the radial velocity through round-off snaps") {
  auto cfg = default_scenario();
  const Vec2 a = cfg.geometry.anchor_top;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ang(-0.35, 0.35), len(0.5, 0.95);
  const double payout = 0.11;
  for (int trial = 0; trial < 200; ++trial) {
    const double phi = ang(rng);
    const double l = len(rng);
    PlantState s;
    s.p = {a.x + l * std::sin(phi), a.y - l * std::cos(phi)};
    const Vec2 radial{std::sin(phi), -std::cos(phi)};
    s.v = payout * radial;
    for (Cable c : kAllCables) {
      s.length[idx(c)] = (s.p - cfg.geometry.anchor(c)).norm() + (c == Cable::kTop ? 0.0 : 0.05);
      s.taut[idx(c)] = c == Cable::kTop;
    }
    s.mode = DynMode::kPendulum;
    PerCable<MotorState> motors{};
    PerCable<BrakeState> brakes{};
    for (Cable c : kAllCables) brakes[idx(c)] = {.energized = true, .engaged = false};
    motors[idx(Cable::kTop)].mode = MotorMode::kVelocity;
    motors[idx(Cable::kTop)].shaft_speed = payout / cfg.motor(Cable::kTop).cable_per_rad();
    for (int k = 0; k < 50; ++k) {
      s = plant_step(s, motors, brakes, cfg).state;
      const Vec2 u = (1.0 / (s.p - a).norm()) * (s.p - a);
      REQUIRE(dot(s.v, u) == doctest::Approx(payout).epsilon(1e-6));
    }
  }
}

TEST_CASE("impact current surrogate") {
  const auto cfg = default_scenario();
  const auto& m = cfg.motor(Cable::kTop);
  const double i = impact_current(0.5, 0.001, m);
  CHECK(i * m.kt == doctest::Approx(0.5 / 0.001 * m.drum_radius * m.gear_ratio));
}

TEST_CASE("camera runs at its rate with a zero-order hold") {
  auto cfg = default_scenario();
  PlantState s = initial_plant_state(cfg);
  PerCable<MotorState> motors{};
  PerCable<BrakeState> brakes{};
  SensorSampler sampler(cfg.sensor_rate, 0.0, 1);
  int fresh = 0;
  Vec2 held;
  for (int k = 0; k < 1000; ++k) {
    s.time = k * cfg.dt;
    s.p = {0.2 + k * 1e-4, 0.1};
    const SensorFrame f = sampler.sample(s, motors, brakes, cfg);
    if (f.fresh) {
      ++fresh;
      CHECK(f.position == s.p);
      held = f.position;
    } else {
      CHECK(f.position == held);
      CHECK(s.time - f.sample_time < 1.0 / cfg.sensor_rate + 1e-12);
    }
  }
  CHECK(fresh == 150);
}

TEST_CASE("camera noise is seeded") {
  auto cfg = default_scenario();
  PlantState s = initial_plant_state(cfg);
  PerCable<MotorState> motors{};
  PerCable<BrakeState> brakes{};
  SensorSampler a(cfg.sensor_rate, 0.001, 42), b(cfg.sensor_rate, 0.001, 42),
      c(cfg.sensor_rate, 0.001, 43);
  double sq = 0.0;
  bool differs = false;
  for (int k = 0; k < 3000; ++k) {
    s.time = k * cfg.dt;
    const auto fa = a.sample(s, motors, brakes, cfg);
    const auto fb = b.sample(s, motors, brakes, cfg);
    const auto fc = c.sample(s, motors, brakes, cfg);
    CHECK(fa.position == fb.position);
    differs = differs || !(fa.position == fc.position);
    if (fa.fresh) sq += (fa.position.x - s.p.x) * (fa.position.x - s.p.x);
  }
  CHECK(differs);
  CHECK(std::sqrt(sq / 450.0) == doctest::Approx(0.001).epsilon(0.15));
}
