#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cablesim/controllers.hpp"

using namespace cablesim;

namespace {

SensorFrame frame_at(Vec2 p, double t = 0.0) {
  SensorFrame f;
  f.position = p;
  f.fresh = true;
  f.sample_time = t;
  f.timestamp = t;
  f.brake_engaged = {false, false, false};
  return f;
}

// Cartesian velocity the two velocity setpoints of a command would produce.
Vec2 realized(const ActuatorCommand& cmd, Vec2 p, const ScenarioConfig& cfg) {
  const auto geom = cable_geometry(p, cfg.geometry);
  const Cable side = side_cable(active_side(p, cfg.geometry));
  const CableRates r{cmd[Cable::kTop].setpoint * cfg.motor(Cable::kTop).cable_per_rad(),
                     cmd[side].setpoint * cfg.motor(side).cable_per_rad()};
  return forward_velocity(geom.angle[idx(Cable::kTop)], geom.angle[idx(side)], r);
}

}  // namespace

TEST_CASE("cartesian command drives top and the active side") {
  const auto cfg = default_scenario();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> px(0.1, 0.9), py(0.1, 0.8), vel(-0.05, 0.05);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 p{px(rng), py(rng)};
    const Vec2 v{vel(rng), vel(rng)};
    const auto cmd = cartesian_velocity_cmd(v, frame_at(p), cfg);
    const Cable side = side_cable(active_side(p, cfg.geometry));
    const Cable idle = side_cable(other_side(active_side(p, cfg.geometry)));
    CHECK(cmd[Cable::kTop].mode == MotorMode::kVelocity);
    CHECK(cmd[side].mode == MotorMode::kVelocity);
    CHECK(cmd[idle].mode != MotorMode::kVelocity);
    CHECK_FALSE(cmd.speed_scaled);
    CHECK((realized(cmd, p, cfg) - v).norm() < 1e-12);
  }
}

TEST_CASE("idle cable keeper only while it shortens") {
  const auto cfg = default_scenario();
  const Vec2 p{0.3, 0.4};
  const auto geom = cable_geometry(p, cfg.geometry);
  const Vec2 toward_right = -1.0 * geom.unit(Cable::kRight);  // shortens the right cable
  auto cmd = cartesian_velocity_cmd(0.05 * toward_right, frame_at(p), cfg);
  CHECK(cmd[Cable::kRight] == MotorCommand::current(-cfg.task.keeper_current));
  cmd = cartesian_velocity_cmd(-0.05 * toward_right, frame_at(p), cfg);
  CHECK(cmd[Cable::kRight] == MotorCommand::passive());
  cmd = cartesian_velocity_cmd(0.05 * toward_right, frame_at(p), cfg,
                               {.keep_inactive_taut = false});
  CHECK(cmd[Cable::kRight] == MotorCommand::passive());
}

TEST_CASE("over-speed requests scale uniformly") {
  const auto cfg = default_scenario();
  const Vec2 p{0.3, 0.4};
  const Vec2 v{3.0, 2.0};
  const auto cmd = cartesian_velocity_cmd(v, frame_at(p), cfg);
  REQUIRE(cmd.speed_scaled);
  CHECK(cmd.speed_scale < 1.0);
  const Vec2 got = realized(cmd, p, cfg);
  CHECK((got - cmd.speed_scale * v).norm() < 1e-12);
  const double w_top = std::abs(cmd[Cable::kTop].setpoint);
  const double w_side = std::abs(cmd[Cable::kLeft].setpoint);
  CHECK(std::max(w_top / cfg.motor(Cable::kTop).max_speed,
                 w_side / cfg.motor(Cable::kLeft).max_speed) == doctest::Approx(1.0));
}

TEST_CASE("velocity setpoints are zeroed behind an engaged brake") {
  const auto cfg = default_scenario();
  SensorFrame f = frame_at({0.3, 0.4});
  f.brake_engaged[idx(Cable::kTop)] = true;
  const auto cmd = cartesian_velocity_cmd({0.0, 0.05}, f, cfg);
  CHECK(cmd[Cable::kTop] == MotorCommand::velocity(0.0));
  CHECK(cmd[Cable::kLeft].setpoint != 0.0);
}

TEST_CASE("velocity estimator recovers a straight line") {
  VelocityEstimator est(10);
  CHECK_FALSE(est.ready());
  const Vec2 v{0.12, -0.03};
  for (int k = 0; k < 30; ++k) {
    const double t = k / 150.0;
    est.push(frame_at(Vec2{0.2, 0.5} + t * v, t));
  }
  CHECK(est.ready());
  CHECK((est.velocity() - v).norm() < 1e-12);
}

TEST_CASE("velocity estimator ignores held samples") {
  VelocityEstimator est(5);
  SensorFrame f = frame_at({0.0, 0.0}, 0.0);
  est.push(f);
  f.fresh = false;
  f.position = {1.0, 1.0};
  est.push(f);
  est.push(f);
  CHECK_FALSE(est.ready());
}

TEST_CASE("encoder rate over the window") {
  EncoderRate r(10);
  for (int k = 0; k <= 20; ++k) {
    SensorFrame f = frame_at({0, 0}, k * 0.001);
    f.encoder_length = {1.0 + 0.02 * k * 0.001, 1.0, 1.0 - 0.05 * k * 0.001};
    r.push(f);
  }
  CHECK(r.rate(Cable::kTop) == doctest::Approx(0.02));
  CHECK(r.rate(Cable::kLeft) == 0.0);
  CHECK(r.rate(Cable::kRight) == doctest::Approx(-0.05));
}

TEST_CASE("swing releases the natural dynamics") {
  const auto cfg = default_scenario();
  SensorFrame f = frame_at({0.2, 0.45});
  auto cmd = swing_cmd(f, cfg);
  CHECK_FALSE(cmd.brake_energize[idx(Cable::kTop)]);
  CHECK(cmd[Cable::kTop] == MotorCommand::velocity(0.0));
  CHECK(cmd[Cable::kLeft] == MotorCommand::passive());
  CHECK(cmd[Cable::kRight] == MotorCommand::current(-cfg.task.keeper_current));
  f.brake_engaged[idx(Cable::kTop)] = true;
  cmd = swing_cmd(f, cfg);
  CHECK(cmd[Cable::kTop] == MotorCommand::passive());
}

TEST_CASE("hold closes the arriving brake") {
  const auto cfg = default_scenario();
  SensorFrame f = frame_at({0.8, 0.45});
  f.brake_engaged[idx(Cable::kTop)] = true;
  const auto cmd = hold_cmd(f, cfg);
  CHECK_FALSE(cmd.brake_energize[idx(Cable::kRight)]);
  CHECK_FALSE(cmd.brake_energize[idx(Cable::kTop)]);
  CHECK(cmd[Cable::kTop] == MotorCommand::passive());
}

TEST_CASE("drop latch has hysteresis") {
  const auto cfg = default_scenario();
  const SensorFrame f = frame_at({0.8, 0.45});
  BrakeLatch latch;
  const double lo = cfg.task.drop_v_lo;
  const double hi = cfg.task.drop_v_hi;
  auto arrive_open = [&](double speed) {
    return drop_cmd(f, speed, latch, cfg).brake_energize[idx(Cable::kRight)];
  };
  CHECK_FALSE(arrive_open(0.5 * (lo + hi)));
  CHECK(arrive_open(0.5 * lo));
  CHECK(arrive_open(0.5 * (lo + hi)));
  CHECK_FALSE(arrive_open(1.1 * hi));
  CHECK_FALSE(arrive_open(0.5 * (lo + hi)));
  const auto cmd = drop_cmd(f, 0.0, latch, cfg);
  CHECK(cmd[Cable::kTop].mode == MotorMode::kVelocity);
  CHECK(cmd[Cable::kTop].setpoint * cfg.motor(Cable::kTop).cable_per_rad() ==
        doctest::Approx(cfg.task.drop_payout_speed));
}

TEST_CASE("fine positioning never drives the departed side") {
  const auto cfg = default_scenario();
  const SensorFrame f = frame_at({0.75, 0.3});
  for (auto sub : {FineSubphase::kLift, FineSubphase::kSwing, FineSubphase::kDrop}) {
    BrakeLatch latch;
    const auto cmd = fine_positioning_cmd(sub, f, 0.0, latch, cfg);
    CHECK(cmd[Cable::kLeft].mode != MotorMode::kVelocity);
    CHECK(cmd[Cable::kLeft].setpoint == 0.0);
    CHECK_FALSE(cmd.brake_energize[idx(Cable::kLeft)]);
  }
  BrakeLatch latch;
  const auto lift = fine_positioning_cmd(FineSubphase::kLift, f, 0.0, latch, cfg);
  CHECK((realized(lift, f.position, cfg) - Vec2{0.0, cfg.task.fine_speed}).norm() < 1e-12);
  const auto drop = fine_positioning_cmd(FineSubphase::kDrop, f, 0.0, latch, cfg);
  CHECK((realized(drop, f.position, cfg) - Vec2{0.0, -cfg.task.fine_speed}).norm() < 1e-12);
}

TEST_CASE("fine swing pulses the arriving brake on cable speed") {
  const auto cfg = default_scenario();
  const SensorFrame f = frame_at({0.75, 0.3});
  const double v = cfg.task.fine_speed;
  BrakeLatch latch;
  auto open = [&](double speed) {
    return fine_positioning_cmd(FineSubphase::kSwing, f, speed, latch, cfg)
        .brake_energize[idx(Cable::kRight)];
  };
  CHECK(open(0.0));
  CHECK(open(0.5 * v));
  CHECK_FALSE(open(-1.5 * v));
  CHECK_FALSE(open(0.5 * v));
  CHECK(open(0.1 * v));
}

TEST_CASE("arriving side follows the target") {
  auto cfg = default_scenario();
  CHECK(arriving_side(cfg) == Side::kRight);
  cfg.geometry.target_x = 0.3;
  CHECK(arriving_side(cfg) == Side::kLeft);
}
