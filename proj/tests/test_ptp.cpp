#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cablesim/ptp.hpp"
#include "support.hpp"

using namespace cablesim;
using namespace cablesim::testing;

TEST_CASE("profile integral equals the distance") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> stretch(1.0, 4.0);
  int triangular = 0;
  int stretched = 0;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const ProfileDraw dr = random_profile(rng);
    TrapezoidProfile p = trapezoid(dr.d, dr.v, dr.a);
    if (p.shape == ProfileShape::kTriangular) ++triangular;
    if (i % 2 == 1) {
      p = trapezoid(dr.d, dr.v, dr.a, stretch(rng) * p.t_total);
      ++stretched;
    }
    worst = std::max(worst, std::abs(integrate_velocity(p) - dr.d));
    REQUIRE(std::abs(p.position(p.t_total) - dr.d) <= 1e-9);
  }
  CHECK(worst <= 1e-9);
  CHECK(triangular > 1000);
  CHECK(stretched == 5000);
}

TEST_CASE("profiles respect their limits") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> stretch(1.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    const ProfileDraw dr = random_profile(rng);
    const TrapezoidProfile fast = trapezoid(dr.d, dr.v, dr.a);
    const TrapezoidProfile slow = trapezoid(dr.d, dr.v, dr.a, stretch(rng) * fast.t_total);
    for (const auto& p : {fast, slow}) {
      CHECK(p.v_peak <= dr.v * (1.0 + 1e-12));
      for (int k = 0; k <= 50; ++k) {
        const double t = p.t_total * k / 50.0;
        CHECK(std::abs(p.acceleration(t)) <= dr.a * (1.0 + 1e-9));
        CHECK(p.velocity(t) >= 0.0);
        CHECK(p.velocity(t) <= p.v_peak + 1e-12);
      }
    }
    CHECK(slow.t_total >= fast.t_total);
  }
}

TEST_CASE("minimum time against the closed form") {
  // Trapezoid: d / v + v / a. Triangle: 2 sqrt(d / a).
  CHECK(trapezoid(1.0, 0.25, 0.5).t_total == doctest::Approx(1.0 / 0.25 + 0.25 / 0.5));
  const auto tri = trapezoid(0.01, 0.25, 0.5);
  CHECK(tri.shape == ProfileShape::kTriangular);
  CHECK(tri.t_total == doctest::Approx(2.0 * std::sqrt(0.01 / 0.5)));
  CHECK(tri.t_cruise == 0.0);
}

TEST_CASE("stretching hits the requested duration") {
  const auto p = trapezoid(0.6, 0.25, 1.0, 5.0);
  CHECK(p.t_total == 5.0);
  CHECK(p.t_acc == doctest::Approx(p.v_peak / 1.0));
  CHECK(p.position(5.0) == 0.6);
  // The cruise speed is the smaller root of v^2 - a T v + a d = 0.
  CHECK(p.v_peak * p.v_peak - 1.0 * 5.0 * p.v_peak + 1.0 * 0.6 == doctest::Approx(0.0));
  // A stretched triangle becomes a slower trapezoid.
  const auto t = trapezoid(0.01, 0.25, 0.5, 1.0);
  CHECK(t.shape == ProfileShape::kTrapezoidal);
  CHECK(integrate_velocity(t) == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("stretching to the minimum is idempotent") {
  const auto p = trapezoid(0.8, 0.25, 0.5);
  const auto q = trapezoid(0.8, 0.25, 0.5, p.t_total);
  CHECK(q.v_peak == p.v_peak);
  CHECK(q.t_total == p.t_total);
}

TEST_CASE("invalid profile inputs name the constraint") {
  using C = ProfileError::Constraint;
  auto which = [](auto f) {
    try {
      f();
    } catch (const ProfileError& e) {
      return e.constraint();
    }
    FAIL("expected ProfileError");
    return C::kDistance;
  };
  CHECK(which([] { trapezoid(0.0, 1.0, 1.0); }) == C::kDistance);
  CHECK(which([] { trapezoid(1.0, -1.0, 1.0); }) == C::kVelocity);
  CHECK(which([] { trapezoid(1.0, 1.0, 0.0); }) == C::kAcceleration);
  CHECK(which([] { trapezoid(1.0, 1.0, 1.0, 0.5); }) == C::kDuration);
}

TEST_CASE("plan visits the waypoints in marker order") {
  const auto cfg = default_scenario();
  const auto& g = cfg.geometry;
  const Vec2 start = cfg.start_position();
  const Vec2 target{g.target_x, g.ground_y + cfg.payload_halfwidth};
  const double t_min = ptp_minimum_duration(g, start, target, cfg);
  const PtpPlan plan = build_ptp_plan(g, start, target, t_min + 2.0, cfg);
  CHECK(plan.markers() == std::vector<int>{1, 2, 3, 5, 6, 7});
  CHECK(plan.total_time == doctest::Approx(t_min + 2.0).epsilon(1e-12));
  CHECK(plan.position(0.0) == start);
  CHECK((plan.position(plan.total_time) - target).norm() < 1e-12);
  CHECK(ptp_phase_label(plan, 2) == "3-5");
  CHECK(plan.segments[1].to.x == doctest::Approx(2.0 * g.anchor_top.x - start.x));
  CHECK(plan.segments[1].to.y == cfg.task.h_d);

  // Transport legs share one stretch factor; the others run at minimum time.
  CHECK(plan.segments[1].stretch == doctest::Approx(plan.segments[3].stretch));
  CHECK(plan.segments[1].stretch > 1.0);
  CHECK(plan.segments[0].stretch == 1.0);

  // Position is continuous and its derivative is the velocity.
  const double h = 1e-6;
  for (double t = 0.01; t < plan.total_time; t += 0.0137) {
    const Vec2 fd = (1.0 / (2.0 * h)) * (plan.position(t + h) - plan.position(t - h));
    CHECK((fd - plan.velocity(t)).norm() < 1e-5);
  }
  // Consecutive segments meet.
  for (std::size_t i = 1; i < plan.segments.size(); ++i) {
    CHECK(plan.segments[i].from == plan.segments[i - 1].to);
    CHECK(plan.segments[i].t_start ==
          doctest::Approx(plan.segments[i - 1].t_start + plan.segments[i - 1].profile.t_total));
  }
}

TEST_CASE("plan matches any feasible reference duration") {
  const auto cfg = default_scenario();
  const auto& g = cfg.geometry;
  const Vec2 start = cfg.start_position();
  const Vec2 target{g.target_x, g.ground_y + cfg.payload_halfwidth};
  const double t_min = ptp_minimum_duration(g, start, target, cfg);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> extra(0.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    const double ref = t_min + extra(rng);
    const PtpPlan plan = build_ptp_plan(g, start, target, ref, cfg);
    CHECK(std::abs(plan.total_time - ref) < cfg.dt);
  }
  CHECK_THROWS_AS(build_ptp_plan(g, start, target, 0.9 * t_min, cfg), ProfileError);
}

TEST_CASE("tracking keeps every brake open and corrects drift") {
  const auto cfg = default_scenario();
  const auto& g = cfg.geometry;
  const Vec2 start = cfg.start_position();
  const Vec2 target{g.target_x, g.ground_y + cfg.payload_halfwidth};
  const PtpPlan plan =
      build_ptp_plan(g, start, target, ptp_minimum_duration(g, start, target, cfg), cfg);
  SensorFrame f;
  f.fresh = true;
  f.position = plan.position(1.0) + Vec2{0.0, -0.01};
  const auto cmd = ptp_tracking_cmd(plan, 1.0, f, cfg);
  CHECK(cmd.brake_energize == PerCable<bool>{true, true, true});
  // Below the reference on the lift leg: the commanded climb is faster.
  const auto geom = cable_geometry(f.position, g);
  const CableRates r{cmd[Cable::kTop].setpoint * cfg.motor(Cable::kTop).cable_per_rad(),
                     cmd[Cable::kLeft].setpoint * cfg.motor(Cable::kLeft).cable_per_rad()};
  const Vec2 v = forward_velocity(geom.angle[0], geom.angle[1], r);
  CHECK(v.y == doctest::Approx(plan.velocity(1.0).y + cfg.ptp.kp * 0.01));
}
