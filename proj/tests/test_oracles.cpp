#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hfbl/ode.hpp"
#include "hfbl/oracles.hpp"
#include "hfbl/shooting.hpp"

using namespace hfbl;

namespace {

IvpSpec make_spec(double m, double gamma, double alpha, double t_max = 50.0,
                  double rel = 1e-10) {
  IvpSpec s;
  s.params = Params{m, gamma};
  s.alpha = alpha;
  s.t_max = t_max;
  s.rel_tol = rel;
  s.abs_tol = 1e-12;
  return s;
}

}  // namespace

TEST_CASE("bounded closed form at m=-1 meets the boundary data") {
  for (const double g : {-0.5, -1.0, -2.0, -4.0}) {
    const State s0 = riccati_bounded(g, 0.0);
    CHECK(s0.f == doctest::Approx(-g).epsilon(1e-12));
    CHECK(s0.fp == doctest::Approx(-1.0 / g).epsilon(1e-12));
    CHECK(s0.fpp == doctest::Approx(-1.0).epsilon(1e-12));
  }
  CHECK(riccati_limit(-1.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(riccati_bounded(0.5, 1.0), std::invalid_argument);
}

TEST_CASE("closed form satisfies the equation and its first integral") {
  for (const double g : {-0.7, -1.0, -3.0}) {
    for (double t = 0.0; t <= 25.0; t += 0.5) {
      const State s = riccati_bounded(g, t);
      // First integral with c = 0, d = -1/gamma + gamma^2/2.
      const double d = -1.0 / g + 0.5 * g * g;
      CHECK(std::abs(s.fp + 0.5 * s.f * s.f - d) < 1e-10 * (1.0 + std::abs(d)));
    }
  }
}

TEST_CASE("first-integral residual on integrated m=-1 trajectories") {
  SUBCASE("bounded branch sampled analytically") {
    // Build a fake trajectory from analytic samples: residual is exact.
    Trajectory traj;
    traj.params = Params{-1.0, -1.0};
    traj.alpha = 1.0;
    for (double t = 0.0; t <= 20.0; t += 0.1) traj.states.push_back(riccati_bounded(-1.0, t));
    CHECK(riccati_residual(traj) < 1e-12);
  }
  SUBCASE("unbounded family, integrated") {
    const Trajectory traj = integrate(make_spec(-1, -1, 2, 30));
    CHECK(riccati_residual(traj) < 1e-6);
  }
  SUBCASE("guard") {
    const Trajectory traj = integrate(make_spec(0, -1, 1, 5));
    CHECK_THROWS_AS(riccati_residual(traj), std::invalid_argument);
  }
}

TEST_CASE("cubic root for the m=1 solution") {
  for (const double g : {-2.0, -1.0, 0.0, 1.0, 2.0, 10.0}) {
    const double eta = m1_eta(g);
    CHECK(eta > 0.0);
    CHECK(std::abs(9 * eta * eta * eta + 9 * g * eta * eta - 1) < 1e-12);
  }
  CHECK(m1_eta(0.0) == doctest::Approx(std::pow(9.0, -1.0 / 3.0)).epsilon(1e-13));
}

TEST_CASE("explicit m=1 solution: boundary data, slope, limit") {
  const double eta0 = m1_eta(0.0);
  CHECK(1.0 / (3.0 * eta0) == doctest::Approx(std::pow(3.0, -1.0 / 3.0)).epsilon(1e-13));
  for (const double g : {-1.0, 0.0, 1.0, 2.0}) {
    const State s0 = explicit_m1(g, 0.0);
    CHECK(s0.f == doctest::Approx(-g).epsilon(1e-12));
    CHECK(s0.fpp == doctest::Approx(-1.0));
    const double eta = m1_eta(g);
    CHECK(s0.fp == doctest::Approx(1.0 / (3.0 * eta)).epsilon(1e-12));
    // Equation residual along samples: f''' = -3 eta f''.
    for (double t = 0.0; t <= 12.0; t += 0.4) {
      const State s = explicit_m1(g, t);
      CHECK(std::abs(-3.0 * eta * s.fpp - rhs(s, Params{1.0, g})) < 1e-10);
    }
  }
}

TEST_CASE("Blasius residual at m=-1/2 via finite differences") {
  const ShootResult res = shoot_concave(Params{-0.5, 0.0});
  REQUIRE(res.status == ShootStatus::converged);
  const Trajectory traj = solve_ivp(Params{-0.5, 0.0}, res.alpha);
  CHECK(blasius_check(traj) < 1e-6);

  const Trajectory wrong = integrate(make_spec(0, 0, 1, 5));
  CHECK_THROWS_AS(blasius_check(wrong), std::invalid_argument);
}

TEST_CASE("translation/scaling construction from the gamma=0 solution") {
  const double m = -0.75;
  const ShootResult base = shoot_concave(Params{m, 0.0});
  REQUIRE(base.status == ShootStatus::converged);
  const Trajectory fwd = solve_ivp(Params{m, 0.0}, base.alpha);

  IvpSpec back_spec = make_spec(m, 0.0, base.alpha, 10.0);
  const Trajectory bwd = integrate(back_spec, Direction::backward);

  SUBCASE("identity case") {
    const IvpSpec same = translate_scale(fwd, bwd, 0.0);
    CHECK(same.alpha == doctest::Approx(base.alpha));
    CHECK(same.params.gamma == 0.0);
  }

  SUBCASE("suction target") {
    const IvpSpec spec = translate_scale(fwd, bwd, -1.0);
    CHECK(spec.params.gamma == -1.0);
    const Trajectory traj = solve_ivp(spec.params, spec.alpha);
    CHECK(traj.states.front().f == doctest::Approx(1.0));
    const Classification cls = classify(traj);
    CHECK(cls.accepted());
    CHECK(cls.boundedness.kind == BoundednessKind::bounded);
    // Cross-check against a direct shot.
    const ShootResult direct = shoot_concave(Params{m, -1.0});
    REQUIRE(direct.status == ShootStatus::converged);
    CHECK(spec.alpha == doctest::Approx(direct.alpha).epsilon(1e-5));
  }

  SUBCASE("injection target uses the backward extension") {
    const IvpSpec spec = translate_scale(fwd, bwd, 0.8);
    CHECK(spec.params.gamma == 0.8);
    const Trajectory traj = solve_ivp(spec.params, spec.alpha);
    CHECK(traj.states.front().f == doctest::Approx(-0.8));
    CHECK(traj.states.front().fpp == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(classify(traj).accepted());
  }
}

TEST_CASE("scaling covariance of the equation") {
  // If g solves the equation, so does k g(k t + t0), any k > 0.
  const Trajectory g = integrate(make_spec(0.3, 0.0, 1.0, 10.0));
  const double k = 1.7, t0 = 0.8;
  for (double t = 0.0; t + 1e-9 < (10.0 - t0) / k; t += 0.23) {
    const State s = g.eval(k * t + t0);
    // Derivatives of the rescaled function at t.
    const State scaled{t, k * s.f, k * k * s.fp, k * k * k * s.fpp};
    const double lhs = k * k * k * k * rhs(s, g.params);  // chain rule on f'''
    CHECK(std::abs(lhs - rhs(scaled, g.params)) < 1e-9 * (1.0 + std::abs(lhs)));
  }
}
