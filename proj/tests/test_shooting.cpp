#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hfbl/oracles.hpp"
#include "hfbl/shooting.hpp"

using namespace hfbl;

namespace {

IvpSpec make_spec(double m, double gamma, double alpha, double t_max = 50.0) {
  IvpSpec s;
  s.params = Params{m, gamma};
  s.alpha = alpha;
  s.t_max = t_max;
  return s;
}

}  // namespace

TEST_CASE("classify: bounded concave at m=-1") {
  const Trajectory traj = integrate(make_spec(-1, -1, 1, 40));
  const Classification cls = classify(traj);
  CHECK(cls.shape == Shape::concave);
  REQUIRE(cls.boundedness.kind == BoundednessKind::bounded);
  CHECK(cls.boundedness.lambda == doctest::Approx(std::sqrt(3.0)).epsilon(1e-5));
}

TEST_CASE("classify: explicit concave at m=1") {
  const double alpha = 1.0 / (3.0 * m1_eta(0.0));
  const Trajectory traj = integrate(make_spec(1, 0, alpha, 40));
  const Classification cls = classify(traj);
  CHECK(cls.shape == Shape::concave);
  REQUIRE(cls.boundedness.kind == BoundednessKind::bounded);
  CHECK(cls.boundedness.lambda ==
        doctest::Approx(std::pow(9.0, -1.0 / 3.0)).epsilon(1e-5));
}

TEST_CASE("classify: slope loss is rejected") {
  const Trajectory traj = integrate(make_spec(-1, -1, 0.5, 40));
  CHECK(classify(traj).shape == Shape::rejected_fp_vanishes);
}

TEST_CASE("classify: unbounded family at m=-1") {
  const Trajectory traj = integrate(make_spec(-1, -1, 2, 400));
  const Classification cls = classify(traj);
  CHECK(cls.shape == Shape::concave);
  CHECK(cls.boundedness.kind == BoundednessKind::unbounded);
}

TEST_CASE("shoot_concave recovers the explicit slope at m=1") {
  for (const double g : {-1.0, 0.0, 1.0, 2.0}) {
    const ShootResult res = shoot_concave(Params{1.0, g});
    REQUIRE(res.status == ShootStatus::converged);
    const double expect = 1.0 / (3.0 * m1_eta(g));
    CHECK(res.alpha == doctest::Approx(expect).epsilon(1e-6));
    REQUIRE(res.report.lambda_est.has_value());
    const double lim = 1.0 / (9.0 * m1_eta(g) * m1_eta(g)) - g;
    CHECK(*res.report.lambda_est == doctest::Approx(lim).epsilon(1e-5));
  }
}

TEST_CASE("shoot_concave at m=-1/2 respects the slope floor") {
  const ShootResult res = shoot_concave(Params{-0.5, 0.0});
  REQUIRE(res.status == ShootStatus::converged);
  CHECK(res.alpha >= std::pow(3.0, -1.0 / 3.0) - 1e-9);
}

TEST_CASE("shoot_concave reports a bad bracket") {
  const ShootResult res = shoot_concave(Params{1.0, 0.0}, {2.0, 3.0});
  CHECK(res.status == ShootStatus::no_sign_change);
}

TEST_CASE("alpha_interval at m=-1 is the half line above -1/gamma") {
  const AlphaInterval iv = alpha_interval(Params{-1.0, -2.0});
  REQUIRE(iv.kind == IntervalKind::interval);
  CHECK(iv.lo == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(iv.hi_unbounded);

  CHECK(alpha_interval(Params{-1.0, 0.5}).kind == IntervalKind::empty);
}

TEST_CASE("alpha_interval guards and empty regimes") {
  CHECK(alpha_interval(Params{-2.0, 1.0}).kind == IntervalKind::empty);
  CHECK(alpha_interval(Params{-3.0, 1.0}).kind == IntervalKind::empty);
  CHECK(alpha_interval(Params{-1.5, 0.3}).kind == IntervalKind::empty);
  CHECK_THROWS_AS(alpha_interval(Params{0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("alpha_interval for strong suction at m=-3") {
  const AlphaInterval iv = alpha_interval(Params{-3.0, 2.0});
  REQUIRE(iv.kind == IntervalKind::interval);
  CHECK(iv.lo > 0.0);
  CHECK(iv.lo < iv.hi);
  CHECK(iv.hi <= std::sqrt(2.0 / 2.0) + 1e-6);  // alpha <= sqrt(gamma/2)

  // Interior slopes are admitted, outside slopes are not.
  const double mid = 0.5 * (iv.lo + iv.hi);
  CHECK(classify(solve_ivp(Params{-3.0, 2.0}, mid)).accepted());
  CHECK_FALSE(classify(solve_ivp(Params{-3.0, 2.0}, iv.lo * 0.8)).accepted());
  CHECK_FALSE(classify(solve_ivp(Params{-3.0, 2.0}, iv.hi * 1.2)).accepted());
}

TEST_CASE("necessary slope floor for -2 < m < -1") {
  // Accepted solutions need alpha >= -1/((m+2) gamma).
  const Params p{-1.5, -3.0};
  const AlphaInterval iv = alpha_interval(p);
  REQUIRE(iv.kind != IntervalKind::empty);
  CHECK(iv.lo >= -1.0 / ((p.m + 2.0) * p.gamma) - 1e-9);
}

TEST_CASE("uniqueness window for -1/2 < m <= 1") {
  const Params p{0.5, 0.7};
  const ShootResult res = shoot_concave(p);
  REQUIRE(res.status == ShootStatus::converged);
  // Slopes 2 percent off are rejected.
  CHECK_FALSE(classify(solve_ivp(p, res.alpha * 1.02)).accepted());
  CHECK_FALSE(classify(solve_ivp(p, res.alpha * 0.98)).accepted());
}

TEST_CASE("concave-convex band at m=2, gamma=-1") {
  const AlphaInterval iv = alpha_interval(Params{2.0, -1.0});
  REQUIRE(iv.kind == IntervalKind::interval);
  CHECK(iv.lo < iv.hi);
  const double mid = 0.5 * (iv.lo + iv.hi);
  const Classification cls = classify(solve_ivp(Params{2.0, -1.0}, mid));
  CHECK(cls.shape == Shape::concave_convex);
  CHECK(cls.boundedness.kind == BoundednessKind::bounded);
}

TEST_CASE("gamma_star_shooting stays above the hard bound at m=-3") {
  const double gs = gamma_star_shooting(-3.0);
  CHECK(gs > std::cbrt(2.0));
}

TEST_CASE("gamma_star_shooting is negative for -2 < m < -1") {
  const double gs = gamma_star_shooting(-1.5);
  CHECK(gs < 0.0);
}

TEST_CASE("gamma_star_shooting rejects other regimes") {
  CHECK_THROWS_AS(gamma_star_shooting(0.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_star_shooting(-1.0), std::invalid_argument);
}
