// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hfbl/asymptotics.hpp"
#include "hfbl/ode.hpp"
#include "hfbl/oracles.hpp"
#include "hfbl/phase.hpp"
#include "hfbl/shooting.hpp"

using namespace hfbl;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::function<void(std::ostringstream&)> run;  // throws or writes failures
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw Failure(msg);
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

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

// --------------------------------------------------------------------------
// 1. Bounded-branch oracle at m = -1.

void crit_m_neg1(std::ostringstream&) {
  for (const double g : {-0.5, -1.0, -2.0, -4.0}) {
    const AlphaInterval iv = alpha_interval(Params{-1.0, g});
    require(iv.kind == IntervalKind::interval, "family missing at gamma=" + num(g));
    require(std::abs(iv.lo - (-1.0 / g)) < 1e-6,
            "slope mismatch at gamma=" + num(g) + ": " + num(iv.lo));

    const Trajectory traj = integrate(make_spec(-1.0, g, -1.0 / g, 25.0));
    double worst = 0.0;
    for (double t = 0.0; t <= 20.0; t += 0.125) {
      const State a = traj.eval(t);
      const State b = riccati_bounded(g, t);
      worst = std::max({worst, std::abs(a.f - b.f), std::abs(a.fp - b.fp),
                        std::abs(a.fpp - b.fpp)});
    }
    require(worst < 1e-5, "pointwise gap " + num(worst) + " at gamma=" + num(g));
    require(riccati_residual(traj) < 1e-6, "first-integral residual at gamma=" + num(g));
  }
}

// 2. Explicit-solution oracle at m = 1.

void crit_m_pos1(std::ostringstream&) {
  for (const double g : {-1.0, 0.0, 1.0, 2.0}) {
    const double eta = m1_eta(g);
    const ShootResult res = shoot_concave(Params{1.0, g});
    require(res.status == ShootStatus::converged, "shot failed at gamma=" + num(g));
    require(std::abs(res.alpha - 1.0 / (3.0 * eta)) < 1e-6,
            "slope mismatch at gamma=" + num(g) + ": " + num(res.alpha));
    require(res.report.lambda_est.has_value(), "no limit estimate at gamma=" + num(g));
    const double lim = 1.0 / (9.0 * eta * eta) - g;
    require(std::abs(*res.report.lambda_est - lim) < 1e-5,
            "limit mismatch at gamma=" + num(g));
  }
}

// 3. Equilibrium classification.

void crit_equilibria(std::ostringstream&) {
  const auto th = stability_thresholds();
  for (const double t : {th[0], th[2]}) {
    const double tr = 1.5 - t;
    require(std::abs(tr * tr - 6.0) < 1e-12, "discriminant not zero at threshold");
  }
  require(equilibria(th[0] - 1e-10).second.kind == EquilibriumKind::unstable_node,
          "below first threshold");
  require(equilibria(th[0] + 1e-10).second.kind == EquilibriumKind::unstable_focus,
          "above first threshold");
  require(equilibria(1.5).second.kind == EquilibriumKind::center, "center at 3/2");
  require(equilibria(1.5 + 1e-10).second.kind == EquilibriumKind::stable_focus,
          "above 3/2");
  require(equilibria(th[2] - 1e-10).second.kind == EquilibriumKind::stable_focus,
          "below last threshold");
  require(equilibria(th[2] + 1e-10).second.kind == EquilibriumKind::stable_node,
          "above last threshold");
  for (const double m : {-4.0, -1.5, -0.7, 0.0, 2.2, 6.0}) {
    const auto [O, A] = equilibria(m);
    (void)A;
    require(std::abs(O.lambda1) == 0.0, "O first eigenvalue");
    require(std::abs(O.lambda2 - std::complex<double>(-(m + 2.0))) < 1e-14,
            "O second eigenvalue at m=" + num(m));
  }
}

// 4. Critical-gamma cross-validation.

void crit_gamma_star(std::ostringstream& os) {
  for (const double m : {-4.0, -3.0, -2.5}) {
    const double sh = gamma_star_shooting(m);
    const GammaStarResult sep = gamma_star_separatrix(m);
    const double bound = std::cbrt(2.0 / ((m + 2.0) * (m + 2.0)));
    os << " m=" << m << " shoot=" << num(sh) << " sep=" << num(sep.gamma_star);
    require(sh > bound && sep.gamma_star > bound, "below hard bound at m=" + num(m));
    require(std::abs(sh - sep.gamma_star) < 1e-4,
            "methods disagree at m=" + num(m) + ": " + num(std::abs(sh - sep.gamma_star)));
  }
  for (const double m : {-1.75, -1.5, -1.25}) {
    const double sh = gamma_star_shooting(m);
    const GammaStarResult sep = gamma_star_separatrix(m);
    os << " m=" << m << " shoot=" << num(sh) << " sep=" << num(sep.gamma_star);
    require(sh < 0.0 && sep.gamma_star < 0.0, "not negative at m=" + num(m));
    require(std::abs(sh - sep.gamma_star) < 1e-4,
            "methods disagree at m=" + num(m) + ": " + num(std::abs(sh - sep.gamma_star)));
  }
}

// 5. Regime table.

void crit_regime_table(std::ostringstream&) {
  // No solution: m = -2 over a parameter grid.
  for (double g = -5.0; g <= 5.0; g += 2.5)
    for (double a = -5.0; a <= 5.0; a += 2.5)
      require(!classify(solve_ivp(Params{-2.0, g}, a)).accepted(),
              "accepted at m=-2, gamma=" + num(g) + ", alpha=" + num(a));
  require(alpha_interval(Params{-3.0, 1.0}).kind == IntervalKind::empty,
          "m=-3 gamma=1 not empty");
  {
    const double gs = gamma_star_separatrix(-1.5).gamma_star;
    require(alpha_interval(Params{-1.5, gs + 0.5}).kind == IntervalKind::empty,
            "m=-1.5 above gamma* not empty");
  }

  // Unique solution at m = 0 and m = 1.
  for (const double m : {0.0, 1.0}) {
    for (const double g : {-1.0, 0.0, 1.0}) {
      const ShootResult res = shoot_concave(Params{m, g});
      require(res.status == ShootStatus::converged,
              "no solution found at m=" + num(m) + ", gamma=" + num(g));
      require(!classify(solve_ivp(Params{m, g}, res.alpha * 1.02)).accepted(),
              "slope above the unique solution accepted");
      require(!classify(solve_ivp(Params{m, g}, res.alpha * 0.98)).accepted(),
              "slope below the unique solution accepted");
    }
  }

  // Positive-width slope intervals.
  {
    const double gs = gamma_star_separatrix(-3.0).gamma_star;
    const AlphaInterval iv = alpha_interval(Params{-3.0, 2.0 * gs});
    require(iv.kind == IntervalKind::interval && iv.hi - iv.lo > 1e-4,
            "m=-3 interval not of positive width");
  }
  {
    const AlphaInterval iv = alpha_interval(Params{2.0, -1.0});
    require(iv.kind == IntervalKind::interval && iv.hi - iv.lo > 1e-4,
            "m=2 interval not of positive width");
  }

  // Unique bounded + unbounded family at m = -1.
  {
    const AlphaInterval iv = alpha_interval(Params{-1.0, -1.0});
    require(iv.kind == IntervalKind::interval && iv.hi_unbounded, "m=-1 family shape");
    require(std::abs(iv.lo - 1.0) < 1e-6, "m=-1 bounded slope");
    const Classification at_lo = classify(solve_ivp(Params{-1.0, -1.0}, iv.lo));
    require(at_lo.accepted() && at_lo.boundedness.kind == BoundednessKind::bounded,
            "m=-1 lower endpoint not bounded");
    ShootOptions long_opts;
    long_opts.t_max = 400.0;
    const Classification above =
        classify(solve_ivp(Params{-1.0, -1.0}, 1.5 * iv.lo, long_opts));
    require(above.accepted() && above.boundedness.kind == BoundednessKind::unbounded,
            "m=-1 interior not an unbounded solution");
  }
}

// 6. Asymptotic exponents.

void crit_asymptotics(std::ostringstream& os) {
  for (const double m : {-1.75, -1.5, -1.25}) {
    const double gs = gamma_star_separatrix(m).gamma_star;
    const double g = 2.0 * gs;  // strictly below the critical value
    const AlphaInterval iv = alpha_interval(Params{m, g});
    require(iv.kind == IntervalKind::interval, "no family at m=" + num(m));
    const double alpha = 0.5 * (iv.lo + iv.hi);
    const Trajectory traj = integrate(make_spec(m, g, alpha, 2000.0));
    const TailFit fit = tail_exponent(traj);
    const double target = unbounded_exponent(m);
    os << " m=" << m << " p=" << num(fit.exponent_est);
    require(std::abs(fit.exponent_est - target) / target < 0.05,
            "exponent off at m=" + num(m) + ": " + num(fit.exponent_est) + " vs " +
                num(target));
  }
  for (const double m : {-0.9, -0.6}) {
    const double alpha_u = 1.0 / (m + 2.0);  // gamma = -1
    const Trajectory traj = integrate(make_spec(m, -1.0, 2.0 * alpha_u, 2000.0));
    const TailFit fit = tail_exponent(traj);
    const double target = unbounded_exponent(m);
    os << " m=" << m << " p=" << num(fit.exponent_est);
    require(std::abs(fit.exponent_est - target) / target < 0.05,
            "exponent off at m=" + num(m));
  }
  {
    const Trajectory traj = integrate(make_spec(-1.0, -1.0, 2.0, 400.0));
    const TailFit fit = tail_exponent(traj);
    require(std::abs(fit.exponent_est - 0.5) / 0.5 < 0.05, "m=-1 exponent");
    const double c = std::sqrt(-2.0 * (1.0 + (-1.0) * 2.0));  // sqrt(2)
    require(std::abs(fit.coeff_est - c) / c < 0.05,
            "m=-1 coefficient: " + num(fit.coeff_est));
  }
  {
    const AlphaInterval iv = alpha_interval(Params{3.0, 0.0});
    require(iv.kind == IntervalKind::interval, "no inflected family at m=3");
    ShootOptions opts;
    opts.t_max = 200.0;
    const Trajectory traj = solve_ivp(Params{3.0, 0.0}, 0.5 * (iv.lo + iv.hi), opts);
    const DecayCheck dc = decay_check_2_over_t(traj);
    require(dc.status == DecayCheck::Status::ok, "decay check skipped unexpectedly");
    os << " m=3 relerr=" << num(dc.max_rel_err);
    require(dc.max_rel_err < 0.10, "2/t decay error " + num(dc.max_rel_err));
  }
}

// 7. Transform conjugacy.

void crit_conjugacy(std::ostringstream&) {
  std::mt19937_64 rng(0xC0FFEE);
  std::uniform_real_distribution<double> um(-3.0, 3.0), ua(0.2, 2.0);
  int done = 0;
  while (done < 20) {
    const double m = um(rng);
    const double sign = (done % 2 == 0) ? 1.0 : -1.0;
    const double g = sign * (0.7 + 0.8 * ua(rng));  // keep |f(0)| away from zero
    const double a = ua(rng) * (g < 0 ? 1.0 : 0.5);
    IvpSpec spec = make_spec(m, g, a, 4.0, 1e-11);
    const Trajectory traj = integrate(spec);
    if (traj.termination.kind == TerminationKind::blowup &&
        std::abs(traj.termination.t) < 0.5)
      continue;
    PhaseCurve curve;
    try {
      curve = blowup_transform(traj, 0.0);
    } catch (const std::invalid_argument&) {
      continue;
    }
    if (curve.points.size() < 5) continue;
    const auto& p0 = curve.points.front();
    double s_end = curve.points.back().s;
    if (std::abs(s_end) < 1e-3) continue;
    const auto orbit = integrate_plane(m, p0.u, p0.v, 0.0, s_end, 1e-11, 1e-13);
    double worst = 0.0;
    std::size_t matched = 0;
    for (const auto& pt : curve.points) {
      if ((pt.s - orbit.t_stop) * (s_end > 0 ? 1.0 : -1.0) > 0.0) break;
      const auto y = orbit.eval(pt.s);
      worst = std::max({worst, std::abs(y[0] - pt.u), std::abs(y[1] - pt.v)});
      ++matched;
    }
    if (matched < 5) continue;
    require(worst < 1e-5, "conjugacy gap " + num(worst) + " at m=" + num(m) +
                              ", gamma=" + num(g) + ", alpha=" + num(a));
    ++done;
  }
}

// 8. Integral identities on accepted solutions.

void crit_identities(std::ostringstream&) {
  struct Case {
    double m, gamma, alpha;
  };
  std::vector<Case> cases;
  cases.push_back({-1.0, -1.0, 1.0});
  cases.push_back({1.0, 0.0, 1.0 / (3.0 * m1_eta(0.0))});
  {
    const ShootResult res = shoot_concave(Params{0.0, 1.0});
    require(res.status == ShootStatus::converged, "m=0 shot failed");
    cases.push_back({0.0, 1.0, res.alpha});
  }
  {
    const ShootResult res = shoot_concave(Params{-0.7, -0.5});
    require(res.status == ShootStatus::converged, "m=-0.7 shot failed");
    cases.push_back({-0.7, -0.5, res.alpha});
  }
  for (const auto& c : cases) {
    const Trajectory traj = integrate(make_spec(c.m, c.gamma, c.alpha, 40.0, 1e-10));
    const Residuals r = residuals(traj, 0.0, traj.t_end());
    require(r.r1 < 1e-6 && r.r2 < 1e-6 && r.r3 < 1e-6,
            "residuals too large at m=" + num(c.m));
    double prev[3] = {1e99, 1e99, 1e99};
    for (const double tol : {1e-6, 1e-8, 1e-10}) {
      const Trajectory tt = integrate(make_spec(c.m, c.gamma, c.alpha, 20.0, tol));
      const Residuals rr = residuals(tt, 0.0, 20.0);
      require(rr.r1 < prev[0] && rr.r2 < prev[1] && rr.r3 < prev[2],
              "residuals not monotone in tolerance at m=" + num(c.m));
      prev[0] = rr.r1;
      prev[1] = rr.r2;
      prev[2] = rr.r3;
    }
  }
}

// 9. Randomized invariant grid (200 cases).

void crit_invariants(std::ostringstream& os) {
  std::mt19937_64 rng(0x5eed5eed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int cases = 0, accepted_count = 0;

  auto check_lemma_sign = [&](const Trajectory& traj) {
    bool locked = false;
    for (const auto& s : traj.states) {
      if (traj.params.m <= -0.5) {
        if (locked) require(s.fpp < 1e-9, "concavity lost after locking (m<=-1/2)");
        if (s.fpp <= 0.0) locked = true;
      } else {
        if (locked) require(s.fpp > -1e-9, "convexity lost after locking (m>-1/2)");
        if (s.fpp >= 0.0) locked = true;
      }
    }
  };

  auto check_accepted = [&](const Params& p, double alpha, const Trajectory& traj,
                            const Classification& cls) {
    // Ceiling bound for m > -1.
    if (p.m > -1.0 && cls.boundedness.kind == BoundednessKind::bounded) {
      const double rad = p.gamma * p.gamma + 2.0 * alpha / (p.m + 2.0);
      require(rad > -1e-12, "ceiling radicand negative on an accepted solution");
      const double ceil = std::sqrt(std::max(0.0, rad));
      for (const auto& s : traj.states) {
        require(s.f >= -p.gamma - 1e-6, "f dropped below -gamma");
        require(s.f <= ceil + 1e-6, "f exceeded the concave ceiling");
      }
    }
    // Necessary conditions.
    if (p.m > -2.0 && p.m < -1.0) {
      require(p.gamma < 0.0, "accepted with gamma >= 0 in -2<m<-1");
      require(alpha >= -1.0 / ((p.m + 2.0) * p.gamma) - 1e-7,
              "slope below the necessary floor in -2<m<-1");
    }
    if (p.m == -1.0) {
      require(p.gamma < 0.0, "accepted with gamma >= 0 at m=-1");
      require(alpha >= -1.0 / p.gamma - 1e-7, "slope below -1/gamma at m=-1");
    }
    if (p.m >= -0.5)
      require(cls.boundedness.kind == BoundednessKind::bounded,
              "unbounded acceptance with m >= -1/2");
    // Second derivative dies out: strictly for exponential tails, as a decay
    // factor for the algebraic families.
    const double T = traj.t_end();
    const double tail = std::abs(traj.eval(T).fpp);
    if (cls.reason == "far_field")
      require(tail < 1e-5, "f'' not small at the horizon");
    else
      require(tail < std::abs(traj.eval(0.5 * T).fpp) / 1.2 + 1e-12,
              "f'' not decaying at the horizon");
    ++accepted_count;
  };

  // Constructed accepted solutions across regimes.
  std::vector<std::pair<Params, double>> sol;
  for (int i = 0; i < 25; ++i) {
    const double m = -0.45 + 3.4 * u01(rng);
    const double g = -1.5 + 3.0 * u01(rng);
    const ShootResult res = shoot_concave(Params{m, g});
    if (res.status == ShootStatus::converged) sol.push_back({Params{m, g}, res.alpha});
  }
  for (int i = 0; i < 10; ++i) {
    const double m = -0.95 + 0.40 * u01(rng);
    const double g = -1.5 + 2.5 * u01(rng);
    const ShootResult res = shoot_concave(Params{m, g});
    if (res.status == ShootStatus::converged) sol.push_back({Params{m, g}, res.alpha});
  }
  for (const double g : {-0.5, -1.0, -2.0, -3.0}) {
    sol.push_back({Params{-1.0, g}, -1.0 / g});
    sol.push_back({Params{-1.0, g}, -1.5 / g});
  }
  for (const double m : {-0.9, -0.7, -0.6}) {
    sol.push_back({Params{m, -1.0}, 1.5 / (m + 2.0)});
    sol.push_back({Params{m, -1.0}, 3.0 / (m + 2.0)});
  }
  {
    const AlphaInterval iv = alpha_interval(Params{-3.0, 2.0});
    if (iv.kind == IntervalKind::interval) {
      sol.push_back({Params{-3.0, 2.0}, iv.lo});
      sol.push_back({Params{-3.0, 2.0}, iv.hi});
      sol.push_back({Params{-3.0, 2.0}, 0.5 * (iv.lo + iv.hi)});
    }
    const AlphaInterval iv2 = alpha_interval(Params{-1.5, -8.0});
    if (iv2.kind == IntervalKind::interval) {
      sol.push_back({Params{-1.5, -8.0}, iv2.lo});
      sol.push_back({Params{-1.5, -8.0}, 0.5 * (iv2.lo + iv2.hi)});
    }
    const AlphaInterval iv3 = alpha_interval(Params{2.0, -1.0});
    if (iv3.kind == IntervalKind::interval) {
      sol.push_back({Params{2.0, -1.0}, 0.5 * (iv3.lo + iv3.hi)});
      sol.push_back({Params{2.0, -1.0}, iv3.hi});
    }
  }

  ShootOptions long_opts;
  long_opts.t_max = 300.0;
  for (const auto& [p, alpha] : sol) {
    const Trajectory traj = solve_ivp(p, alpha, long_opts);
    check_lemma_sign(traj);
    const Classification cls = classify(traj);
    if (cls.accepted()) check_accepted(p, alpha, traj, cls);
    ++cases;
  }

  // Random probes; most are rejections, all must respect the sign lemma and
  // event separation.
  while (cases < 200) {
    const double m = -4.0 + 8.0 * u01(rng);
    const double g = -3.0 + 6.0 * u01(rng);
    const double a = -2.0 + 5.0 * u01(rng);
    const Trajectory traj = integrate(make_spec(m, g, a, 30.0));
    check_lemma_sign(traj);
    for (const auto& e1 : traj.events) {
      if (e1.kind != EventKind::fp_zero) continue;
      for (const auto& e2 : traj.events)
        if (e2.kind == EventKind::fpp_zero)
          require(std::abs(e1.t - e2.t) > 1e-9, "slope and curvature vanish together");
    }
    // m = -2 never admits solutions.
    if (std::abs(m + 2.0) < 1e-3) require(!classify(traj).accepted(), "accepted near m=-2");
    ++cases;
  }
  os << " cases=" << cases << " accepted=" << accepted_count;
  require(accepted_count >= 40, "too few accepted solutions exercised");
}

// 10. Horizon insensitivity.

void crit_horizon(std::ostringstream& os) {
  ShootOptions base, twice;
  twice.t_max = 2.0 * base.t_max;
  twice.probe_t_max = 2.0 * base.probe_t_max;

  {
    const double a1 = shoot_concave(Params{1.0, 0.0}, base).alpha;
    const double a2 = shoot_concave(Params{1.0, 0.0}, twice).alpha;
    os << " dalpha(m=1)=" << num(std::abs(a1 - a2));
    require(std::abs(a1 - a2) < 1e-5, "m=1 slope moved with the horizon");
  }
  {
    const AlphaInterval i1 = alpha_interval(Params{-1.0, -1.0}, base);
    const AlphaInterval i2 = alpha_interval(Params{-1.0, -1.0}, twice);
    require(std::abs(i1.lo - i2.lo) < 1e-5, "m=-1 slope moved with the horizon");
  }
  {
    const double g1 = gamma_star_shooting(-3.0, base);
    const double g2 = gamma_star_shooting(-3.0, twice);
    os << " dgs(m=-3)=" << num(std::abs(g1 - g2));
    require(std::abs(g1 - g2) < 1e-5, "gamma* (shooting) moved with the horizon");
  }
  {
    TraceOptions t1, t2;
    t2.s_span = 2.0 * t1.s_span;
    const double g1 = gamma_star_separatrix(-3.0, t1).gamma_star;
    const double g2 = gamma_star_separatrix(-3.0, t2).gamma_star;
    require(std::abs(g1 - g2) < 1e-5, "gamma* (separatrix) moved with the horizon");
  }
  {
    const Classification c1 = classify(solve_ivp(Params{-1.0, -1.0}, 1.0, base));
    const Classification c2 = classify(solve_ivp(Params{-1.0, -1.0}, 1.0, twice));
    require(c1.boundedness.kind == BoundednessKind::bounded &&
                c2.boundedness.kind == BoundednessKind::bounded,
            "m=-1 boundedness changed with the horizon");
    require(std::abs(c1.boundedness.lambda - c2.boundedness.lambda) < 1e-5,
            "m=-1 limit moved with the horizon");
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "bounded-branch oracle at m=-1", crit_m_neg1},
      {2, "explicit-solution oracle at m=1", crit_m_pos1},
      {3, "equilibrium classification", crit_equilibria},
      {4, "critical-gamma cross-validation", crit_gamma_star},
      {5, "regime table", crit_regime_table},
      {6, "asymptotic exponents", crit_asymptotics},
      {7, "transform conjugacy", crit_conjugacy},
      {8, "integral identities", crit_identities},
      {9, "invariant suite (200 randomized cases)", crit_invariants},
      {10, "horizon insensitivity", crit_horizon},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream os;
    std::string err;
    try {
      c.run(os);
    } catch (const std::exception& e) {
      err = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (err.empty()) {
      std::printf("[PASS] %2d %-42s (%6.1fs)%s\n", c.id, c.title.c_str(), secs,
                  os.str().c_str());
    } else {
      std::printf("[FAIL] %2d %-42s (%6.1fs) %s\n", c.id, c.title.c_str(), secs,
                  err.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
