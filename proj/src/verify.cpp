#include "hfbl/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "hfbl/asymptotics.hpp"
#include "hfbl/ode.hpp"
#include "hfbl/oracles.hpp"
#include "hfbl/phase.hpp"
#include "hfbl/shooting.hpp"
#include "internal.hpp"

namespace hfbl {

namespace {

using Clock = std::chrono::steady_clock;

struct Fail {
  std::ostringstream os;
  bool failed = false;

  template <class T>
  void expect(bool cond, const T& msg) {
    if (!cond) {
      if (failed) os << "; ";
      os << msg;
      failed = true;
    }
  }
};

ShootOptions scaled_opts(const VerifyOptions& v) {
  ShootOptions o;
  o.rel_tol = std::max(1e-13, o.rel_tol * v.tol_scale);
  o.abs_tol = std::max(1e-15, o.abs_tol * v.tol_scale);
  return o;
}

IvpSpec spec_for(double m, double gamma, double alpha, double t_max, double rel_tol) {
  IvpSpec s;
  s.params = Params{m, gamma};
  s.alpha = alpha;
  s.t_max = t_max;
  s.rel_tol = rel_tol;
  s.abs_tol = rel_tol * 1e-2;
  return s;
}

// ---------------------------------------------------------------------------

CheckResult check_rhs_values(const VerifyOptions&) {
  Fail f;
  f.expect(rhs(State{0, 0, 0, 0}, Params{4.2, 0}) == 0.0, "zero state");
  f.expect(std::abs(rhs(State{0, 1, 1, 1}, Params{1, 0}) - 0.0) < 1e-15, "m=1 unit state");
  f.expect(std::abs(rhs(State{0, 5, 2, 7}, Params{-2, 0}) - (-12.0)) < 1e-12,
           "m=-2 state");
  return {"ode.rhs_values", !f.failed, f.os.str(), 0.0};
}

CheckResult check_sign_propagation(const VerifyOptions& v) {
  std::mt19937_64 rng(v.seed);
  std::uniform_real_distribution<double> um(-3.0, 3.0), ug(-2.0, 2.0), ua(0.05, 3.0);
  Fail f;
  for (int k = 0; k < 60; ++k) {
    const double m = um(rng), g = ug(rng), a = ua(rng);
    const Trajectory traj = integrate(spec_for(m, g, a, 20.0, 1e-10));
    // Once f'' reaches the invariant half-line it stays there.
    bool locked = false;
    for (const auto& s : traj.states) {
      if (m <= -0.5) {
        if (locked && !(s.fpp < 1e-9)) {
          f.expect(false, "fpp returned above zero (m <= -1/2)");
          break;
        }
        if (s.fpp <= 0.0) locked = true;
      } else {
        if (locked && !(s.fpp > -1e-9)) {
          f.expect(false, "fpp returned below zero (m > -1/2)");
          break;
        }
        if (s.fpp >= 0.0) locked = true;
      }
    }
    if (f.failed) break;
  }
  return {"ode.sign_propagation", !f.failed, f.os.str(), 0.0};
}

CheckResult check_no_simultaneous_vanish(const VerifyOptions& v) {
  std::mt19937_64 rng(v.seed + 1);
  std::uniform_real_distribution<double> um(-3.0, 3.0), ug(-2.0, 2.0), ua(-1.0, 3.0);
  Fail f;
  for (int k = 0; k < 60; ++k) {
    const double m = um(rng), g = ug(rng), a = ua(rng);
    const Trajectory traj = integrate(spec_for(m, g, a, 20.0, 1e-10));
    for (const auto& e1 : traj.events) {
      if (e1.kind != EventKind::fp_zero) continue;
      for (const auto& e2 : traj.events) {
        if (e2.kind != EventKind::fpp_zero) continue;
        f.expect(std::abs(e1.t - e2.t) > 1e-9,
                 "fp and fpp crossings coincide");
      }
    }
    if (f.failed) break;
  }
  return {"ode.no_simultaneous_vanish", !f.failed, f.os.str(), 0.0};
}

CheckResult check_residual_convergence(const VerifyOptions&) {
  // Residuals of the integral identities must shrink as the tolerance
  // tightens, on a fixed interval of a fixed solution.
  Fail f;
  const double alpha = 1.0 / (3.0 * m1_eta(0.0));
  double prev[3] = {1e99, 1e99, 1e99};
  for (const double tol : {1e-5, 1e-7, 1e-9}) {
    const Trajectory traj = integrate(spec_for(1.0, 0.0, alpha, 20.0, tol));
    const Residuals r = residuals(traj, 0.0, 20.0);
    f.expect(r.r1 < prev[0] && r.r2 < prev[1] && r.r3 < prev[2],
             "residuals did not decrease at tol");
    prev[0] = r.r1;
    prev[1] = r.r2;
    prev[2] = r.r3;
  }
  f.expect(prev[0] < 1e-6 && prev[1] < 1e-6 && prev[2] < 1e-6, "final residuals too big");
  return {"ode.residual_convergence", !f.failed, f.os.str(), 0.0};
}

CheckResult check_order(const VerifyOptions&) {
  // Global error against the closed form at m = -1 must fall monotonically
  // with the tolerance.
  Fail f;
  double prev = 1e99;
  for (const double tol : {1e-5, 1e-7, 1e-9, 1e-11}) {
    const Trajectory traj = integrate(spec_for(-1.0, -1.0, 1.0, 10.0, tol));
    const State num = traj.eval(10.0);
    const State ex = riccati_bounded(-1.0, 10.0);
    const double err = std::abs(num.f - ex.f) + std::abs(num.fp - ex.fp) +
                       std::abs(num.fpp - ex.fpp);
    f.expect(err < prev, "error did not decrease");
    prev = err;
  }
  f.expect(prev < 1e-9, "tightest error too big");
  return {"ode.order_check", !f.failed, f.os.str(), 0.0};
}

CheckResult check_riccati(const VerifyOptions& v) {
  Fail f;
  for (const double g : {-0.5, -1.0, -2.0, -4.0}) {
    const State s0 = riccati_bounded(g, 0.0);
    f.expect(std::abs(s0.f + g) < 1e-12, "f(0) != -gamma");
    f.expect(std::abs(s0.fp + 1.0 / g) < 1e-12, "f'(0) != -1/gamma");
    f.expect(std::abs(s0.fpp + 1.0) < 1e-12, "f''(0) != -1");
  }
  f.expect(std::abs(riccati_limit(-1.0) - std::sqrt(3.0)) < 1e-14, "limit at gamma=-1");

  // The first integral holds along the whole unbounded family as well.
  const auto opts = scaled_opts(v);
  const Trajectory traj = integrate(spec_for(-1.0, -1.0, 2.0, 30.0, opts.rel_tol));
  f.expect(riccati_residual(traj) < 1e-6, "integrated first-integral residual");

  bool threw = false;
  try {
    riccati_residual(integrate(spec_for(0.0, -1.0, 1.0, 1.0, 1e-10)));
  } catch (const std::invalid_argument&) {
    threw = true;
  }
  f.expect(threw, "guard on m != -1 missing");
  return {"oracles.riccati", !f.failed, f.os.str(), 0.0};
}

CheckResult check_m1_explicit(const VerifyOptions&) {
  Fail f;
  for (const double g : {-1.0, 0.0, 1.0, 2.0}) {
    const double eta = m1_eta(g);
    f.expect(std::abs(9 * eta * eta * eta + 9 * g * eta * eta - 1.0) < 1e-12,
             "cubic root residual");
    const State s0 = explicit_m1(g, 0.0);
    f.expect(std::abs(s0.f + g) < 1e-12 && std::abs(s0.fpp + 1.0) < 1e-12,
             "boundary values");
  }
  // The closed form satisfies the equation: its f''' equals -3 eta f''.
  for (const double g : {-1.0, 0.0, 1.0, 2.0}) {
    const double eta = m1_eta(g);
    for (double t = 0.0; t <= 10.0; t += 0.25) {
      const State s = explicit_m1(g, t);
      const double fppp_closed = -3.0 * eta * s.fpp;
      f.expect(std::abs(fppp_closed - rhs(s, Params{1.0, g})) < 1e-10,
               "closed form does not satisfy the equation");
    }
  }
  return {"oracles.m1_explicit", !f.failed, f.os.str(), 0.0};
}

CheckResult check_isoclines(const VerifyOptions&) {
  Fail f;
  for (const double m : {-3.0, -1.5, -1.0, -0.5, 0.0, 1.0, 2.5}) {
    for (double u = -2.0; u <= 2.0; u += 0.23) {
      if (std::abs(3.0 * u + m + 2.0) < 1e-6) continue;
      const double psi = isocline_psi(m, u);
      const auto [P, Q] = vector_field(m, u, psi);
      (void)P;
      f.expect(std::abs(Q) < 1e-10 * (1.0 + std::abs(psi)), "Q on its isocline");
      const auto [P2, Q2] = vector_field(m, u, 2.0 * u * u);
      (void)Q2;
      f.expect(std::abs(P2) < 1e-12, "P on the parabola");
    }
  }
  f.expect(std::abs(isocline_psi(-0.5, 0.7)) == 0.0, "psi identically 0 at m=-1/2");
  return {"phase.isoclines", !f.failed, f.os.str(), 0.0};
}

CheckResult check_jacobian_thresholds(const VerifyOptions&) {
  Fail f;
  const auto th = stability_thresholds();
  for (const double t : {th[0], th[2]}) {
    const double tr = 1.5 - t;
    f.expect(std::abs(tr * tr - 6.0) < 1e-12, "discriminant not zero at threshold");
  }
  const struct {
    double m;
    EquilibriumKind kind;
  } table[] = {
      {th[0] - 0.4, EquilibriumKind::unstable_node},
      {th[0], EquilibriumKind::unstable_node},
      {0.0, EquilibriumKind::unstable_focus},
      {1.5, EquilibriumKind::center},
      {2.0, EquilibriumKind::stable_focus},
      {th[2], EquilibriumKind::stable_node},
      {5.0, EquilibriumKind::stable_node},
  };
  for (const auto& row : table) {
    const auto [O, A] = equilibria(row.m);
    f.expect(A.kind == row.kind, "A misclassified");
    f.expect(O.kind == EquilibriumKind::saddle_node, "O not a saddle-node");
    f.expect(std::abs(O.lambda1) == 0.0 &&
                 std::abs(O.lambda2 - std::complex<double>(-(row.m + 2.0))) < 1e-14,
             "O eigenvalues");
  }
  return {"phase.jacobian_thresholds", !f.failed, f.os.str(), 0.0};
}

std::vector<Check> make_registry() {
  return {
      {"ode.rhs_values", check_rhs_values},
      {"ode.sign_propagation", check_sign_propagation},
      {"ode.no_simultaneous_vanish", check_no_simultaneous_vanish},
      {"ode.residual_convergence", check_residual_convergence},
      {"ode.order_check", check_order},
      {"oracles.riccati", check_riccati},
      {"oracles.m1_explicit", check_m1_explicit},
      {"phase.isoclines", check_isoclines},
      {"phase.jacobian_thresholds", check_jacobian_thresholds},
  };
}

}  // namespace

const std::vector<Check>& verify_registry() {
  static const std::vector<Check> reg = make_registry();
  return reg;
}

std::vector<CheckResult> run_verify(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  for (const auto& c : verify_registry()) {
    if (!opts.only.empty()) {
      bool match = false;
      for (const auto& pat : opts.only)
        if (c.name.find(pat) != std::string::npos) match = true;
      if (!match) continue;
    }
    const auto t0 = Clock::now();
    CheckResult r = c.run(opts);
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace hfbl
