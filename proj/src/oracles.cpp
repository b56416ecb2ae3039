#include "hfbl/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace hfbl {

namespace {

struct RiccatiClosedForm {
  double S = 0.0;  // sqrt(2d)
  double K = 0.0;  // (gamma - S) / (gamma + S), always < 0 for gamma < 0

  explicit RiccatiClosedForm(double gamma) {
    if (!(gamma < 0.0))
      throw std::invalid_argument("riccati_bounded: requires gamma < 0");
    const double d = -1.0 / gamma + 0.5 * gamma * gamma;
    S = std::sqrt(2.0 * d);
    K = (gamma - S) / (gamma + S);
  }
};

}  // namespace

State riccati_bounded(double gamma, double t) {
  const RiccatiClosedForm cf(gamma);
  const double E = cf.K * std::exp(cf.S * t);
  const double den = E - 1.0;
  State s;
  s.t = t;
  s.f = 2.0 * cf.S / den + cf.S;
  s.fp = -2.0 * cf.S * cf.S * E / (den * den);
  s.fpp = 2.0 * cf.S * cf.S * cf.S * E * (E + 1.0) / (den * den * den);
  return s;
}

double riccati_limit(double gamma) { return RiccatiClosedForm(gamma).S; }

double riccati_residual(const Trajectory& traj) {
  if (traj.params.m != -1.0)
    throw std::invalid_argument("riccati_residual: trajectory must have m = -1");
  const auto rc = RiccatiParams::from(traj.params.gamma, traj.alpha);
  double worst = 0.0;
  for (const auto& s : traj.states) {
    const double r = std::abs(s.fp + 0.5 * s.f * s.f - (rc.c * s.t + rc.d));
    worst = std::max(worst, r);
  }
  return worst;
}

double m1_eta(double gamma) {
  auto cubic = [gamma](double e) { return 9.0 * e * e * e + 9.0 * gamma * e * e - 1.0; };
  double lo = 0.0;
  // The root exceeds -gamma when gamma < 0; pad the bracket accordingly.
  double hi = std::max(1.0, 1.0 / (9.0 * gamma * gamma + 1e-300) + 1.0);
  if (gamma < 0.0) hi = std::max(hi, -gamma + 1.0 / (9.0 * gamma * gamma) + 1.0);
  while (cubic(hi) <= 0.0) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cubic(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

State explicit_m1(double gamma, double t) {
  const double eta = m1_eta(gamma);
  const double E = std::exp(-3.0 * eta * t);
  State s;
  s.t = t;
  s.f = -(E - 1.0) / (9.0 * eta * eta) - gamma;
  s.fp = E / (3.0 * eta);
  s.fpp = -E;
  return s;
}

double blasius_check(const Trajectory& traj) {
  if (traj.params.m != -0.5)
    throw std::invalid_argument("blasius_check: trajectory must have m = -1/2");
  const double a = traj.t_begin(), b = traj.t_end();
  const double span = std::abs(b - a);
  const double h = std::min(1e-2, span / 64.0);
  const double dir = traj.direction > 0 ? 1.0 : -1.0;
  const double lo = a + dir * 2.0 * h, hi = b - dir * 2.0 * h;
  if ((hi - lo) * dir <= 0.0) throw std::invalid_argument("blasius_check: trajectory too short");

  const int n = 200;
  double worst = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) / n;
    // Five-point stencil on the dense output of f''.
    const double d3 = (-traj.eval(t + 2.0 * h).fpp + 8.0 * traj.eval(t + h).fpp -
                       8.0 * traj.eval(t - h).fpp + traj.eval(t - 2.0 * h).fpp) /
                      (12.0 * h);
    const State s = traj.eval(t);
    worst = std::max(worst, std::abs(d3 + 1.5 * s.f * s.fpp));
  }
  return worst;
}

namespace {

// Scan a trajectory (in integration order) for the first bracket of
// h(t) = f^3 / f'' == target, then refine on the dense output. Scanning stops
// where f'' leaves the negative half-line, since h is only meaningful on
// concave pieces.
std::optional<double> find_h_root(const Trajectory& traj, double target) {
  auto hval = [&traj](double t) {
    const State s = traj.eval(t);
    return s.f * s.f * s.f / s.fpp;
  };
  double tprev = traj.states.front().t;
  double hprev = hval(tprev);
  if (hprev == target) return tprev;
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    const State& s = traj.states[i];
    if (s.fpp >= 0.0) break;
    const double hcur = hval(s.t);
    if ((hprev - target) * (hcur - target) <= 0.0) {
      double ta = tprev, tb = s.t;
      double ha = hprev;
      for (int it = 0; it < 200 && std::abs(tb - ta) > 1e-13 * (1.0 + std::abs(tb)); ++it) {
        const double tm = 0.5 * (ta + tb);
        const double hm = hval(tm);
        if ((ha - target) * (hm - target) <= 0.0)
          tb = tm;
        else {
          ta = tm;
          ha = hm;
        }
      }
      return 0.5 * (ta + tb);
    }
    tprev = s.t;
    hprev = hcur;
  }
  return std::nullopt;
}

}  // namespace

IvpSpec translate_scale(const Trajectory& forward, const Trajectory& backward,
                        double target_gamma) {
  if (forward.params.gamma != 0.0)
    throw std::invalid_argument("translate_scale: base solution must have gamma = 0");

  IvpSpec spec;
  spec.params = Params{forward.params.m, target_gamma};

  if (target_gamma == 0.0) {
    spec.alpha = forward.alpha;
    return spec;
  }

  const double target = target_gamma * target_gamma * target_gamma;
  const Trajectory& scan = target_gamma < 0.0 ? forward : backward;
  if (scan.states.empty())
    throw std::runtime_error("translate_scale: no trajectory to scan for the root of h");

  const auto t0 = find_h_root(scan, target);
  if (!t0)
    throw std::runtime_error(
        "translate_scale: root of h not bracketed; extend the base integration");

  const State s0 = scan.eval(*t0);
  const double k = -target_gamma / s0.f;
  spec.alpha = k * k * s0.fp;
  return spec;
}

}  // namespace hfbl
