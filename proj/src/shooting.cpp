#include "hfbl/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hfbl/asymptotics.hpp"
#include "internal.hpp"

namespace hfbl {

namespace {

constexpr int kCeilingWatcher = 100;

IvpSpec base_spec(const Params& p, double alpha, const ShootOptions& opts, double t_max) {
  IvpSpec spec;
  spec.params = p;
  spec.alpha = alpha;
  spec.t_max = t_max;
  spec.rel_tol = opts.rel_tol;
  spec.abs_tol = opts.abs_tol;
  spec.blowup_bound = opts.blowup_bound;
  return spec;
}

enum class ProbeSide { too_small, too_large, accepted, indeterminate };

// Slope dichotomy for the canonical concave solution, m > -1.
ProbeSide concave_probe(const Params& p, double alpha, const ShootOptions& opts) {
  IvpSpec spec = base_spec(p, alpha, opts, opts.t_max);
  spec.stop_on = EventSet{true, true, false};

  IntegrateHooks hooks;
  if (p.m <= -0.5) {
    // Concave ceiling: crossing it is the unbounded side of the dichotomy.
    const double rad = p.gamma * p.gamma + 2.0 * alpha / (p.m + 2.0);
    if (rad > 0.0) {
      const double ceiling = std::sqrt(rad) * (1.0 + 1e-9) + 1e-12;
      Watcher<3> w;
      w.id = kCeilingWatcher;
      w.g = [ceiling](double, const VecN<3>& y) { return y[0] - ceiling; };
      w.stop = true;
      hooks.extra_watchers.push_back(std::move(w));
    }
  }

  std::vector<CustomCrossing> custom;
  const Trajectory traj = integrate(spec, Direction::forward, hooks, &custom);

  switch (traj.termination.kind) {
    case TerminationKind::blowup:
      return traj.states.back().fp < 0.0 ? ProbeSide::too_small : ProbeSide::too_large;
    case TerminationKind::event_stop:
      if (!traj.termination.stopping_event) return ProbeSide::too_large;  // ceiling
      switch (*traj.termination.stopping_event) {
        case EventKind::fp_zero: return ProbeSide::too_small;
        case EventKind::fpp_zero:
          if (p.m <= -0.5) return ProbeSide::too_large;  // concavity exhausted
          return traj.states.back().fp > 0.0 ? ProbeSide::too_large : ProbeSide::too_small;
        default: return ProbeSide::indeterminate;
      }
    case TerminationKind::reached_t_max: {
      if (detail::strict_far_field(traj, opts.eps_far)) return ProbeSide::accepted;
      // Near-critical stall: decide by the drift of f over the last quarter.
      const double T = traj.t_end();
      const double drift = traj.eval(T).f - traj.eval(0.75 * T).f;
      if (drift > 10.0 * opts.eps_far * std::max(1.0, std::abs(traj.eval(T).f)))
        return ProbeSide::too_large;
      return ProbeSide::accepted;
    }
  }
  return ProbeSide::indeterminate;
}

ShootResult finish_shot(const Params& p, double alpha, const ShootOptions& opts) {
  ShootResult res;
  res.alpha = alpha;
  const Trajectory traj = solve_ivp(p, alpha, opts);
  res.report = make_report(traj, opts);
  res.status = res.report.classification.accepted() ? ShootStatus::converged
                                                    : ShootStatus::horizon_exhausted;
  return res;
}

}  // namespace

ShootResult shoot_concave(const Params& p, std::pair<double, double> bracket,
                          const ShootOptions& opts) {
  if (!(p.m > -1.0))
    throw std::invalid_argument("shoot_concave: requires m > -1");
  double lo = bracket.first, hi = bracket.second;
  if (!(lo < hi)) throw std::invalid_argument("shoot_concave: bad bracket");

  const ProbeSide side_lo = concave_probe(p, lo, opts);
  const ProbeSide side_hi = concave_probe(p, hi, opts);
  if (side_lo == ProbeSide::accepted) return finish_shot(p, lo, opts);
  if (side_hi == ProbeSide::accepted) return finish_shot(p, hi, opts);
  if (side_lo != ProbeSide::too_small || side_hi != ProbeSide::too_large) {
    ShootResult res;
    res.status = ShootStatus::no_sign_change;
    res.alpha = lo;
    return res;
  }

  for (int it = 0; it < 200 && hi - lo > opts.alpha_tol * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    switch (concave_probe(p, mid, opts)) {
      case ProbeSide::too_small: lo = mid; break;
      case ProbeSide::too_large: hi = mid; break;
      case ProbeSide::accepted:
      case ProbeSide::indeterminate:
        return finish_shot(p, mid, opts);
    }
  }
  return finish_shot(p, 0.5 * (lo + hi), opts);
}

ShootResult shoot_concave(const Params& p, const ShootOptions& opts) {
  if (!(p.m > -1.0))
    throw std::invalid_argument("shoot_concave: requires m > -1");
  const double lo = 1e-8;
  double hi = std::max(1.0, std::abs(p.gamma));
  for (int k = 0; k < 40; ++k) {
    const ProbeSide s = concave_probe(p, hi, opts);
    if (s == ProbeSide::accepted) return finish_shot(p, hi, opts);
    if (s == ProbeSide::too_large) return shoot_concave(p, {lo, hi}, opts);
    hi *= 2.0;
  }
  ShootResult res;
  res.status = ShootStatus::no_sign_change;
  return res;
}

// ---------------------------------------------------------------------------
// Families of solutions: admissible-slope intervals and critical gamma.

namespace {

struct FamilyProbe {
  enum class Kind { below, above, inside, outside_timed } kind;
  double time = 0.0;  // witness time for outside probes
};

// m < -2: too-small slopes lose f' while f < 0, too-large slopes push f
// through zero. Solutions keep f < 0 with shrinking slope.
FamilyProbe family_probe_low(const Params& p, double alpha, const ShootOptions& opts,
                             double t_max) {
  IvpSpec spec = base_spec(p, alpha, opts, t_max);
  spec.stop_on = EventSet{true, false, true};
  const Trajectory traj = integrate(spec);
  switch (traj.termination.kind) {
    case TerminationKind::event_stop:
      if (traj.termination.stopping_event == EventKind::fp_zero)
        return {FamilyProbe::Kind::below, traj.termination.t};
      return {FamilyProbe::Kind::above, traj.termination.t};
    case TerminationKind::blowup:
      return {traj.states.back().fp < 0.0 ? FamilyProbe::Kind::below
                                          : FamilyProbe::Kind::above,
              traj.termination.t};
    case TerminationKind::reached_t_max:
      if (detail::strict_far_field(traj, opts.eps_far) || detail::dplus_certificate(traj))
        return {FamilyProbe::Kind::inside, t_max};
      // Unresolved: the trajectory is still drifting toward one of the exits.
      return {traj.states.back().f > -10.0 * opts.eps_far ? FamilyProbe::Kind::above
                                                          : FamilyProbe::Kind::below,
              t_max};
  }
  return {FamilyProbe::Kind::below, 0.0};
}

// -2 < m < -1: every rejected slope loses f' in finite time; survival time
// peaks on the admissible set.
FamilyProbe family_probe_mid(const Params& p, double alpha, const ShootOptions& opts,
                             double t_max) {
  IvpSpec spec = base_spec(p, alpha, opts, t_max);
  spec.stop_on = EventSet{true, false, false};
  const Trajectory traj = integrate(spec);
  switch (traj.termination.kind) {
    case TerminationKind::event_stop:
      return {FamilyProbe::Kind::outside_timed, traj.termination.t};
    case TerminationKind::blowup:
      return {FamilyProbe::Kind::outside_timed, traj.termination.t};
    case TerminationKind::reached_t_max: {
      if (detail::strict_far_field(traj, opts.eps_far) ||
          detail::unbounded_certificate(traj))
        return {FamilyProbe::Kind::inside, t_max};
      const auto lim = lambda_limit(traj);
      if (!lim.divergent) return {FamilyProbe::Kind::inside, t_max};
      return {FamilyProbe::Kind::outside_timed, t_max};
    }
  }
  return {FamilyProbe::Kind::outside_timed, 0.0};
}

double refine_boundary(const std::function<bool(double)>& inside, double out_pt,
                       double in_pt, double tol) {
  double a = out_pt, b = in_pt;
  for (int it = 0; it < 200 && std::abs(b - a) > tol * std::max(1.0, std::abs(b)); ++it) {
    const double mid = 0.5 * (a + b);
    if (inside(mid))
      b = mid;
    else
      a = mid;
  }
  return 0.5 * (a + b);
}

struct WindowSearch {
  bool found = false;
  double alpha_inside = 0.0;
  double below_pt = 0.0;  // known witness points on each side
  double above_pt = 0.0;
};

// Witness-type bisection for m < -2.
WindowSearch find_window_low(const Params& p, const ShootOptions& opts, double t_max) {
  WindowSearch ws;
  const double scale = std::sqrt(std::max(p.gamma, 1e-12) / 2.0);
  double a = 1e-6 * scale;
  double b = 1.5 * scale;
  for (int k = 0; k < 12; ++k) {
    const auto pr = family_probe_low(p, b, opts, t_max);
    if (pr.kind == FamilyProbe::Kind::above) break;
    if (pr.kind == FamilyProbe::Kind::inside) {
      ws.found = true;
      ws.alpha_inside = b;
      break;
    }
    b *= 2.0;
  }
  {
    const auto pr = family_probe_low(p, a, opts, t_max);
    if (pr.kind == FamilyProbe::Kind::inside) {
      ws.found = true;
      ws.alpha_inside = a;
    } else if (pr.kind != FamilyProbe::Kind::below) {
      a *= 1e-3;  // push further down; tiny slopes always lose f' first
    }
  }
  ws.below_pt = a;
  ws.above_pt = b;
  if (ws.found) return ws;

  for (int it = 0; it < 120; ++it) {
    if (std::abs(ws.above_pt - ws.below_pt) <
        1e-13 * std::max(1.0, std::abs(ws.above_pt)))
      return ws;  // window thinner than resolution: treat as empty
    const double mid = 0.5 * (ws.below_pt + ws.above_pt);
    const auto pr = family_probe_low(p, mid, opts, t_max);
    if (pr.kind == FamilyProbe::Kind::inside) {
      ws.found = true;
      ws.alpha_inside = mid;
      return ws;
    }
    if (pr.kind == FamilyProbe::Kind::below)
      ws.below_pt = mid;
    else
      ws.above_pt = mid;
  }
  return ws;
}

// Survival-time maximization for -2 < m < -1 (both exits are slope losses, so
// the window is located by chasing the probe that lives longest).
WindowSearch find_window_mid(const Params& p, const ShootOptions& opts, double t_max) {
  WindowSearch ws;
  const double alpha_nec = -1.0 / ((p.m + 2.0) * p.gamma);
  double hi = 8.0 * alpha_nec;
  for (int k = 0; k < 18; ++k) {
    const auto pr = family_probe_mid(p, hi, opts, t_max);
    if (pr.kind == FamilyProbe::Kind::inside) {
      ws.found = true;
      ws.alpha_inside = hi;
      ws.below_pt = alpha_nec;
      ws.above_pt = 2.0 * hi;
      return ws;
    }
    if (pr.time < 0.9 * t_max) break;
    hi *= 2.0;
  }

  struct Entry {
    double alpha, time;
  };
  std::vector<Entry> grid;
  const int n = 64;
  const double lo = alpha_nec * (1.0 + 1e-9);
  for (int i = 0; i < n; ++i) {
    const double x = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1.0));
    const auto pr = family_probe_mid(p, x, opts, t_max);
    if (pr.kind == FamilyProbe::Kind::inside) {
      ws.found = true;
      ws.alpha_inside = x;
      ws.below_pt = lo;
      ws.above_pt = hi;
      return ws;
    }
    grid.push_back({x, pr.time});
  }

  for (int round = 0; round < 60; ++round) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (grid[i].time > grid[best].time) best = i;
    const std::size_t il = best > 0 ? best - 1 : best;
    const std::size_t ir = best + 1 < grid.size() ? best + 1 : best;
    if (grid[ir].alpha - grid[il].alpha <
        1e-14 * std::max(1.0, std::abs(grid[best].alpha)))
      break;
    for (const double x : {0.5 * (grid[il].alpha + grid[best].alpha),
                           0.5 * (grid[best].alpha + grid[ir].alpha)}) {
      const auto pr = family_probe_mid(p, x, opts, t_max);
      if (pr.kind == FamilyProbe::Kind::inside) {
        ws.found = true;
        ws.alpha_inside = x;
        ws.below_pt = lo;
        ws.above_pt = hi;
        return ws;
      }
      grid.push_back({x, pr.time});
    }
    std::sort(grid.begin(), grid.end(),
              [](const Entry& a, const Entry& b) { return a.alpha < b.alpha; });
  }
  ws.below_pt = lo;
  ws.above_pt = hi;
  return ws;
}

}  // namespace

AlphaInterval alpha_interval(const Params& p, const ShootOptions& opts) {
  const double m = p.m, gamma = p.gamma;
  AlphaInterval out;

  if (m == -2.0) return out;  // no solutions at all

  if (m < -2.0) {
    const double bound = std::cbrt(2.0 / ((m + 2.0) * (m + 2.0)));
    if (gamma <= bound) return out;
    const auto ws = find_window_low(p, opts, opts.t_max);
    if (!ws.found) return out;
    auto inside = [&](double a) {
      return family_probe_low(p, a, opts, opts.t_max).kind == FamilyProbe::Kind::inside;
    };
    out.lo = refine_boundary(inside, ws.below_pt, ws.alpha_inside, opts.boundary_tol);
    out.hi = refine_boundary(inside, ws.above_pt, ws.alpha_inside, opts.boundary_tol);
    out.kind = (out.hi - out.lo <= 2.0 * opts.boundary_tol * std::max(1.0, out.hi))
                   ? IntervalKind::singleton
                   : IntervalKind::interval;
    return out;
  }

  if (m < -1.0) {  // -2 < m < -1
    if (gamma >= 0.0) return out;
    const auto ws = find_window_mid(p, opts, opts.t_max);
    if (!ws.found) return out;
    auto inside = [&](double a) {
      return family_probe_mid(p, a, opts, opts.t_max).kind == FamilyProbe::Kind::inside;
    };
    out.lo = refine_boundary(inside, ws.below_pt, ws.alpha_inside, opts.boundary_tol);
    out.hi = refine_boundary(inside, ws.above_pt, ws.alpha_inside, opts.boundary_tol);
    out.kind = (out.hi - out.lo <= 2.0 * opts.boundary_tol * std::max(1.0, out.hi))
                   ? IntervalKind::singleton
                   : IntervalKind::interval;
    return out;
  }

  if (m == -1.0) {
    if (gamma >= 0.0) return out;
    auto no_slope_loss = [&](double a) {
      IvpSpec spec = base_spec(p, a, opts, opts.t_max);
      spec.stop_on = EventSet{true, false, false};
      const Trajectory traj = integrate(spec);
      return traj.termination.kind == TerminationKind::reached_t_max;
    };
    double hi = 1.0;
    int k = 0;
    for (; k < 60 && !no_slope_loss(hi); ++k) hi *= 2.0;
    if (k == 60) return out;
    out.lo = refine_boundary(no_slope_loss, 1e-8, hi, opts.boundary_tol);
    out.hi = std::numeric_limits<double>::infinity();
    out.hi_unbounded = true;
    out.kind = IntervalKind::interval;
    return out;
  }

  if (m > 1.0) {
    const auto concave = shoot_concave(p, opts);
    if (concave.status == ShootStatus::no_sign_change)
      throw std::runtime_error("alpha_interval: concave shot failed to bracket");
    const double hi = concave.alpha;
    auto is_accepted = [&](double a) {
      return classify(solve_ivp(p, a, opts), opts.eps_far).accepted();
    };
    double step = 0.25 * std::max(1.0, std::abs(hi));
    double a = hi - step;
    int k = 0;
    for (; k < 30 && is_accepted(a); ++k) {
      step *= 2.0;
      a = hi - step;
    }
    if (k == 30) throw std::runtime_error("alpha_interval: lower edge not bracketed");
    out.lo = refine_boundary(is_accepted, a, hi - step / 2.0, opts.boundary_tol);
    out.hi = hi;
    out.kind = IntervalKind::interval;
    return out;
  }

  throw std::invalid_argument(
      "alpha_interval: regime has a single admissible slope; use shoot_concave");
}

double gamma_star_shooting(double m, const ShootOptions& opts) {
  if (m < -2.0) {
    const double bound = std::cbrt(2.0 / ((m + 2.0) * (m + 2.0)));
    auto exists = [&](double g) {
      return find_window_low(Params{m, g}, opts, opts.probe_t_max).found;
    };
    double lo = bound;  // no solutions at or below the hard bound
    double hi = 10.0 * bound;
    int k = 0;
    for (; k < 12 && !exists(hi); ++k) hi *= 2.0;
    if (k == 12) throw std::runtime_error("gamma_star_shooting: no solutions found");
    while (hi - lo > 1e-7 * std::max(1.0, std::abs(hi))) {
      const double mid = 0.5 * (lo + hi);
      (exists(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  }

  if (m > -2.0 && m < -1.0) {
    auto exists = [&](double g) {
      if (g >= 0.0) return false;
      return find_window_mid(Params{m, g}, opts, opts.probe_t_max).found;
    };
    double lo = -2.0;
    int k = 0;
    for (; k < 12 && !exists(lo); ++k) lo *= 4.0;
    if (k == 12) throw std::runtime_error("gamma_star_shooting: no solutions found");
    double hi = 0.0;
    while (hi - lo > 1e-7 * std::max(1.0, std::abs(lo))) {
      const double mid = 0.5 * (lo + hi);
      (exists(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  throw std::invalid_argument("gamma_star_shooting: requires m < -2 or -2 < m < -1");
}

}  // namespace hfbl
