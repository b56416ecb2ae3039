#include "hfbl/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hfbl/ode.hpp"

namespace hfbl {

const char* to_string(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::unstable_node: return "unstable_node";
    case EquilibriumKind::unstable_focus: return "unstable_focus";
    case EquilibriumKind::center: return "center";
    case EquilibriumKind::stable_focus: return "stable_focus";
    case EquilibriumKind::stable_node: return "stable_node";
    case EquilibriumKind::saddle_node: return "saddle_node";
  }
  return "?";
}

const char* to_string(SeparatrixId id) {
  switch (id) {
    case SeparatrixId::S0: return "S0";
    case SeparatrixId::S1: return "S1";
    case SeparatrixId::S2: return "S2";
    case SeparatrixId::C3: return "C3";
  }
  return "?";
}

const char* to_string(CrossLine line) {
  switch (line) {
    case CrossLine::q_isocline: return "q_isocline";
    case CrossLine::p_isocline: return "p_isocline";
    case CrossLine::u_axis: return "u_axis";
    case CrossLine::v_axis: return "v_axis";
    case CrossLine::line_L: return "line_L";
  }
  return "?";
}

const char* to_string(CycleProbe::Verdict v) {
  switch (v) {
    case CycleProbe::Verdict::cycle: return "cycle";
    case CycleProbe::Verdict::spiral_in: return "spiral_in";
    case CycleProbe::Verdict::spiral_out: return "spiral_out";
    case CycleProbe::Verdict::center_like: return "center_like";
    case CycleProbe::Verdict::no_return: return "no_return";
  }
  return "?";
}

double isocline_psi(double m, double u) {
  const double den = 3.0 * u + (m + 2.0);
  if (den == 0.0) throw std::domain_error("isocline_psi: pole at u = -(m+2)/3");
  return (2.0 * m + 1.0) * u * u / den;
}

double slope_field(double m, double u, double v) {
  const auto [P, Q] = vector_field(m, u, v);
  if (P == 0.0) throw std::domain_error("slope_field: undefined on the parabola v = 2u^2");
  return Q / P;
}

std::array<double, 3> stability_thresholds() {
  const double r6 = std::sqrt(6.0);
  return {(3.0 - 2.0 * r6) / 2.0, 1.5, (3.0 + 2.0 * r6) / 2.0};
}

std::pair<Equilibrium, Equilibrium> equilibria(double m) {
  if (m == -2.0)
    throw std::invalid_argument("equilibria: O degenerates at m = -2");

  Equilibrium O;
  O.u = 0.0;
  O.v = 0.0;
  O.lambda1 = 0.0;
  O.lambda2 = -(m + 2.0);
  O.kind = EquilibriumKind::saddle_node;

  // Jacobian at A = (-1/2, 1/2): [[2, 1], [-2m - 5/2, -m - 1/2]].
  Equilibrium A;
  A.u = -0.5;
  A.v = 0.5;
  const double tr = 1.5 - m;
  const double disc = tr * tr - 6.0;  // det = 3/2
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    A.lambda1 = 0.5 * (tr + root);
    A.lambda2 = 0.5 * (tr - root);
  } else {
    const double im = 0.5 * std::sqrt(-disc);
    A.lambda1 = {0.5 * tr, im};
    A.lambda2 = {0.5 * tr, -im};
  }
  if (std::abs(tr) < 1e-13)
    A.kind = EquilibriumKind::center;
  else if (disc >= 0.0)
    A.kind = tr > 0.0 ? EquilibriumKind::unstable_node : EquilibriumKind::stable_node;
  else
    A.kind = tr > 0.0 ? EquilibriumKind::unstable_focus : EquilibriumKind::stable_focus;
  return {O, A};
}

TraceDir away_direction(double m, SeparatrixId which) {
  // On the hyperbolic branch the O-eigenvalue -(m+2) decides; on the center
  // branch the flow u' = -3/(m+2) u^2 does.
  switch (which) {
    case SeparatrixId::S0:
    case SeparatrixId::S1:
      return m < -2.0 ? TraceDir::forward : TraceDir::backward;
    case SeparatrixId::S2:  // left half of the center manifold
      return m > -2.0 ? TraceDir::forward : TraceDir::backward;
    case SeparatrixId::C3:  // right half
      return m > -2.0 ? TraceDir::backward : TraceDir::forward;
  }
  return TraceDir::forward;
}

namespace {

struct Seed {
  double u, v;
  std::array<double, 2> tangent;
};

Seed seed_point(double m, SeparatrixId which, double offset) {
  switch (which) {
    case SeparatrixId::S0:
    case SeparatrixId::S1: {
      // Invariant manifold through O tangent to L, with curvature
      // b = -3(m+1) / (2(m+2)): v = -(m+2) u + b u^2 + O(u^3).
      const double norm = std::sqrt(1.0 + (m + 2.0) * (m + 2.0));
      const double u = (which == SeparatrixId::S0 ? offset : -offset) / norm;
      const double b = -3.0 * (m + 1.0) / (2.0 * (m + 2.0));
      return {u, -(m + 2.0) * u + b * u * u, tangent_L(m)};
    }
    case SeparatrixId::S2:
    case SeparatrixId::C3: {
      // Center manifold: v = a u^2 + O(u^3), a = (2m+1)/(m+2).
      const double u = which == SeparatrixId::S2 ? -offset : offset;
      const double a = (2.0 * m + 1.0) / (m + 2.0);
      return {u, a * u * u, tangent_L0(m)};
    }
  }
  return {0.0, 0.0, {1.0, 0.0}};
}

RkOptions<2> plane_options(double m, double rel_tol, double abs_tol, double blowup) {
  RkOptions<2> opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = abs_tol;
  opt.blowup_bound = blowup;
  opt.h0 = 1e-6;
  auto line = [m](int which) {
    return [m, which](double, const VecN<2>& y) {
      switch (which) {
        case 0: return -(m + 2.0) * y[1] + (2.0 * m + 1.0) * y[0] * y[0] - 3.0 * y[0] * y[1];
        case 1: return y[1] - 2.0 * y[0] * y[0];
        case 2: return y[1];
        case 3: return y[0];
        default: return y[1] + (m + 2.0) * y[0];
      }
    };
  };
  for (int i = 0; i < 5; ++i) opt.watchers.push_back(Watcher<2>{i, line(i), false});
  return opt;
}

}  // namespace

RkResult<2> integrate_plane(double m, double u0, double v0, double s0, double s1,
                            double rel_tol, double abs_tol, double blowup_bound) {
  auto f = [m](double, const VecN<2>& y, VecN<2>& dy) {
    dy[0] = y[1] - 2.0 * y[0] * y[0];
    dy[1] = -(m + 2.0) * y[1] + (2.0 * m + 1.0) * y[0] * y[0] - 3.0 * y[0] * y[1];
  };
  RkOptions<2> opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = abs_tol;
  opt.blowup_bound = blowup_bound;
  opt.h0 = 1e-6 / (1.0 + std::abs(u0) + std::abs(v0));
  return dopri5<2>(f, s0, VecN<2>{u0, v0}, s1, opt);
}

SeparatrixTrace trace_separatrix(double m, SeparatrixId which, TraceDir dir,
                                 const TraceOptions& opts) {
  if (m == -2.0)
    throw std::invalid_argument("trace_separatrix: branch layout degenerates at m = -2");

  const Seed seed = seed_point(m, which, opts.seed_offset);

  auto f = [m](double, const VecN<2>& y, VecN<2>& dy) {
    dy[0] = y[1] - 2.0 * y[0] * y[0];
    dy[1] = -(m + 2.0) * y[1] + (2.0 * m + 1.0) * y[0] * y[0] - 3.0 * y[0] * y[1];
  };

  RkOptions<2> opt = plane_options(m, opts.rel_tol, opts.abs_tol, opts.blowup_bound);
  opt.h0 = opts.seed_offset * 1e-2;
  if (opts.stop_at_q_crossing) opt.watchers[0].stop = true;

  // Re-capture by O only counts once the trace has genuinely left the seed
  // neighbourhood.
  const double arm_radius = 10.0 * opts.seed_offset;
  const double capture = opts.o_capture_radius;
  bool armed = false;
  opt.stop_predicate = [arm_radius, capture, armed](double, const VecN<2>& y) mutable {
    const double r = std::hypot(y[0], y[1]);
    if (!armed && r > arm_radius) armed = true;
    return armed && r < capture;
  };

  const double s_end = dir == TraceDir::forward ? opts.s_span : -opts.s_span;
  auto rk = dopri5<2>(f, 0.0, VecN<2>{seed.u, seed.v}, s_end, opt);

  SeparatrixTrace tr;
  tr.which = which;
  tr.dir = dir;
  tr.m = m;
  tr.seed_offset = opts.seed_offset;
  tr.tangent = seed.tangent;
  tr.points.reserve(rk.ts.size());
  for (std::size_t i = 0; i < rk.ts.size(); ++i)
    tr.points.push_back(PhasePoint{rk.ts[i], rk.ys[i][0], rk.ys[i][1]});
  for (const auto& c : rk.crossings)
    tr.crossings.push_back(
        SepCrossing{static_cast<CrossLine>(c.id), c.t, c.y[0], c.y[1]});
  return tr;
}

PhaseCurve blowup_transform(const Trajectory& traj, double tau) {
  if (!traj.contains_time(tau))
    throw std::invalid_argument("blowup_transform: tau outside the trajectory");
  const State s0 = traj.eval(tau);
  if (s0.f == 0.0 || std::abs(s0.f) < 1e-12)
    throw std::invalid_argument("blowup_transform: f vanishes at tau");

  // Maximal piece starting at tau on which f keeps its sign.
  const double dir = traj.direction > 0 ? 1.0 : -1.0;
  double t_stop = traj.t_end();
  for (const auto& e : traj.events)
    if (e.kind == EventKind::f_zero && (e.t - tau) * dir > 0.0 &&
        (t_stop - e.t) * dir > 0.0)
      t_stop = e.t;

  PhaseCurve curve;
  auto push = [&curve](double s, const State& st) {
    const double f2 = st.f * st.f;
    curve.points.push_back(PhasePoint{s, st.fp / f2, st.fpp / (f2 * st.f)});
  };

  double s = 0.0;
  double t_prev = tau;
  push(0.0, s0);
  for (const auto& st : traj.states) {
    if ((st.t - tau) * dir <= 0.0) continue;
    if ((st.t - t_stop) * dir > 0.0) break;
    if (std::abs(st.f) < 1e-9) break;
    s += quad_dense(traj, t_prev, st.t, [](const State& x) { return x.f; });
    push(s, st);
    t_prev = st.t;
  }
  return curve;
}

GammaStarResult gamma_star_separatrix(double m, const TraceOptions& opts) {
  if (!(m < -1.0) || m == -2.0)
    throw std::invalid_argument(
        "gamma_star_separatrix: requires m < -2 or -2 < m < -1");

  auto star_for_offset = [m](const TraceOptions& o) {
    TraceOptions topts = o;
    topts.stop_at_q_crossing = true;
    const SeparatrixTrace tr = trace_separatrix(m, SeparatrixId::S0, topts);
    for (const auto& c : tr.crossings)
      if (c.line == CrossLine::q_isocline) {
        GammaStarResult res;
        res.m = m;
        res.u_star = c.u;
        res.v_star = c.v;
        res.gamma_star = std::cbrt(1.0 / c.v);
        return res;
      }
    throw std::runtime_error(
        "gamma_star_separatrix: no isocline crossing within the trace horizon");
  };

  const GammaStarResult primary = star_for_offset(opts);
  TraceOptions finer = opts;
  finer.seed_offset = opts.seed_offset * 0.1;
  const GammaStarResult check = star_for_offset(finer);
  if (std::abs(primary.gamma_star - check.gamma_star) >
      1e-4 * std::max(1.0, std::abs(primary.gamma_star)))
    throw std::runtime_error("gamma_star_separatrix: seed-offset check failed");
  return primary;
}

namespace {

// First crossing of u = -1/2 with v above the focus height (there P > 0, so
// the crossing is transverse in the fixed direction); NaN when no return.
double first_return(double m, double v0, const CycleProbeOptions& opts) {
  auto f = [m](double, const VecN<2>& y, VecN<2>& dy) {
    dy[0] = y[1] - 2.0 * y[0] * y[0];
    dy[1] = -(m + 2.0) * y[1] + (2.0 * m + 1.0) * y[0] * y[0] - 3.0 * y[0] * y[1];
  };
  RkOptions<2> opt;
  opt.rel_tol = opts.rel_tol;
  opt.abs_tol = opts.abs_tol;
  opt.blowup_bound = 1e6;
  opt.h0 = 1e-4;
  opt.watchers.push_back(
      Watcher<2>{0, [](double, const VecN<2>& y) { return y[0] + 0.5; }, false});
  auto rk = dopri5<2>(f, 0.0, VecN<2>{-0.5, v0}, opts.s_span, opt);
  for (const auto& c : rk.crossings)
    if (c.t > 1e-9 && c.y[1] > 0.5) return c.y[1];
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

CycleProbe limit_cycle_probe(double m, const CycleProbeOptions& opts) {
  if (!(m > 1.0)) throw std::invalid_argument("limit_cycle_probe: requires m > 1");

  CycleProbe probe;
  auto displacement = [&](double v) { return first_return(m, v, opts) - v; };

  std::vector<std::pair<double, double>> valid;  // (v, d)
  for (int i = 0; i < opts.samples; ++i) {
    const double v = opts.v_lo + (opts.v_hi - opts.v_lo) * i / (opts.samples - 1.0);
    const double r = first_return(m, v, opts);
    if (std::isnan(r)) continue;
    probe.section.emplace_back(v, r);
    valid.emplace_back(v, r - v);
  }
  if (valid.empty()) {
    probe.verdict = CycleProbe::Verdict::no_return;
    return probe;
  }

  for (std::size_t i = 0; i + 1 < valid.size(); ++i) {
    if (valid[i].second == 0.0) {
      probe.verdict = CycleProbe::Verdict::cycle;
      probe.v_fixed = valid[i].first;
      return probe;
    }
    if (valid[i].second * valid[i + 1].second < 0.0) {
      double a = valid[i].first, b = valid[i + 1].first;
      double da = valid[i].second;
      for (int it = 0; it < 100 && b - a > 1e-10; ++it) {
        const double mid = 0.5 * (a + b);
        const double dm = displacement(mid);
        if (std::isnan(dm)) break;
        if (da * dm <= 0.0)
          b = mid;
        else {
          a = mid;
          da = dm;
        }
      }
      probe.verdict = CycleProbe::Verdict::cycle;
      probe.v_fixed = 0.5 * (a + b);
      return probe;
    }
  }

  double dmax = 0.0;
  for (const auto& [v, d] : valid) dmax = std::max(dmax, std::abs(d));
  if (dmax < 1e-4) {
    probe.verdict = CycleProbe::Verdict::center_like;
    return probe;
  }
  probe.verdict = valid.front().second < 0.0 ? CycleProbe::Verdict::spiral_in
                                             : CycleProbe::Verdict::spiral_out;
  return probe;
}

}  // namespace hfbl
