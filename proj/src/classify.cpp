#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hfbl/asymptotics.hpp"
#include "hfbl/shooting.hpp"
#include "internal.hpp"

namespace hfbl {

const char* to_string(Shape s) {
  switch (s) {
    case Shape::concave: return "concave";
    case Shape::concave_convex: return "concave_convex";
    case Shape::rejected_fp_vanishes: return "rejected_fp_vanishes";
    case Shape::rejected_blowup: return "rejected_blowup";
    case Shape::rejected_divergent_fp: return "rejected_divergent_fp";
  }
  return "?";
}

const char* to_string(BoundednessKind b) {
  switch (b) {
    case BoundednessKind::bounded: return "bounded";
    case BoundednessKind::unbounded: return "unbounded";
    case BoundednessKind::not_applicable: return "not_applicable";
  }
  return "?";
}

const char* to_string(ShootStatus s) {
  switch (s) {
    case ShootStatus::converged: return "converged";
    case ShootStatus::no_sign_change: return "no_sign_change";
    case ShootStatus::horizon_exhausted: return "horizon_exhausted";
  }
  return "?";
}

const char* to_string(IntervalKind k) {
  switch (k) {
    case IntervalKind::empty: return "empty";
    case IntervalKind::singleton: return "singleton";
    case IntervalKind::interval: return "interval";
  }
  return "?";
}

namespace detail {

bool strict_far_field(const Trajectory& traj, double eps_far) {
  if (traj.termination.kind != TerminationKind::reached_t_max) return false;
  const State& e = traj.states.back();
  return std::abs(e.fp) < eps_far && std::abs(e.fpp) < eps_far;
}

bool fp_shrinking_tail(const Trajectory& traj) {
  const double T = traj.t_end();
  const double lo = 0.75 * T;
  double prev = std::abs(traj.eval(lo).fp);
  for (int i = 1; i <= 8; ++i) {
    const double cur = std::abs(traj.eval(lo + (T - lo) * i / 8.0).fp);
    if (cur > prev * (1.0 + 1e-9) + 1e-15) return false;
    prev = cur;
  }
  return true;
}

// Containment in {0 < u < -(m+2)/2, 0 <= v < -(m+2) u} for m < -2 concave
// solutions, sampled over the second half of the run. Genuine solutions sit
// in this region from t = 0 on; their slope keeps shrinking.
bool dplus_certificate(const Trajectory& traj) {
  const double m = traj.params.m;
  if (!(m < -2.0)) return false;
  if (traj.termination.kind != TerminationKind::reached_t_max) return false;
  const double T = traj.t_end();
  for (int i = 0; i <= 32; ++i) {
    const State s = traj.eval(0.5 * T + 0.5 * T * i / 32.0);
    if (!(s.f < 0.0)) return false;
    const double u = s.fp / (s.f * s.f);
    const double v = s.fpp / (s.f * s.f * s.f);
    if (!(u > -1e-12 && u < -0.5 * (m + 2.0) + 1e-9)) return false;
    if (!(v > -1e-9 && v < -(m + 2.0) * u * (1.0 + 1e-6) + 1e-9)) return false;
  }
  return fp_shrinking_tail(traj);
}

// Unbounded-family tail for -2 < m < -1/2 (growth like t^((m+2)/(1-m)) cannot
// push |f'| below a fixed threshold at any practical horizon): f increasing,
// slope positive and shrinking, concavity intact, log-log slope sane.
bool unbounded_certificate(const Trajectory& traj) {
  const double m = traj.params.m;
  if (!(m > -2.0 && m < -0.5)) return false;
  if (traj.termination.kind != TerminationKind::reached_t_max) return false;
  const double T = traj.t_end();
  const State e = traj.eval(T);
  if (!(e.f > 0.0 && e.fp > 0.0 && e.fpp < 0.0)) return false;
  double fprev = -1e300;
  for (int i = 0; i <= 16; ++i) {
    const State s = traj.eval(0.75 * T + 0.25 * T * i / 16.0);
    if (!(s.f > 0.0 && s.fp > 0.0 && s.fpp < 0.0)) return false;
    if (!(s.f >= fprev)) return false;
    fprev = s.f;
  }
  const double slope = T * e.fp / e.f;
  if (!(slope > 0.005 && slope < 0.995)) return false;
  return fp_shrinking_tail(traj);
}

// Containment in {-(m+2)/2 < u < 0, 0 <= v < -(m+2) u} past the inflection,
// which is how concave-convex solutions are recognized when the tail decays
// like 2/t and the slope threshold is out of reach.
bool dminus_certificate(const Trajectory& traj, double t0) {
  const double m = traj.params.m;
  if (!(m > -0.5)) return false;
  if (traj.termination.kind != TerminationKind::reached_t_max) return false;
  const double T = traj.t_end();
  const double lo = t0 + 0.02 * (T - t0);
  if (!(lo < T)) return false;
  for (int i = 0; i <= 32; ++i) {
    const State s = traj.eval(lo + (T - lo) * i / 32.0);
    if (!(s.f > 0.0)) return false;
    const double u = s.fp / (s.f * s.f);
    const double v = s.fpp / (s.f * s.f * s.f);
    if (!(u < 1e-9 && u > -0.5 * (m + 2.0) * (1.0 + 1e-6) - 1e-9)) return false;
    if (!(v > -1e-9 && v < -(m + 2.0) * u * (1.0 + 1e-6) + 1e-9)) return false;
  }
  return true;
}

}  // namespace detail

Classification classify(const Trajectory& traj, double eps_far) {
  using namespace detail;
  const double m = traj.params.m;
  Classification cls;

  if (traj.termination.kind == TerminationKind::blowup) {
    cls.shape = Shape::rejected_blowup;
    std::ostringstream os;
    os << "blow-up at t=" << traj.termination.t;
    cls.reason = os.str();
    return cls;
  }

  const std::size_t n_fpp = traj.count_events(EventKind::fpp_zero);
  const std::size_t n_fp = traj.count_events(EventKind::fp_zero);

  auto settle_boundedness = [&](Classification& c) {
    const auto lim = lambda_limit(traj);
    if (lim.divergent) {
      c.boundedness = Boundedness{BoundednessKind::unbounded, 0.0};
    } else {
      c.boundedness = Boundedness{BoundednessKind::bounded, lim.lambda};
    }
  };

  if (n_fpp == 0) {
    if (n_fp > 0) {
      cls.shape = Shape::rejected_fp_vanishes;
      cls.reason = "f' vanished on a concave arc";
      return cls;
    }
    if (traj.termination.kind != TerminationKind::reached_t_max) {
      cls.shape = Shape::rejected_divergent_fp;
      cls.reason = "integration stopped before the horizon";
      return cls;
    }
    bool ok = strict_far_field(traj, eps_far);
    if (ok) {
      cls.reason = "far_field";
    } else if (dplus_certificate(traj)) {
      ok = true;
      cls.reason = "tail_certificate_negative_branch";
    } else if (unbounded_certificate(traj)) {
      ok = true;
      cls.reason = "tail_certificate_unbounded";
    }
    if (!ok) {
      cls.shape = Shape::rejected_divergent_fp;
      std::ostringstream os;
      os << "far field unresolved at horizon, |f'(T)|=" << std::abs(traj.states.back().fp);
      cls.reason = os.str();
      return cls;
    }
    cls.shape = Shape::concave;
    settle_boundedness(cls);
    return cls;
  }

  if (n_fpp == 1) {
    if (m <= -0.5) {
      cls.shape = Shape::rejected_divergent_fp;
      cls.reason = "convexity change in a strictly concave regime";
      return cls;
    }
    const Event ev = *traj.first_event(EventKind::fpp_zero);
    if (ev.state.fp > 0.0) {
      cls.shape = Shape::rejected_divergent_fp;
      cls.reason = "turned convex with positive slope";
      return cls;
    }
    for (const auto& e : traj.events) {
      if (e.kind == EventKind::fp_zero && e.t > ev.t + 1e-9) {
        cls.shape = Shape::rejected_divergent_fp;
        cls.reason = "slope crossed zero past the inflection";
        return cls;
      }
    }
    if (traj.termination.kind != TerminationKind::reached_t_max) {
      cls.shape = Shape::rejected_divergent_fp;
      cls.reason = "integration stopped before the horizon";
      return cls;
    }
    bool ok = strict_far_field(traj, eps_far);
    if (ok) {
      cls.reason = "far_field";
    } else if (dminus_certificate(traj, ev.t)) {
      ok = true;
      cls.reason = "tail_certificate_inflected";
    }
    if (!ok) {
      cls.shape = Shape::rejected_divergent_fp;
      cls.reason = "inflected tail unresolved at horizon";
      return cls;
    }
    cls.shape = Shape::concave_convex;
    settle_boundedness(cls);
    return cls;
  }

  cls.shape = Shape::rejected_divergent_fp;
  cls.reason = "multiple convexity changes";
  return cls;
}

Trajectory solve_ivp(const Params& p, double alpha, const ShootOptions& opts) {
  IvpSpec spec;
  spec.params = p;
  spec.alpha = alpha;
  spec.t_max = opts.t_max;
  spec.rel_tol = opts.rel_tol;
  spec.abs_tol = opts.abs_tol;
  spec.blowup_bound = opts.blowup_bound;
  Trajectory traj = integrate(spec);
  if (traj.termination.kind == TerminationKind::reached_t_max &&
      !detail::strict_far_field(traj, opts.eps_far) && detail::fp_shrinking_tail(traj)) {
    spec.t_max = 2.0 * opts.t_max;
    traj = integrate(spec);
  }
  return traj;
}

SolutionReport make_report(const Trajectory& traj, const ShootOptions& opts) {
  SolutionReport rep;
  rep.params = traj.params;
  rep.alpha = traj.alpha;
  rep.classification = classify(traj, opts.eps_far);
  rep.residual_far = std::abs(traj.states.back().fp);
  const double a = traj.t_begin(), b = traj.t_end();
  rep.identity_residuals = residuals(traj, std::min(a, b), std::max(a, b));
  if (rep.classification.boundedness.kind == BoundednessKind::bounded)
    rep.lambda_est = rep.classification.boundedness.lambda;
  return rep;
}

}  // namespace hfbl
