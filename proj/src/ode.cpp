#include "hfbl/ode.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hfbl {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::fp_zero: return "fp_zero";
    case EventKind::fpp_zero: return "fpp_zero";
    case EventKind::f_zero: return "f_zero";
  }
  return "?";
}

const char* to_string(TerminationKind k) {
  switch (k) {
    case TerminationKind::reached_t_max: return "reached_t_max";
    case TerminationKind::blowup: return "blowup";
    case TerminationKind::event_stop: return "event_stop";
  }
  return "?";
}

bool EventSet::contains(EventKind k) const {
  switch (k) {
    case EventKind::fp_zero: return fp_zero;
    case EventKind::fpp_zero: return fpp_zero;
    case EventKind::f_zero: return f_zero;
  }
  return false;
}

bool Trajectory::contains_time(double t) const {
  const double a = t_begin(), b = t_end();
  return direction > 0 ? (t >= a && t <= b) : (t <= a && t >= b);
}

State Trajectory::eval(double t) const {
  if (!contains_time(t)) throw std::out_of_range("Trajectory::eval: t outside range");
  if (steps.empty()) return states.front();
  const double dir = static_cast<double>(direction);
  std::size_t lo = 0, hi = steps.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if ((t - (steps[mid].t0 + steps[mid].h)) * dir > 0.0)
      lo = mid + 1;
    else
      hi = mid;
  }
  const auto y = steps[lo].eval(t);
  return State{t, y[0], y[1], y[2]};
}

bool Trajectory::has_event(EventKind k) const {
  for (const auto& e : events)
    if (e.kind == k) return true;
  return false;
}

std::optional<Event> Trajectory::first_event(EventKind k) const {
  for (const auto& e : events)
    if (e.kind == k) return e;
  return std::nullopt;
}

std::size_t Trajectory::count_events(EventKind k) const {
  std::size_t n = 0;
  for (const auto& e : events)
    if (e.kind == k) ++n;
  return n;
}

namespace {

int watcher_id(EventKind k) { return static_cast<int>(k); }

EventKind kind_from_id(int id) { return static_cast<EventKind>(id); }

}  // namespace

Trajectory integrate(const IvpSpec& spec) { return integrate(spec, Direction::forward); }

Trajectory integrate(const IvpSpec& spec, Direction dir) {
  return integrate(spec, dir, IntegrateHooks{});
}

Trajectory integrate(const IvpSpec& spec, Direction dir, const IntegrateHooks& hooks,
                     std::vector<CustomCrossing>* custom_out) {
  if (!(spec.t_max > 0.0)) throw std::invalid_argument("integrate: t_max must be positive");
  if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0))
    throw std::invalid_argument("integrate: tolerances must be positive");
  if (!std::isfinite(spec.params.m) || !std::isfinite(spec.params.gamma) ||
      !std::isfinite(spec.alpha))
    throw std::invalid_argument("integrate: parameters must be finite");

  const Params p = spec.params;
  auto f = [p](double, const VecN<3>& y, VecN<3>& dy) {
    dy[0] = y[1];
    dy[1] = y[2];
    dy[2] = -(p.m + 2.0) * y[0] * y[2] + (2.0 * p.m + 1.0) * y[1] * y[1];
  };

  RkOptions<3> opt;
  opt.rel_tol = spec.rel_tol;
  opt.abs_tol = spec.abs_tol;
  opt.h0 = initial_step(spec);
  opt.blowup_bound = spec.blowup_bound;
  opt.stop_predicate = hooks.stop_predicate;

  auto add_watch = [&](EventKind k, int comp) {
    if (!spec.events.contains(k)) return;
    Watcher<3> w;
    w.id = watcher_id(k);
    w.g = [comp](double, const VecN<3>& y) { return y[comp]; };
    w.stop = spec.stop_on.contains(k);
    opt.watchers.push_back(std::move(w));
  };
  add_watch(EventKind::f_zero, 0);
  add_watch(EventKind::fp_zero, 1);
  add_watch(EventKind::fpp_zero, 2);
  for (const auto& w : hooks.extra_watchers) {
    if (w.id < 100) throw std::invalid_argument("integrate: extra watcher ids must be >= 100");
    opt.watchers.push_back(w);
  }

  const State s0 = spec.initial_state();
  const double t_end = (dir == Direction::forward ? spec.t_max : -spec.t_max);
  auto r = dopri5<3>(f, 0.0, VecN<3>{s0.f, s0.fp, s0.fpp}, t_end, opt);

  Trajectory traj;
  traj.params = p;
  traj.alpha = spec.alpha;
  traj.direction = static_cast<int>(dir);
  traj.states.reserve(r.ts.size());
  for (std::size_t i = 0; i < r.ts.size(); ++i)
    traj.states.push_back(State{r.ts[i], r.ys[i][0], r.ys[i][1], r.ys[i][2]});
  traj.steps.reserve(r.steps.size());
  for (const auto& st : r.steps) {
    DenseStep d;
    d.t0 = st.t0;
    d.h = st.h;
    d.y0 = st.y0;
    d.rc2 = st.rc2;
    d.rc3 = st.rc3;
    d.rc4 = st.rc4;
    d.rc5 = st.rc5;
    traj.steps.push_back(d);
  }
  for (const auto& c : r.crossings) {
    const State s{c.t, c.y[0], c.y[1], c.y[2]};
    if (c.id < 100)
      traj.events.push_back(Event{kind_from_id(c.id), c.t, s});
    else if (custom_out)
      custom_out->push_back(CustomCrossing{c.id, c.t, s});
  }

  switch (r.cause) {
    case StopCause::reached_end:
      traj.termination = Termination{TerminationKind::reached_t_max, t_end, std::nullopt};
      break;
    case StopCause::blowup:
    case StopCause::step_floor:
      traj.termination = Termination{TerminationKind::blowup, r.t_stop, std::nullopt};
      break;
    case StopCause::watcher_stop:
      traj.termination =
          Termination{TerminationKind::event_stop, r.t_stop,
                      r.stop_watcher < 100
                          ? std::optional<EventKind>(kind_from_id(r.stop_watcher))
                          : std::nullopt};
      break;
    case StopCause::predicate_stop:
      traj.termination = Termination{TerminationKind::event_stop, r.t_stop, std::nullopt};
      break;
  }
  return traj;
}

namespace {

// 5-point Gauss-Legendre on [0, 1].
constexpr double gl_x[5] = {0.046910077030668004, 0.23076534494715845, 0.5,
                            0.76923465505284155, 0.95308992296933200};
constexpr double gl_w[5] = {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                            0.23931433524968324, 0.11846344252809454};

}  // namespace

double quad_dense(const Trajectory& traj, double a, double b,
                  const std::function<double(const State&)>& g) {
  if (a == b) return 0.0;
  if (!traj.contains_time(a) || !traj.contains_time(b))
    throw std::out_of_range("quad_dense: interval outside trajectory range");
  const double sign = b >= a ? 1.0 : -1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  double sum = 0.0;
  for (const auto& st : traj.steps) {
    double s0 = st.t0, s1 = st.t0 + st.h;
    if (s1 < s0) std::swap(s0, s1);
    const double x0 = std::max(s0, lo), x1 = std::min(s1, hi);
    if (x1 <= x0) continue;
    const double w = x1 - x0;
    for (int q = 0; q < 5; ++q) {
      const double t = x0 + gl_x[q] * w;
      const auto y = st.eval(t);
      sum += gl_w[q] * w * g(State{t, y[0], y[1], y[2]});
    }
  }
  return sign * sum;
}

Residuals residuals(const Trajectory& traj, double rho, double r) {
  if (rho == r) return Residuals{0.0, 0.0, 0.0};
  if (rho > r) throw std::out_of_range("residuals: need rho < r");
  if (!traj.contains_time(rho) || !traj.contains_time(r))
    throw std::out_of_range("residuals: interval outside trajectory range");

  const double m = traj.params.m;
  const State sr = traj.eval(r), sp = traj.eval(rho);

  const double i1 = quad_dense(traj, rho, r, [](const State& s) { return s.fp * s.fp; });
  const double i2 = quad_dense(traj, rho, r, [](const State& s) { return s.t * s.fp * s.fp; });
  const double i3 =
      quad_dense(traj, rho, r, [](const State& s) { return s.f * s.fp * s.fp; });

  const double lhs1 =
      sr.fpp - sp.fpp + (m + 2.0) * (sr.f * sr.fp - sp.f * sp.fp);
  const double lhs2 = sr.t * sr.fpp - sp.t * sp.fpp - sr.fp + sp.fp +
                      (m + 2.0) * (sr.t * sr.f * sr.fp - sp.t * sp.f * sp.fp) -
                      0.5 * (m + 2.0) * (sr.f * sr.f - sp.f * sp.f);
  const double lhs3 = sr.f * sr.fpp - sp.f * sp.fpp - 0.5 * (sr.fp * sr.fp - sp.fp * sp.fp) +
                      (m + 2.0) * (sr.f * sr.f * sr.fp - sp.f * sp.f * sp.fp);

  Residuals out;
  out.r1 = std::abs(lhs1 - 3.0 * (m + 1.0) * i1);
  out.r2 = std::abs(lhs2 - 3.0 * (m + 1.0) * i2);
  out.r3 = std::abs(lhs3 - (4.0 * m + 5.0) * i3);
  return out;
}

}  // namespace hfbl
