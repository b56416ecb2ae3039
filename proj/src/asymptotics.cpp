#include "hfbl/asymptotics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hfbl {

namespace {

constexpr double kEpsFar = 1e-6;

std::vector<State> log_uniform_tail(const Trajectory& traj, double lo, double hi, int n) {
  std::vector<State> out;
  out.reserve(n);
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < n; ++i) {
    const double t = std::exp(la + (lb - la) * static_cast<double>(i) / (n - 1));
    out.push_back(traj.eval(std::min(t, hi)));
  }
  return out;
}

}  // namespace

TailFit tail_exponent(const Trajectory& traj) {
  if (traj.termination.kind != TerminationKind::reached_t_max)
    throw std::invalid_argument("tail_exponent: trajectory did not reach its horizon");
  if (traj.direction < 0)
    throw std::invalid_argument("tail_exponent: forward trajectories only");

  const auto lim = lambda_limit(traj);
  if (!lim.divergent)
    throw std::invalid_argument("tail_exponent: trajectory is not an unbounded candidate");

  const double T = traj.t_end();
  const double lo = 0.75 * T, hi = T;
  const int n = 64;
  const auto samples = log_uniform_tail(traj, lo, hi, n);
  for (const auto& s : samples)
    if (!(s.f > 0.0) || !(s.fp > 0.0))
      throw std::invalid_argument("tail_exponent: window is not increasing and positive");

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& s : samples) {
    const double x = std::log(s.t), y = std::log(s.f);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double nn = static_cast<double>(samples.size());
  const double vxx = sxx - sx * sx / nn;
  const double vxy = sxy - sx * sy / nn;
  const double vyy = syy - sy * sy / nn;

  TailFit fit;
  fit.window_lo = lo;
  fit.window_hi = hi;
  fit.exponent_est = vxy / vxx;
  fit.coeff_est = std::exp((sy - fit.exponent_est * sx) / nn);
  fit.r_squared = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
  fit.reliable = fit.r_squared >= 0.999;
  return fit;
}

double tail_coeff_fixed_exponent(const Trajectory& traj, double p) {
  const double T = traj.t_end();
  const auto samples = log_uniform_tail(traj, 0.75 * T, T, 64);
  double acc = 0.0;
  for (const auto& s : samples) acc += std::log(s.f) - p * std::log(s.t);
  return std::exp(acc / static_cast<double>(samples.size()));
}

DecayCheck decay_check_2_over_t(const Trajectory& traj) {
  const double m = traj.params.m;
  if (!(m > 1.0))
    throw std::invalid_argument("decay_check_2_over_t: requires m > 1");
  if (m <= 1.5) return DecayCheck{DecayCheck::Status::skipped_cycle_present, 0.0};

  if (traj.count_events(EventKind::fpp_zero) != 1)
    throw std::invalid_argument("decay_check_2_over_t: not a concave-convex trajectory");
  const double T = traj.t_end();
  const State tail = traj.eval(T);
  if (!(tail.f > 0.0) || !(tail.fp < 0.0))
    throw std::invalid_argument("decay_check_2_over_t: tail is not positive decreasing");

  DecayCheck out;
  const int n = 128;
  for (int i = 0; i <= n; ++i) {
    const double t = 0.5 * T + 0.5 * T * static_cast<double>(i) / n;
    const State s = traj.eval(t);
    out.max_rel_err = std::max(out.max_rel_err, std::abs(t * s.f - 2.0) / 2.0);
  }
  return out;
}

LambdaResult lambda_limit(const Trajectory& traj) {
  if (traj.termination.kind != TerminationKind::reached_t_max)
    throw std::invalid_argument("lambda_limit: far-field horizon not reached");

  const double T = traj.t_end();
  const double f1 = traj.eval(0.25 * T).f;
  const double f2 = traj.eval(0.5 * T).f;
  const double f3 = traj.eval(T).f;
  const double d1 = f2 - f1, d2 = f3 - f2;

  // Concave-solution ceiling; meaningful for m > -1 with a positive radicand.
  const double m = traj.params.m, g = traj.params.gamma, a = traj.alpha;
  if (m > -1.0) {
    const double rad = g * g + 2.0 * a / (m + 2.0);
    if (rad > 0.0) {
      const double ceiling = std::sqrt(rad);
      double fmax = 0.0;
      for (const auto& s : traj.states) fmax = std::max(fmax, s.f);
      if (fmax > ceiling * (1.0 + 1e-9) + 1e-12)
        return LambdaResult{true, 0.0};
    }
  }

  if (std::abs(d2) <= 10.0 * kEpsFar * std::max(1.0, std::abs(f3)))
    return LambdaResult{false, f3};
  if (std::abs(d1) == 0.0) return LambdaResult{false, f3};

  const double r = d2 / d1;
  if (std::abs(r) >= 0.99) return LambdaResult{true, 0.0};
  return LambdaResult{false, f3 + d2 * r / (1.0 - r)};
}

}  // namespace hfbl
