#ifndef HFBL_DOPRI5_HPP
#define HFBL_DOPRI5_HPP

// Adaptive Dormand-Prince 5(4) pair with 4th-order continuous extension,
// PI step-size control and sign-change detection on user watcher functions.
// The dimension is a compile-time constant; the solver suite only needs
// N = 3 (the scalar ODE as a first-order system) and N = 2 (the plane system).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hfbl {

template <std::size_t N>
using VecN = std::array<double, N>;

enum class StopCause { reached_end, watcher_stop, predicate_stop, blowup, step_floor };

template <std::size_t N>
struct RkDenseStep {
  double t0 = 0.0;
  double h = 0.0;
  VecN<N> y0{}, rc2{}, rc3{}, rc4{}, rc5{};

  VecN<N> eval(double t) const {
    const double th = (t - t0) / h;
    const double om = 1.0 - th;
    VecN<N> y{};
    for (std::size_t i = 0; i < N; ++i)
      y[i] = y0[i] + th * (rc2[i] + om * (rc3[i] + th * (rc4[i] + om * rc5[i])));
    return y;
  }
};

/// Scalar function whose sign changes are bracketed on accepted steps and
/// refined on the dense interpolant. A crossing at a step endpoint is
/// reported at the endpoint itself.
template <std::size_t N>
struct Watcher {
  int id = 0;
  std::function<double(double, const VecN<N>&)> g;
  bool stop = false;
};

template <std::size_t N>
struct Crossing {
  int id = 0;
  double t = 0.0;
  VecN<N> y{};
};

template <std::size_t N>
struct RkOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double h0 = 1e-4;
  double h_floor = 1e-14;
  double blowup_bound = 1e8;  // guard on max |y_i|; <= 0 disables
  std::size_t max_steps = 2'000'000;
  std::vector<Watcher<N>> watchers;
  // Checked at accepted step endpoints only.
  std::function<bool(double, const VecN<N>&)> stop_predicate;
};

template <std::size_t N>
struct RkResult {
  std::vector<double> ts;
  std::vector<VecN<N>> ys;
  std::vector<RkDenseStep<N>> steps;
  std::vector<Crossing<N>> crossings;
  StopCause cause = StopCause::reached_end;
  double t_stop = 0.0;
  int stop_watcher = -1;  // id of the watcher that stopped the run

  VecN<N> eval(double t) const {
    if (steps.empty()) return ys.front();
    // Steps are ordered in integration direction; locate by binary search.
    const double dir = steps.front().h > 0 ? 1.0 : -1.0;
    std::size_t lo = 0, hi = steps.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if ((t - (steps[mid].t0 + steps[mid].h)) * dir > 0.0)
        lo = mid + 1;
      else
        hi = mid;
    }
    return steps[lo].eval(t);
  }
};

namespace detail {

// Dormand-Prince RK5(4)7M tableau.
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                        a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                        b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous-extension weights.
inline constexpr double d1 = -12715105075.0 / 11282082432.0;
inline constexpr double d3 = 87487479700.0 / 32700410799.0;
inline constexpr double d4 = -10690763975.0 / 1880347072.0;
inline constexpr double d5 = 701980252875.0 / 199316789632.0;
inline constexpr double d6 = -1453857185.0 / 822651844.0;
inline constexpr double d7 = 69997945.0 / 29380423.0;

template <std::size_t N>
bool finite(const VecN<N>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace detail

/// Integrate y' = f(t, y) from t0 to t_end (either direction).
template <std::size_t N, class RHS>
RkResult<N> dopri5(RHS&& f, double t0, const VecN<N>& y_init, double t_end,
                   const RkOptions<N>& opt) {
  using namespace detail;
  if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0))
    throw std::invalid_argument("dopri5: tolerances must be positive");
  if (t_end == t0) throw std::invalid_argument("dopri5: empty integration range");

  const double dir = t_end > t0 ? 1.0 : -1.0;

  RkResult<N> res;
  res.ts.push_back(t0);
  res.ys.push_back(y_init);

  double t = t0;
  VecN<N> y = y_init;
  VecN<N> k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, ytmp{}, y1{};
  f(t, y, k1);
  if (!finite(k1)) throw std::invalid_argument("dopri5: initial state not finite");

  // Watcher values at the left endpoint of the current step.
  std::vector<double> gprev(opt.watchers.size());
  for (std::size_t w = 0; w < opt.watchers.size(); ++w) {
    gprev[w] = opt.watchers[w].g(t, y);
    if (gprev[w] == 0.0) {
      res.crossings.push_back({opt.watchers[w].id, t, y});
      if (opt.watchers[w].stop) {
        res.cause = StopCause::watcher_stop;
        res.t_stop = t;
        res.stop_watcher = opt.watchers[w].id;
        return res;
      }
    }
  }

  double h = dir * std::min(std::abs(opt.h0), std::abs(t_end - t0));
  double facold = 1e-4;
  const double safe = 0.9, beta = 0.04;
  const double expo1 = 0.2 - beta * 0.75;
  const double facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;

  bool last = false;
  std::size_t nstep = 0;
  bool rejected = false;

  while (!last) {
    if (++nstep > opt.max_steps)
      throw std::runtime_error("dopri5: step budget exceeded");
    if ((t + h - t_end) * dir >= 0.0) {
      h = t_end - t;
      last = true;
    }
    if (std::abs(h) < opt.h_floor) {
      res.cause = StopCause::step_floor;
      res.t_stop = t;
      return res;
    }

    auto stage = [&](const VecN<N>& yy, double tt, VecN<N>& kk) {
      f(tt, yy, kk);
      return finite(kk);
    };

    bool ok = true;
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    ok = ok && stage(ytmp, t + c2 * h, k2);
    if (ok) {
      for (std::size_t i = 0; i < N; ++i)
        ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      ok = stage(ytmp, t + c3 * h, k3);
    }
    if (ok) {
      for (std::size_t i = 0; i < N; ++i)
        ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      ok = stage(ytmp, t + c4 * h, k4);
    }
    if (ok) {
      for (std::size_t i = 0; i < N; ++i)
        ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      ok = stage(ytmp, t + c5 * h, k5);
    }
    if (ok) {
      for (std::size_t i = 0; i < N; ++i)
        ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                              a65 * k5[i]);
      ok = stage(ytmp, t + h, k6);
    }
    if (ok) {
      for (std::size_t i = 0; i < N; ++i)
        y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      ok = stage(y1, t + h, k7);
    }

    if (!ok) {
      // A stage went non-finite: shrink hard and retry.
      h *= 0.25;
      last = false;
      rejected = true;
      continue;
    }

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / static_cast<double>(N));

    const double fac11 = std::pow(err, expo1);
    if (err <= 1.0) {
      // Accepted: store dense coefficients and scan watchers.
      RkDenseStep<N> ds;
      ds.t0 = t;
      ds.h = h;
      ds.y0 = y;
      for (std::size_t i = 0; i < N; ++i) {
        const double dy = y1[i] - y[i];
        ds.rc2[i] = dy;
        ds.rc3[i] = h * k1[i] - dy;
        ds.rc4[i] = dy - h * k7[i] - ds.rc3[i];
        ds.rc5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                         d7 * k7[i]);
      }
      res.steps.push_back(ds);

      const double t1 = t + h;
      bool stop_here = false;
      double t_cut = t1;
      int cut_id = -1;

      for (std::size_t w = 0; w < opt.watchers.size(); ++w) {
        const double g1 = opt.watchers[w].g(t1, y1);
        double tev = 0.0;
        bool found = false;
        if (g1 == 0.0 && gprev[w] != 0.0) {
          tev = t1;
          found = true;
        } else if (gprev[w] != 0.0 && gprev[w] * g1 < 0.0) {
          // Bisection on the dense interpolant, to 1e-12 in t.
          double ta = t, tb = t1, ga = gprev[w];
          for (int it = 0; it < 200 && std::abs(tb - ta) > 1e-12; ++it) {
            const double tm = 0.5 * (ta + tb);
            const double gm = opt.watchers[w].g(tm, ds.eval(tm));
            if (gm == 0.0) {
              ta = tb = tm;
              break;
            }
            if (ga * gm < 0.0)
              tb = tm;
            else {
              ta = tm;
              ga = gm;
            }
          }
          tev = 0.5 * (ta + tb);
          found = true;
        }
        gprev[w] = g1;
        if (found) {
          res.crossings.push_back({opt.watchers[w].id, tev, tev == t1 ? y1 : ds.eval(tev)});
          if (opt.watchers[w].stop && (!stop_here || (tev - t_cut) * dir < 0.0)) {
            stop_here = true;
            t_cut = tev;
            cut_id = opt.watchers[w].id;
          }
        }
      }

      if (stop_here) {
        // Drop crossings past the stopping point, then truncate the state list.
        std::vector<Crossing<N>> kept;
        for (auto& c : res.crossings)
          if ((c.t - t_cut) * dir <= 1e-12) kept.push_back(c);
        res.crossings = std::move(kept);
        res.ts.push_back(t_cut);
        res.ys.push_back(t_cut == t1 ? y1 : ds.eval(t_cut));
        res.cause = StopCause::watcher_stop;
        res.t_stop = t_cut;
        res.stop_watcher = cut_id;
        return res;
      }

      res.ts.push_back(t1);
      res.ys.push_back(y1);
      t = t1;
      y = y1;
      k1 = k7;  // first-same-as-last

      if (opt.blowup_bound > 0.0) {
        double amax = 0.0;
        for (double v : y) amax = std::max(amax, std::abs(v));
        if (amax > opt.blowup_bound) {
          res.cause = StopCause::blowup;
          res.t_stop = t;
          return res;
        }
      }
      if (opt.stop_predicate && opt.stop_predicate(t, y)) {
        res.cause = StopCause::predicate_stop;
        res.t_stop = t;
        return res;
      }

      double fac = fac11 / std::pow(facold, beta);
      fac = std::max(facc2, std::min(facc1, fac / safe));
      double hnew = h / fac;
      if (rejected) hnew = dir * std::min(std::abs(hnew), std::abs(h));
      h = hnew;
      facold = std::max(err, 1e-4);
      rejected = false;
    } else {
      h = h / std::min(facc1, fac11 / safe);
      rejected = true;
      last = false;
    }
  }

  res.cause = StopCause::reached_end;
  res.t_stop = t_end;
  return res;
}

}  // namespace hfbl

#endif
