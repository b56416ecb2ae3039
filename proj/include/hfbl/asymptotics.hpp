#ifndef HFBL_ASYMPTOTICS_HPP
#define HFBL_ASYMPTOTICS_HPP

// Tail diagnostics: power-law fits for unbounded solutions, the 2/t decay
// check for concave-convex solutions past the focus transition, and limit
// estimation by extrapolation over dyadic checkpoints.

#include "hfbl/types.hpp"

namespace hfbl {

struct TailFit {
  double exponent_est = 0.0;
  double coeff_est = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double r_squared = 0.0;
  bool reliable = true;  // false when r_squared < 0.999
};

/// Least-squares slope of log f against log t over the last quarter of the
/// trajectory, resampled log-uniformly from the dense output (>= 50 points).
/// Requires an unbounded-candidate shape: reached t_max, f positive and
/// increasing on the window, f' positive and decreasing.
TailFit tail_exponent(const Trajectory& traj);

/// Coefficient fit with the exponent pinned: c = exp(mean(log f - p log t)).
double tail_coeff_fixed_exponent(const Trajectory& traj, double p);

/// Expected power (m+2)/(1-m) for unbounded tails.
inline double unbounded_exponent(double m) { return (m + 2.0) / (1.0 - m); }

struct DecayCheck {
  enum class Status { ok, skipped_cycle_present };
  Status status = Status::ok;
  double max_rel_err = 0.0;  // max over [t_max/2, t_max] of |t f(t) - 2| / 2
};

/// Checks f ~ 2/t on the tail of a concave-convex solution for m > 3/2.
/// For 1 < m <= 3/2 the probe is skipped (a cycle surrounds the focus).
DecayCheck decay_check_2_over_t(const Trajectory& traj);

struct LambdaResult {
  bool divergent = false;
  double lambda = 0.0;
};

/// Limit of f at the horizon, extrapolated over the last three dyadic
/// checkpoints t_max, t_max/2, t_max/4. Reports divergent when the increments
/// do not contract, or when f exceeds the concave-solution ceiling
/// sqrt(gamma^2 + 2 alpha/(m+2)) in the regimes where that ceiling applies.
LambdaResult lambda_limit(const Trajectory& traj);

}  // namespace hfbl

#endif
