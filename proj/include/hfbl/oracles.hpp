#ifndef HFBL_ORACLES_HPP
#define HFBL_ORACLES_HPP

// Closed-form and semi-analytic reference solutions: the Riccati family at
// m = -1, the explicit solution at m = 1, the Blasius specialization at
// m = -1/2 and the translation/scaling construction from a gamma = 0 solution.

#include "hfbl/types.hpp"

namespace hfbl {

/// First-integral coefficients at m = -1: f' + f^2/2 = c t + d.
struct RiccatiParams {
  double gamma = 0.0;
  double c = 0.0;  // -1 - gamma * f'(0)
  double d = 0.0;  // f'(0) + gamma^2 / 2

  static RiccatiParams from(double gamma, double alpha) {
    return {gamma, -1.0 - gamma * alpha, alpha + 0.5 * gamma * gamma};
  }
  /// Bounded-branch instance: f'(0) = -1/gamma, hence c = 0.
  static RiccatiParams bounded(double gamma) {
    return from(gamma, -1.0 / gamma);
  }
};

/// Closed-form bounded solution at m = -1 (gamma < 0), with f'(0) = -1/gamma.
State riccati_bounded(double gamma, double t);

/// f(infinity) of the bounded m = -1 solution: sqrt(2d), d = -1/gamma + gamma^2/2.
double riccati_limit(double gamma);

/// Max over recorded states of |f' + f^2/2 - (c t + d)|; holds for every
/// m = -1 solution, bounded or not. Throws unless traj.params.m == -1.
double riccati_residual(const Trajectory& traj);

/// Parameters of the explicit m = 1 solution.
struct ExplicitM1 {
  double gamma = 0.0;
  double eta = 0.0;  // unique positive root of 9 eta^3 + 9 gamma eta^2 - 1 = 0

  double alpha() const { return 1.0 / (3.0 * eta); }          // f'(0)
  double limit() const { return 1.0 / (9.0 * eta * eta) - gamma; }  // f(infinity)
};

/// Unique positive root of 9 eta^3 + 9 gamma eta^2 - 1 = 0, to 1e-14.
double m1_eta(double gamma);

/// Closed-form concave solution at m = 1.
State explicit_m1(double gamma, double t);

/// Max residual of f''' + (3/2) f f'' along an m = -1/2 trajectory, with f'''
/// estimated by finite differences on the dense output (independent of the
/// right-hand side used to integrate). Throws unless traj.params.m == -1/2.
double blasius_check(const Trajectory& traj);

/// Equivalent problem produced by f(t) = k g(k t + t0) from a concave
/// gamma = 0 solution g, choosing t0 with g(t0)^3 / g''(t0) = target_gamma^3.
/// `forward` must start at t = 0; `backward` (negative t) is consulted for
/// target_gamma > 0 and may be empty otherwise.
IvpSpec translate_scale(const Trajectory& forward, const Trajectory& backward,
                        double target_gamma);

}  // namespace hfbl

#endif
