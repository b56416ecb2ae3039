#ifndef HFBL_ODE_HPP
#define HFBL_ODE_HPP

#include <functional>
#include <vector>

#include "hfbl/dopri5.hpp"
#include "hfbl/types.hpp"

namespace hfbl {

/// Value of f''' from the governing equation.
inline double rhs(const State& s, const Params& p) {
  return -(p.m + 2.0) * s.f * s.fpp + (2.0 * p.m + 1.0) * s.fp * s.fp;
}

enum class Direction : int { forward = +1, backward = -1 };

/// Extra hooks for callers that need more than the plain initial value run:
/// additional sign-change watchers (ids must be >= 100) and a stop predicate
/// evaluated at accepted steps.
struct IntegrateHooks {
  std::vector<Watcher<3>> extra_watchers;
  std::function<bool(double, const VecN<3>&)> stop_predicate;
};

struct CustomCrossing {
  int id = 0;
  double t = 0.0;
  State state;
};

Trajectory integrate(const IvpSpec& spec);
Trajectory integrate(const IvpSpec& spec, Direction dir);
Trajectory integrate(const IvpSpec& spec, Direction dir, const IntegrateHooks& hooks,
                     std::vector<CustomCrossing>* custom_out = nullptr);

/// Residuals of the three integral identities obtained by integrating the
/// equation against 1, t and f over [rho, r]; exact solutions give zero up to
/// integration and quadrature error.
Residuals residuals(const Trajectory& traj, double rho, double r);

/// Quadrature of g(state) over [a, b] on the dense output (per-step 5-point
/// Gauss-Legendre).
double quad_dense(const Trajectory& traj, double a, double b,
                  const std::function<double(const State&)>& g);

/// Initial step size scaled by the magnitude of the initial data.
inline double initial_step(const IvpSpec& spec) {
  return 1e-4 / (1.0 + std::abs(spec.alpha) + std::abs(spec.params.gamma));
}

}  // namespace hfbl

#endif
