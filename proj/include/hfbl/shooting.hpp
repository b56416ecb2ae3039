#ifndef HFBL_SHOOTING_HPP
#define HFBL_SHOOTING_HPP

#include <optional>
#include <string>
#include <utility>

#include "hfbl/ode.hpp"
#include "hfbl/types.hpp"

namespace hfbl {

enum class Shape : std::uint8_t {
  concave,
  concave_convex,
  rejected_fp_vanishes,
  rejected_blowup,
  rejected_divergent_fp,
};

const char* to_string(Shape s);

enum class BoundednessKind : std::uint8_t { bounded, unbounded, not_applicable };

const char* to_string(BoundednessKind b);

struct Boundedness {
  BoundednessKind kind = BoundednessKind::not_applicable;
  double lambda = 0.0;  // limit of f, when bounded
};

struct Classification {
  Shape shape = Shape::rejected_divergent_fp;
  Boundedness boundedness;
  std::string reason;  // detail for rejections and tail-certified acceptance

  bool accepted() const {
    return shape == Shape::concave || shape == Shape::concave_convex;
  }
};

struct ShootOptions {
  double t_max = 50.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double blowup_bound = 1e8;
  double eps_far = 1e-6;
  double alpha_tol = 1e-10;
  double boundary_tol = 1e-8;  // alpha-interval endpoint refinement
  double probe_t_max = 200.0;  // horizon used inside existence predicates
};

/// Shape and boundedness verdict for a trajectory produced by integrate().
/// Far-field acceptance is |f'| and |f''| below eps_far at the horizon;
/// families with algebraically decaying tails (which cannot meet a fixed
/// threshold at any practical horizon) are accepted through regime-specific
/// tail certificates instead, with the certificate named in `reason`.
Classification classify(const Trajectory& traj, double eps_far = 1e-6);

struct SolutionReport {
  Params params;
  double alpha = 0.0;
  Classification classification;
  std::optional<double> lambda_est;
  double residual_far = 0.0;  // |f'(t_max)|
  Residuals identity_residuals;
};

SolutionReport make_report(const Trajectory& traj, const ShootOptions& opts = {});

/// Integrates the IVP watching all events; doubles the horizon once when the
/// far-field test is unresolved but |f'| is still shrinking.
Trajectory solve_ivp(const Params& p, double alpha, const ShootOptions& opts = {});

enum class ShootStatus : std::uint8_t { converged, no_sign_change, horizon_exhausted };

const char* to_string(ShootStatus s);

struct ShootResult {
  ShootStatus status = ShootStatus::converged;
  double alpha = 0.0;
  SolutionReport report;
};

/// Bisection for the canonical concave bounded solution, m > -1. The slope
/// dichotomy: too-small alpha loses f' before the far field, too-large alpha
/// turns convex with positive slope (m > -1/2) or outruns the concave ceiling
/// sqrt(gamma^2 + 2 alpha/(m+2)) (m <= -1/2).
ShootResult shoot_concave(const Params& p, std::pair<double, double> bracket,
                          const ShootOptions& opts = {});
ShootResult shoot_concave(const Params& p, const ShootOptions& opts = {});

enum class IntervalKind : std::uint8_t { empty, singleton, interval };

const char* to_string(IntervalKind k);

struct AlphaInterval {
  double lo = 0.0;
  double hi = 0.0;
  IntervalKind kind = IntervalKind::empty;
  bool hi_unbounded = false;  // [lo, infinity), the m = -1 family
};

/// Admissible slopes in the regimes with solution families:
/// m < -2, -2 < m < -1, m = -1 and m > 1.
AlphaInterval alpha_interval(const Params& p, const ShootOptions& opts = {});

/// Critical gamma by bisection on "alpha_interval is non-empty".
/// m < -2: solutions exist for gamma > gamma*; -2 < m < -1: for gamma < gamma*.
double gamma_star_shooting(double m, const ShootOptions& opts = {});

}  // namespace hfbl

#endif
