#ifndef HFBL_PHASE_HPP
#define HFBL_PHASE_HPP

// The plane autonomous system obtained from the blowing-up change of
// variables s = integral of f, u = f'/f^2, v = f''/f^3:
//   u' = P(u, v)   = v - 2u^2
//   v' = Q_m(u, v) = -(m+2) v + (2m+1) u^2 - 3 u v
// with singular points O = (0,0) (saddle-node) and A = (-1/2, 1/2).

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "hfbl/dopri5.hpp"
#include "hfbl/types.hpp"

namespace hfbl {

struct PhasePoint {
  double s = 0.0;
  double u = 0.0;
  double v = 0.0;
};

struct PhaseCurve {
  std::vector<PhasePoint> points;
};

inline std::pair<double, double> vector_field(double m, double u, double v) {
  return {v - 2.0 * u * u, -(m + 2.0) * v + (2.0 * m + 1.0) * u * u - 3.0 * u * v};
}

/// Height of the Q_m = 0 isocline: Psi_m(u) = (2m+1) u^2 / (3u + m + 2).
double isocline_psi(double m, double u);

/// Slope field Q_m / P away from the parabola v = 2u^2.
double slope_field(double m, double u, double v);

enum class EquilibriumKind : std::uint8_t {
  unstable_node,
  unstable_focus,
  center,
  stable_focus,
  stable_node,
  saddle_node,
};

const char* to_string(EquilibriumKind k);

struct Equilibrium {
  double u = 0.0, v = 0.0;
  std::complex<double> lambda1, lambda2;
  EquilibriumKind kind = EquilibriumKind::saddle_node;
};

/// Classified singular points (O, A); throws for m = -2 where O degenerates.
std::pair<Equilibrium, Equilibrium> equilibria(double m);

/// Focus-transition thresholds of A: (3 - 2 sqrt 6)/2, 3/2, (3 + 2 sqrt 6)/2.
std::array<double, 3> stability_thresholds();

/// The hyperbolic tangent line L = span{(1, -(m+2))} and the center tangent
/// L0 = span{(1, 0)} at O.
inline std::array<double, 2> tangent_L(double m) { return {1.0, -(m + 2.0)}; }
inline std::array<double, 2> tangent_L0(double) { return {1.0, 0.0}; }

enum class SeparatrixId : std::uint8_t { S0, S1, S2, C3 };

const char* to_string(SeparatrixId id);

/// Direction of the trace in the plane-system time s.
enum class TraceDir : std::uint8_t { forward, backward };

/// The s-direction that moves away from O along the given branch: the usable
/// tracing direction (tracing into a saddle-node is ill-conditioned).
TraceDir away_direction(double m, SeparatrixId which);

enum class CrossLine : std::uint8_t { q_isocline, p_isocline, u_axis, v_axis, line_L };

const char* to_string(CrossLine line);

struct SepCrossing {
  CrossLine line;
  double s = 0.0;
  double u = 0.0;
  double v = 0.0;
};

struct SeparatrixTrace {
  SeparatrixId which = SeparatrixId::S0;
  TraceDir dir = TraceDir::forward;
  double m = 0.0;
  double seed_offset = 0.0;
  std::array<double, 2> tangent{};  // line the branch leaves along (L or L0)
  std::vector<PhasePoint> points;
  std::vector<SepCrossing> crossings;
};

struct TraceOptions {
  double seed_offset = 1e-6;
  double s_span = 400.0;
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double blowup_bound = 1e6;
  double o_capture_radius = 1e-8;  // stop when re-approaching O this closely
  bool stop_at_q_crossing = false;
};

/// Seeds seed_offset away from O along the branch tangent (with the local
/// quadratic correction of the invariant manifold) and integrates the plane
/// system, recording crossings of both isoclines, both axes and the line
/// v = -(m+2) u. Throws for m = -2.
SeparatrixTrace trace_separatrix(double m, SeparatrixId which, TraceDir dir,
                                 const TraceOptions& opts = {});

inline SeparatrixTrace trace_separatrix(double m, SeparatrixId which,
                                        const TraceOptions& opts = {}) {
  return trace_separatrix(m, which, away_direction(m, which), opts);
}

/// Pushes a trajectory with sign-definite f through the blowing-up transform,
/// starting the s-clock at tau. When f < 0 the s-values decrease as t grows;
/// the curve records s as computed.
PhaseCurve blowup_transform(const Trajectory& traj, double tau);

struct GammaStarResult {
  double m = 0.0;
  double u_star = 0.0;
  double v_star = 0.0;
  double gamma_star = 0.0;
};

/// Critical gamma from the first intersection of the S0 branch with the
/// Q_m = 0 isocline: gamma* = v*^(-1/3). Valid for m < -2 and -2 < m < -1.
/// The seed offset is halved-decade checked (1e-6 against 1e-7); disagreement
/// beyond 1e-4 raises.
GammaStarResult gamma_star_separatrix(double m, const TraceOptions& opts = {});

struct CycleProbe {
  enum class Verdict : std::uint8_t {
    cycle,
    spiral_in,
    spiral_out,
    center_like,
    no_return,
  };
  Verdict verdict = Verdict::no_return;
  double v_fixed = 0.0;  // fixed point of the return map, when a cycle is found
  std::vector<std::pair<double, double>> section;  // (v, R(v)) samples
};

const char* to_string(CycleProbe::Verdict v);

struct CycleProbeOptions {
  double v_lo = 0.55;
  double v_hi = 1.45;
  int samples = 13;
  double s_span = 2000.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
};

/// First-return map on the section u = -1/2, v in (1/2, 3/2), crossings taken
/// with P > 0. Requires m > 1.
CycleProbe limit_cycle_probe(double m, const CycleProbeOptions& opts = {});

/// Plane-system orbit from (u0, v0) over [s0, s1] with dense output,
/// integrated with the same adaptive scheme as the scalar problem.
RkResult<2> integrate_plane(double m, double u0, double v0, double s0, double s1,
                            double rel_tol = 1e-12, double abs_tol = 1e-14,
                            double blowup_bound = 1e8);

}  // namespace hfbl

#endif
