"""Shooting and phase-plane solvers for the prescribed-flux boundary-layer
similarity equation f''' + (m+2) f f'' - (2m+1) f'^2 = 0 with f(0) = -gamma,
f''(0) = -1 and f' -> 0 at infinity."""

from ._core import (  # noqa: F401
    AlphaInterval,
    Boundedness,
    BoundednessKind,
    Classification,
    CycleProbe,
    Equilibrium,
    EquilibriumKind,
    Event,
    EventKind,
    GammaStarResult,
    IntervalKind,
    IvpSpec,
    LambdaResult,
    Params,
    PhaseCurve,
    PhasePoint,
    Residuals,
    SepCrossing,
    SeparatrixId,
    SeparatrixTrace,
    Shape,
    ShootOptions,
    ShootResult,
    ShootStatus,
    SolutionReport,
    State,
    TailFit,
    Termination,
    TerminationKind,
    Trajectory,
    alpha_interval,
    blasius_check,
    blowup_transform,
    classify,
    equilibria,
    explicit_m1,
    gamma_star_separatrix,
    gamma_star_shooting,
    integrate,
    integrate_backward,
    isocline_psi,
    lambda_limit,
    limit_cycle_probe,
    m1_eta,
    make_report,
    residuals,
    rhs,
    riccati_bounded,
    riccati_limit,
    riccati_residual,
    run_verify,
    shoot_concave,
    slope_field,
    solve_ivp,
    stability_thresholds,
    tail_exponent,
    trace_separatrix,
    translate_scale,
    unbounded_exponent,
    vector_field,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "1.0.0"
