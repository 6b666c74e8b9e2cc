"""Wings-level trim: Newton iteration on (udot, wdot, qdot) over angle of
attack, tail deflection and thrust at a requested altitude and airspeed."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .aero import dimensionalize, lookup_coefficients
from .dynamics import AircraftState, atmosphere_sample, gravity_body
from .errors import TrimError

RAD2DEG = 180.0 / math.pi


@dataclass(frozen=True)
class TrimResult:
    alpha_rad: float
    tail_deg: float
    thrust_lbf: float
    state: AircraftState
    residual: float
    iterations: int


def _build_state(alpha_rad, tail_deg, altitude_ft, airspeed_fps):
    velocity = np.array([airspeed_fps * math.cos(alpha_rad), 0.0,
                         airspeed_fps * math.sin(alpha_rad)])
    return AircraftState(velocity=velocity,
                         omega=np.zeros(3),
                         euler=np.array([0.0, alpha_rad, 0.0]),
                         position=np.array([0.0, 0.0, -altitude_ft]),
                         surfaces=np.array([tail_deg, 0.0, 0.0]))


def _residual(x, altitude_ft, airspeed_fps, aircraft, tables):
    alpha_rad, tail_deg, thrust_lbf = x
    state = _build_state(alpha_rad, tail_deg, altitude_ft, airspeed_fps)
    sample = atmosphere_sample(state.velocity, altitude_ft)
    coeffs = lookup_coefficients(alpha_rad * RAD2DEG, 0.0, state.surfaces,
                                 state.omega, sample, tables, aircraft.geometry)
    force, moment = dimensionalize(coeffs, sample, aircraft.geometry)
    force = force + gravity_body(state.euler, aircraft.mass.weight_lbf)
    force = force + np.array([thrust_lbf, 0.0, 0.0])
    udot = force[0] / aircraft.mass.mass_slug
    wdot = force[2] / aircraft.mass.mass_slug
    qdot = (aircraft.mass.inertia_inv @ moment)[1]
    return np.array([udot, wdot, qdot]), state


def trim_level_flight(altitude_ft, airspeed_fps, aircraft, tables,
                      max_iterations: int = 50, tolerance: float = 1e-9) -> TrimResult:
    """Solve for (alpha, tail, thrust) holding wings-level equilibrium.

    Deterministic: fixed initial guess alpha=2 deg, tail=0, thrust=W/8.
    Raises TrimError on non-convergence or out-of-envelope conditions.
    """
    sample = atmosphere_sample(np.array([airspeed_fps, 0.0, 0.0]), altitude_ft)
    if sample.mach > float(tables.envelope["mach_max"]):
        raise TrimError(f"Mach {sample.mach:.3f} beyond table validity "
                        f"{tables.envelope['mach_max']}")
    if airspeed_fps <= 0.0:
        raise TrimError("airspeed must be positive")

    x = np.array([math.radians(2.0), 0.0, aircraft.mass.weight_lbf / 8.0])
    steps = np.array([1e-6, 1e-5, 1e-3])  # FD perturbations per unknown
    alpha_lo, alpha_hi = tables.alpha_range()

    residual, state = _residual(x, altitude_ft, airspeed_fps, aircraft, tables)
    norm = float(np.linalg.norm(residual))
    for iteration in range(1, max_iterations + 1):
        if norm < tolerance:
            return TrimResult(alpha_rad=float(x[0]), tail_deg=float(x[1]),
                              thrust_lbf=float(x[2]), state=state,
                              residual=norm, iterations=iteration - 1)
        jac = np.empty((3, 3))
        for j in range(3):
            bumped = x.copy()
            bumped[j] += steps[j]
            r_plus, _ = _residual(bumped, altitude_ft, airspeed_fps, aircraft, tables)
            jac[:, j] = (r_plus - residual) / steps[j]
        try:
            delta = np.linalg.solve(jac, -residual)
        except np.linalg.LinAlgError as exc:
            raise TrimError(f"singular trim Jacobian: {exc}", residual=norm,
                            iterations=iteration)
        scale = 1.0
        for _ in range(12):  # backtracking line search
            candidate = x + scale * delta
            if not alpha_lo <= candidate[0] * RAD2DEG <= alpha_hi:
                scale *= 0.5
                continue
            r_new, s_new = _residual(candidate, altitude_ft, airspeed_fps,
                                     aircraft, tables)
            n_new = float(np.linalg.norm(r_new))
            if n_new < norm or n_new < tolerance:
                x, residual, state, norm = candidate, r_new, s_new, n_new
                break
            scale *= 0.5
        else:
            raise TrimError("trim line search stalled", residual=norm,
                            iterations=iteration)
    if norm < tolerance:  # converged on the final iteration
        return TrimResult(alpha_rad=float(x[0]), tail_deg=float(x[1]),
                          thrust_lbf=float(x[2]), state=state,
                          residual=norm, iterations=max_iterations)
    raise TrimError(f"trim did not converge in {max_iterations} iterations",
                    residual=norm, iterations=max_iterations)
