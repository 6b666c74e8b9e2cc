"""Single-loop incremental-inversion angular rate controller.

The control law computes an increment of surface deflection from the error
between the commanded and the estimated current angular acceleration, mapped
through the inverse of the state-dependent input matrix, and adds it to the
last applied command. Angular acceleration is estimated by low-pass filtered
differentiation of the measured rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

RAD2DEG = 180.0 / math.pi


@dataclass(frozen=True)
class IndiGains:
    """Per-axis error-to-acceleration gains, 1/s."""

    kp: float
    kq: float
    kr: float

    def __post_init__(self):
        if min(self.kp, self.kq, self.kr) <= 0.0:
            raise ConfigError("rate-loop gains must be strictly positive", field="indi")

    def as_array(self) -> np.ndarray:
        return np.array([self.kp, self.kq, self.kr])


def virtual_input(rate_cmd, omega, gains: IndiGains) -> np.ndarray:
    """Commanded angular acceleration diag(K) (omega_cmd - omega), rad/s^2."""
    return gains.as_array() * (np.asarray(rate_cmd, float) - np.asarray(omega, float))


def indi_increment(vdot_cmd, vdot_current, delta_current_deg, g_matrix,
                   pos_limits_deg, cond_limit: float = 1e6):
    """One incremental inversion step.

    delta = g^-1 (vdot_cmd - vdot_current) + delta_current, then clamped to the
    actuator position bands. ``g_matrix`` maps surface deflection (rad) to
    angular acceleration (rad/s^2). An ill-conditioned or rank-deficient input
    map falls back to the pseudo-inverse; the flag in the result reports it.

    Returns (clamped surface commands deg, used_pinv).
    """
    g = np.asarray(g_matrix, float)
    err = np.asarray(vdot_cmd, float) - np.asarray(vdot_current, float)
    used_pinv = False
    try:
        if np.linalg.cond(g) > cond_limit:
            raise np.linalg.LinAlgError("ill-conditioned input map")
        increment_rad = np.linalg.solve(g, err)
    except np.linalg.LinAlgError:
        increment_rad = np.linalg.pinv(g) @ err
        used_pinv = True
    delta_deg = np.asarray(delta_current_deg, float) + increment_rad * RAD2DEG
    lo = np.array([lim[0] for lim in pos_limits_deg])
    hi = np.array([lim[1] for lim in pos_limits_deg])
    return np.clip(delta_deg, lo, hi), used_pinv


class SecondOrderFilter:
    """Discrete low-pass (bilinear transform of wn^2/(s^2+2 zeta wn s+wn^2)).

    Unity dc gain; operates elementwise on fixed-length vectors. State is a
    direct-form-II-transposed pair per element.
    """

    def __init__(self, natural_freq_radps: float, damping: float, dt: float, size: int = 3):
        if natural_freq_radps <= 0.0 or damping <= 0.0 or dt <= 0.0:
            raise ConfigError("filter parameters must be positive", field="indi.filter")
        k = 2.0 / dt
        wn2 = natural_freq_radps ** 2
        den = k * k + 2.0 * damping * natural_freq_radps * k + wn2
        self.b0 = wn2 / den
        self.b1 = 2.0 * wn2 / den
        self.b2 = wn2 / den
        self.a1 = (2.0 * wn2 - 2.0 * k * k) / den
        self.a2 = (k * k - 2.0 * damping * natural_freq_radps * k + wn2) / den
        self.z1 = np.zeros(size)
        self.z2 = np.zeros(size)

    def reset(self):
        self.z1[:] = 0.0
        self.z2[:] = 0.0

    def prime(self, x0):
        """Set the internal state to the steady response for constant x0."""
        x0 = np.asarray(x0, float)
        self.z2 = (self.b2 - self.a2) * x0
        self.z1 = (self.b1 - self.a1) * x0 + self.z2

    def step(self, x) -> np.ndarray:
        x = np.asarray(x, float)
        y = self.b0 * x + self.z1
        self.z1 = self.b1 * x - self.a1 * y + self.z2
        self.z2 = self.b2 * x - self.a2 * y
        return y


class OmegaDotEstimator:
    """Filtered backward-difference estimate of angular acceleration."""

    def __init__(self, natural_freq_radps: float, damping: float, dt: float):
        self.dt = dt
        self.filter = SecondOrderFilter(natural_freq_radps, damping, dt)
        self.prev_omega = np.zeros(3)
        self.estimate = np.zeros(3)

    def reset(self, omega0):
        self.prev_omega = np.asarray(omega0, float).copy()
        self.filter.reset()
        self.estimate = np.zeros(3)

    def step(self, omega) -> np.ndarray:
        omega = np.asarray(omega, float)
        raw = (omega - self.prev_omega) / self.dt
        self.prev_omega = omega.copy()
        self.estimate = self.filter.step(raw)
        return self.estimate


class RateController:
    """Incremental rate controller with its own acceleration estimator.

    Owns the last-applied surface command (deg); the caller supplies the
    state-dependent input map every step. The stored command is passed
    through the same low-pass as the acceleration estimate before it enters
    the increment, so both sides of the inversion carry matching lag (the
    loop is otherwise unstable whenever the filter outruns the actuators).
    """

    def __init__(self, gains: IndiGains, filter_wn_radps: float, filter_damping: float,
                 pos_limits_deg, dt: float, cond_limit: float = 1e6):
        self.gains = gains
        self.pos_limits_deg = tuple(tuple(lim) for lim in pos_limits_deg)
        self.cond_limit = cond_limit
        self.estimator = OmegaDotEstimator(filter_wn_radps, filter_damping, dt)
        self.delta_filter = SecondOrderFilter(filter_wn_radps, filter_damping, dt)
        self.delta_deg = np.zeros(3)

    def reset(self, omega0, delta0_deg):
        self.estimator.reset(omega0)
        lo = np.array([lim[0] for lim in self.pos_limits_deg])
        hi = np.array([lim[1] for lim in self.pos_limits_deg])
        self.delta_deg = np.clip(np.asarray(delta0_deg, float), lo, hi)
        self.delta_filter.prime(self.delta_deg)

    def step(self, rate_cmd, omega, g_matrix):
        """Returns (surface commands deg, used_pinv)."""
        vdot_cmd = virtual_input(rate_cmd, omega, self.gains)
        vdot_now = self.estimator.step(omega)
        delta0 = self.delta_filter.step(self.delta_deg)
        delta, used_pinv = indi_increment(vdot_cmd, vdot_now, delta0,
                                          g_matrix, self.pos_limits_deg,
                                          self.cond_limit)
        self.delta_deg = delta
        return delta, used_pinv


def input_map(inertia_inv, qbar, geometry, phi_per_rad) -> np.ndarray:
    """State-dependent map from surface deflection (rad) to omega-dot.

    Jinv * qbar * S * diag(b, cbar, b) * Phi.
    """
    scale = qbar * geometry.area_ft2 * np.array([geometry.span_ft,
                                                 geometry.chord_ft,
                                                 geometry.span_ft])
    return inertia_inv @ (scale[:, None] * np.asarray(phi_per_rad, float))
