"""Per-axis stick feel dynamics: a mass-spring-damper whose spring is the
feel-characteristic curve and whose damping follows the commanded damping
ratio against the local curve gradient.

Device units: deflection in degrees, force in lbf, so the effective inertia
carries lbf*s^2/deg. With a linear curve of gradient k the deflection
response to a grip-force step is the classic second-order system with
natural frequency sqrt(k/m); the closed forms here serve as the oracle for
the numeric integration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import IntEnum

from .ffc import POSITION_LIMIT_DEG

DAMPING_RATIO_RANGE = (0.2, 6.0)
INERTIA_RANGE = (0.01, 10.0)


class Mode(IntEnum):
    DISABLED = 0
    ENABLED = 1
    JAMMED = 2


@dataclass(frozen=True)
class StickAxisState:
    """Deflection, rate, mode and feel parameters for one stick axis.

    Friction defaults to zero (the feel model is frictionless); the Coulomb
    and viscous terms exist for identification work against less ideal
    hardware behavior.
    """

    theta_deg: float = 0.0
    theta_dot_dps: float = 0.0
    mode: Mode = Mode.DISABLED
    inertia: float = 0.6          # effective mass, lbf*s^2/deg
    zeta: float = 0.7
    trim_deg: float = 0.0
    trim_on: bool = True
    shaker_amp_lbf: float = 0.0
    shaker_freq_hz: float = 0.0
    shaker_on: bool = False
    damping_on: bool = True
    friction_coulomb_lbf: float = 0.0
    friction_viscous: float = 0.0     # lbf per deg/s
    fade_remaining_s: float = 0.0

    def __post_init__(self):
        if not DAMPING_RATIO_RANGE[0] <= self.zeta <= DAMPING_RATIO_RANGE[1]:
            raise ValueError(f"damping ratio {self.zeta} outside "
                             f"{DAMPING_RATIO_RANGE}")
        if not INERTIA_RANGE[0] <= self.inertia <= INERTIA_RANGE[1]:
            raise ValueError(f"inertia {self.inertia} outside {INERTIA_RANGE}")
        if abs(self.theta_deg) > POSITION_LIMIT_DEG + 1e-9:
            raise ValueError(f"deflection {self.theta_deg} beyond the hard stop")
        if self.friction_coulomb_lbf < 0.0 or self.friction_viscous < 0.0:
            raise ValueError("friction terms must be non-negative")


def _acceleration(axis: StickAxisState, theta, theta_dot, f_grip, curve, t):
    offset = axis.trim_deg if axis.trim_on else 0.0
    rel = theta - offset
    direction = 1.0 if theta_dot >= 0.0 else -1.0
    gradient = max(curve.gradient_at(rel, direction), 0.0)
    damping = 2.0 * axis.zeta * math.sqrt(axis.inertia * gradient) \
        if axis.damping_on else 0.0
    force = f_grip - damping * theta_dot
    if axis.friction_viscous > 0.0:
        force -= axis.friction_viscous * theta_dot
    if axis.friction_coulomb_lbf > 0.0 and theta_dot != 0.0:
        force -= math.copysign(axis.friction_coulomb_lbf, theta_dot)
    if axis.mode == Mode.ENABLED:
        force -= curve.force_at(rel)
        if axis.shaker_on and axis.shaker_amp_lbf > 0.0:
            force += axis.shaker_amp_lbf * math.sin(
                2.0 * math.pi * axis.shaker_freq_hz * t)
    return force / axis.inertia


def stick_dynamics_step(axis: StickAxisState, f_grip_lbf: float, curve,
                        dt: float, t: float = 0.0) -> StickAxisState:
    """One fixed RK4 step of the feel equation of motion.

    Jammed locks the deflection; Disabled drops the spring and shaker terms.
    The deflection hard-clamps at +/-24 deg with the rate zeroed against the
    stop. Deterministic for identical inputs.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if axis.mode == Mode.JAMMED:
        if axis.theta_dot_dps == 0.0:
            return axis
        return replace(axis, theta_dot_dps=0.0)

    th, thd = axis.theta_deg, axis.theta_dot_dps

    def f(theta, theta_dot, stage_t):
        return theta_dot, _acceleration(axis, theta, theta_dot, f_grip_lbf,
                                        curve, stage_t)

    k1 = f(th, thd, t)
    k2 = f(th + 0.5 * dt * k1[0], thd + 0.5 * dt * k1[1], t + 0.5 * dt)
    k3 = f(th + 0.5 * dt * k2[0], thd + 0.5 * dt * k2[1], t + 0.5 * dt)
    k4 = f(th + dt * k3[0], thd + dt * k3[1], t + dt)
    new_th = th + dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
    new_thd = thd + dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])

    if new_th >= POSITION_LIMIT_DEG:
        new_th, new_thd = POSITION_LIMIT_DEG, min(new_thd, 0.0)
    elif new_th <= -POSITION_LIMIT_DEG:
        new_th, new_thd = -POSITION_LIMIT_DEG, max(new_thd, 0.0)
    return replace(axis, theta_deg=new_th, theta_dot_dps=new_thd)


def analytic_step_response(t: float, m: float, zeta: float, k: float,
                           f_lbf: float) -> float:
    """Closed-form deflection response to a grip-force step from rest, deg.

    Covers the underdamped, critically damped and overdamped branches of the
    second-order feel model with gradient k (lbf/deg) and inertia m.
    """
    if m <= 0.0 or k <= 0.0:
        raise ValueError("m and k must be positive")
    if t < 0.0:
        return 0.0
    final = f_lbf / k
    wn = math.sqrt(k / m)
    if abs(zeta - 1.0) < 1e-12:
        return final * (1.0 - math.exp(-wn * t) * (1.0 + wn * t))
    if zeta < 1.0:
        wd = wn * math.sqrt(1.0 - zeta * zeta)
        decay = math.exp(-zeta * wn * t)
        return final * (1.0 - decay * (math.cos(wd * t)
                                       + zeta / math.sqrt(1.0 - zeta * zeta)
                                       * math.sin(wd * t)))
    root = math.sqrt(zeta * zeta - 1.0)
    r1 = -wn * (zeta - root)
    r2 = -wn * (zeta + root)
    return final * (1.0 + (r2 * math.exp(r1 * t) - r1 * math.exp(r2 * t)) / (r1 - r2))


def analytic_release(t: float, theta0_deg: float, zeta: float, wn: float) -> float:
    """Free response from an initial deflection with zero initial rate, deg."""
    if wn <= 0.0:
        raise ValueError("natural frequency must be positive")
    if t < 0.0:
        return theta0_deg
    if abs(zeta - 1.0) < 1e-12:
        return theta0_deg * math.exp(-wn * t) * (1.0 + wn * t)
    if zeta < 1.0:
        wd = wn * math.sqrt(1.0 - zeta * zeta)
        decay = math.exp(-zeta * wn * t)
        return theta0_deg * decay * (math.cos(wd * t)
                                     + zeta / math.sqrt(1.0 - zeta * zeta)
                                     * math.sin(wd * t))
    root = math.sqrt(zeta * zeta - 1.0)
    r1 = -wn * (zeta - root)
    r2 = -wn * (zeta + root)
    return theta0_deg * (r1 * math.exp(r2 * t) - r2 * math.exp(r1 * t)) / (r1 - r2)


def peak_overshoot_fraction(zeta: float) -> float:
    """First-peak overshoot of the underdamped step response, as a fraction."""
    if not 0.0 < zeta < 1.0:
        raise ValueError("overshoot formula requires 0 < zeta < 1")
    return math.exp(-zeta * math.pi / math.sqrt(1.0 - zeta * zeta))
