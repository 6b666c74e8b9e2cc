"""Rigid-body flight dynamics: equations of motion, Euler kinematics, standard
atmosphere, saturated first-order actuators and a fixed-step RK4 integrator.

Units are US customary throughout (ft, slug, lbf, s). Angles are radians
inside the equations of motion; actuator and table interfaces use degrees.
Axes are body-fixed FRD with a flat-earth NED inertial frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, RangeError, SingularityError

GRAVITY_FTPS2 = 32.174

# 1976 standard atmosphere, US units
_SL_TEMP_R = 518.67           # sea-level temperature, Rankine
_SL_RHO = 0.0023769           # sea-level density, slug/ft^3
_LAPSE_R_PER_FT = 0.00356616  # tropospheric lapse rate
_GAS_CONST = 1716.55          # ft*lbf/(slug*R)
_TROPOPAUSE_FT = 36089.24
_MAX_ALT_FT = 50000.0


@dataclass
class MassProperties:
    """Aircraft mass and inertia. Inertia tensor is 3x3 slug*ft^2."""

    mass_slug: float
    inertia: np.ndarray
    inertia_inv: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.inertia = np.asarray(self.inertia, dtype=float)
        if self.mass_slug <= 0.0:
            raise ConfigError("mass must be positive", field="mass_slug")
        if self.inertia.shape != (3, 3):
            raise ConfigError("inertia tensor must be 3x3", field="inertia")
        if not np.allclose(self.inertia, self.inertia.T, rtol=0.0, atol=1e-9):
            raise ConfigError("inertia tensor must be symmetric", field="inertia")
        try:
            eigvals = np.linalg.eigvalsh(self.inertia)
        except np.linalg.LinAlgError as exc:
            raise ConfigError(f"inertia tensor is not diagonalizable: {exc}", field="inertia")
        if np.any(eigvals <= 0.0):
            raise ConfigError("inertia tensor must be positive definite", field="inertia")
        self.inertia_inv = np.linalg.inv(self.inertia)
        # plain tuples for the scalar fast path in the integrator
        self._j_rows = tuple(tuple(row) for row in self.inertia)
        self._jinv_rows = tuple(tuple(row) for row in self.inertia_inv)

    @property
    def weight_lbf(self) -> float:
        return self.mass_slug * GRAVITY_FTPS2


@dataclass(frozen=True)
class ActuatorSpec:
    """First-order servo with rate and position saturation."""

    tau_s: float
    rate_limit_dps: float
    pos_min_deg: float
    pos_max_deg: float

    def __post_init__(self):
        if self.tau_s <= 0.0:
            raise ConfigError("actuator time constant must be positive", field="tau_s")
        if self.rate_limit_dps <= 0.0:
            raise ConfigError("actuator rate limit must be positive", field="rate_limit_dps")
        if self.pos_min_deg >= self.pos_max_deg:
            raise ConfigError("actuator position band is empty", field="pos_min_deg")


@dataclass
class AircraftState:
    """Full rigid-body state plus actuator positions.

    velocity: body-axis (u, v, w), ft/s
    omega:    body rates (p, q, r), rad/s
    euler:    (phi, theta, psi), rad
    position: NED (north, east, down), ft
    surfaces: (tail, aileron, rudder), deg
    """

    velocity: np.ndarray
    omega: np.ndarray
    euler: np.ndarray
    position: np.ndarray
    surfaces: np.ndarray

    def __post_init__(self):
        self.velocity = np.asarray(self.velocity, dtype=float)
        self.omega = np.asarray(self.omega, dtype=float)
        self.euler = np.asarray(self.euler, dtype=float)
        self.position = np.asarray(self.position, dtype=float)
        self.surfaces = np.asarray(self.surfaces, dtype=float)

    def copy(self) -> "AircraftState":
        return AircraftState(self.velocity.copy(), self.omega.copy(),
                             self.euler.copy(), self.position.copy(),
                             self.surfaces.copy())

    @property
    def altitude_ft(self) -> float:
        return -float(self.position[2])


@dataclass(frozen=True)
class AtmosphereSample:
    """Flow quantities derived from altitude and body velocity."""

    rho: float        # slug/ft^3
    qbar: float       # lbf/ft^2
    mach: float
    vt: float         # ft/s
    alpha_rad: float
    beta_rad: float


def translational_derivative(velocity, omega, force_lbf, mass: MassProperties):
    """Body-axis acceleration: F/m - omega x V, ft/s^2."""
    u, v, w = float(velocity[0]), float(velocity[1]), float(velocity[2])
    p, q, r = float(omega[0]), float(omega[1]), float(omega[2])
    inv_m = 1.0 / mass.mass_slug
    out = np.array([
        float(force_lbf[0]) * inv_m - (q * w - r * v),
        float(force_lbf[1]) * inv_m - (r * u - p * w),
        float(force_lbf[2]) * inv_m - (p * v - q * u),
    ])
    if not math.isfinite(out[0] + out[1] + out[2]):
        raise ValueError("non-finite translational state or force")
    return out


def rotational_derivative(omega, moment_lbfft, mass: MassProperties):
    """Angular acceleration: Jinv (M - omega x J omega), rad/s^2."""
    p, q, r = float(omega[0]), float(omega[1]), float(omega[2])
    j0, j1, j2 = mass._j_rows
    hx = j0[0] * p + j0[1] * q + j0[2] * r
    hy = j1[0] * p + j1[1] * q + j1[2] * r
    hz = j2[0] * p + j2[1] * q + j2[2] * r
    tx = float(moment_lbfft[0]) - (q * hz - r * hy)
    ty = float(moment_lbfft[1]) - (r * hx - p * hz)
    tz = float(moment_lbfft[2]) - (p * hy - q * hx)
    i0, i1, i2 = mass._jinv_rows
    out = np.array([
        i0[0] * tx + i0[1] * ty + i0[2] * tz,
        i1[0] * tx + i1[1] * ty + i1[2] * tz,
        i2[0] * tx + i2[1] * ty + i2[2] * tz,
    ])
    if not math.isfinite(out[0] + out[1] + out[2]):
        raise ValueError("non-finite rotational state or moment")
    return out


def euler_kinematics(euler, omega, margin_deg: float = 0.5):
    """Euler angle rates from body rates. Raises near the theta singularity."""
    phi, theta, _ = float(euler[0]), float(euler[1]), float(euler[2])
    if abs(theta) >= math.radians(90.0 - margin_deg):
        raise SingularityError(euler)
    p, q, r = float(omega[0]), float(omega[1]), float(omega[2])
    sphi, cphi = math.sin(phi), math.cos(phi)
    tth = math.tan(theta)
    sec = 1.0 / math.cos(theta)
    return np.array([
        p + sphi * tth * q + cphi * tth * r,
        cphi * q - sphi * r,
        sphi * sec * q + cphi * sec * r,
    ])


def body_to_ned_matrix(euler) -> np.ndarray:
    """Direction cosine matrix mapping body-axis vectors into NED."""
    phi, theta, psi = float(euler[0]), float(euler[1]), float(euler[2])
    sph, cph = math.sin(phi), math.cos(phi)
    sth, cth = math.sin(theta), math.cos(theta)
    sps, cps = math.sin(psi), math.cos(psi)
    return np.array([
        [cth * cps, sph * sth * cps - cph * sps, cph * sth * cps + sph * sps],
        [cth * sps, sph * sth * sps + cph * cps, cph * sth * sps - sph * cps],
        [-sth, sph * cth, cph * cth],
    ])


def gravity_body(euler, weight_lbf: float) -> np.ndarray:
    """Weight vector expressed in body axes, lbf."""
    phi, theta = float(euler[0]), float(euler[1])
    return weight_lbf * np.array([
        -math.sin(theta),
        math.sin(phi) * math.cos(theta),
        math.cos(phi) * math.cos(theta),
    ])


def standard_atmosphere(altitude_ft: float):
    """Density (slug/ft^3) and speed of sound (ft/s) for 0..50,000 ft."""
    if not 0.0 <= altitude_ft <= _MAX_ALT_FT:
        raise RangeError(f"altitude {altitude_ft} ft outside [0, {_MAX_ALT_FT:.0f}]")
    if altitude_ft <= _TROPOPAUSE_FT:
        temp = _SL_TEMP_R - _LAPSE_R_PER_FT * altitude_ft
        exponent = GRAVITY_FTPS2 / (_LAPSE_R_PER_FT * _GAS_CONST) - 1.0
        rho = _SL_RHO * (temp / _SL_TEMP_R) ** exponent
    else:
        temp = _SL_TEMP_R - _LAPSE_R_PER_FT * _TROPOPAUSE_FT
        exponent = GRAVITY_FTPS2 / (_LAPSE_R_PER_FT * _GAS_CONST) - 1.0
        rho_trop = _SL_RHO * (temp / _SL_TEMP_R) ** exponent
        rho = rho_trop * math.exp(
            -GRAVITY_FTPS2 * (altitude_ft - _TROPOPAUSE_FT) / (_GAS_CONST * temp))
    sound = math.sqrt(1.4 * _GAS_CONST * temp)
    return rho, sound


def atmosphere_sample(velocity, altitude_ft: float) -> AtmosphereSample:
    """Build the flow sample used by the aero model and protection laws."""
    rho, sound = standard_atmosphere(altitude_ft)
    u, v, w = float(velocity[0]), float(velocity[1]), float(velocity[2])
    vt = math.sqrt(u * u + v * v + w * w)
    alpha = math.atan2(w, u) if vt > 0.0 else 0.0
    beta = math.asin(max(-1.0, min(1.0, v / vt))) if vt > 0.0 else 0.0
    return AtmosphereSample(rho=rho, qbar=0.5 * rho * vt * vt,
                            mach=vt / sound, vt=vt,
                            alpha_rad=alpha, beta_rad=beta)


def actuator_step(current_deg, command_deg, spec: ActuatorSpec, dt: float):
    """Advance a saturated first-order servo by one step.

    The command is clamped to the position band, then the first-order rate
    (cmd - pos)/tau is clamped to the rate limit and integrated forward with
    an anti-overshoot clamp at the commanded value. Accepts scalars or numpy
    arrays (broadcast elementwise). Requires dt > 0; accuracy needs dt < tau.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if np.ndim(current_deg) == 0 and np.ndim(command_deg) == 0:
        cur = float(current_deg)
        cmd = min(max(float(command_deg), spec.pos_min_deg), spec.pos_max_deg)
        rate = min(max((cmd - cur) / spec.tau_s, -spec.rate_limit_dps),
                   spec.rate_limit_dps)
        new = cur + rate * dt
        if (cmd - cur) * (cmd - new) < 0.0:  # do not step past the command
            new = cmd
        return min(max(new, spec.pos_min_deg), spec.pos_max_deg)
    cur = np.asarray(current_deg, dtype=float)
    cmd = np.clip(np.asarray(command_deg, dtype=float), spec.pos_min_deg, spec.pos_max_deg)
    rate = np.clip((cmd - cur) / spec.tau_s, -spec.rate_limit_dps, spec.rate_limit_dps)
    new = cur + rate * dt
    # do not step past the (clamped) command
    overshoot = (cmd - cur) * (cmd - new) < 0.0
    new = np.where(overshoot, cmd, new)
    return np.clip(new, spec.pos_min_deg, spec.pos_max_deg)


def _pack(state: AircraftState) -> np.ndarray:
    y = np.empty(12)
    y[0:3] = state.velocity
    y[3:6] = state.omega
    y[6:9] = state.euler
    y[9:12] = state.position
    return y


def _derivative(y, t, surfaces, mass, force_moment_fn, margin_deg):
    state = AircraftState(y[0:3], y[3:6], y[6:9], y[9:12], surfaces)
    force, moment = force_moment_fn(state, t)
    ydot = np.empty(12)
    ydot[0:3] = translational_derivative(state.velocity, state.omega, force, mass)
    ydot[3:6] = rotational_derivative(state.omega, moment, mass)
    ydot[6:9] = euler_kinematics(state.euler, state.omega, margin_deg)
    ydot[9:12] = body_to_ned_matrix(state.euler) @ state.velocity
    return ydot


def integrate_step(state: AircraftState, commands_deg, specs, mass: MassProperties,
                   force_moment_fn, dt: float, t: float = 0.0,
                   margin_deg: float = 0.5) -> AircraftState:
    """Advance the full state by one fixed RK4 step.

    Actuators are stepped first over dt and held constant across the RK4
    stages; forces and moments are re-evaluated at every stage through
    ``force_moment_fn(state, t) -> (force_lbf, moment_lbfft)``. The update is
    bitwise deterministic for identical inputs.
    """
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    surfaces = np.array([
        actuator_step(float(state.surfaces[i]), float(commands_deg[i]), specs[i], dt)
        for i in range(3)
    ])
    y0 = _pack(state)
    k1 = _derivative(y0, t, surfaces, mass, force_moment_fn, margin_deg)
    k2 = _derivative(y0 + 0.5 * dt * k1, t + 0.5 * dt, surfaces, mass, force_moment_fn, margin_deg)
    k3 = _derivative(y0 + 0.5 * dt * k2, t + 0.5 * dt, surfaces, mass, force_moment_fn, margin_deg)
    k4 = _derivative(y0 + dt * k3, t + dt, surfaces, mass, force_moment_fn, margin_deg)
    y1 = y0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return AircraftState(y1[0:3], y1[3:6], y1[6:9], y1[9:12], surfaces)


def rotational_energy(omega, mass: MassProperties) -> float:
    """Rotational kinetic energy 0.5 w' J w, ft*lbf."""
    w = np.asarray(omega, dtype=float)
    return 0.5 * float(w @ (mass.inertia @ w))
