"""Layered flight-envelope protection.

Three layers act on the pilot rate commands before they reach the rate
controller: a dynamic per-axis rate saturation, a unified angle-of-attack /
load-factor restorative pitch action, and a bank-angle restorative roll
action. Restorative actions blend the (rate-limited) pilot demand with a
counter command through a linear authority fade; a rate-damping term inside
the restorative branch suppresses oscillation against the boundary.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, fields

import numpy as np

from .errors import ConfigError

DEG2RAD = math.pi / 180.0


@dataclass(frozen=True)
class EnvelopeLimits:
    """Scheduled limits at one flight condition.

    Rates are rad/s, incidence limits deg, load factors g, bank deg.
    """

    p_min: float
    p_max: float
    q_min: float
    q_max: float
    r_min: float
    r_max: float
    alpha_max_deg: float
    alpha_min_deg: float
    nz_max_g: float
    nz_min_g: float
    phi_max_deg: float

    def validate(self):
        if self.p_min >= self.p_max or self.q_min >= self.q_max or self.r_min >= self.r_max:
            raise ConfigError("rate limit band is empty", field="envelope")
        if self.alpha_min_deg >= self.alpha_max_deg:
            raise ConfigError("alpha limit band is empty", field="envelope")
        if self.alpha_min_deg >= 0.0:
            raise ConfigError("alpha_min_deg must be negative", field="envelope")
        if self.nz_min_g >= self.nz_max_g:
            raise ConfigError("load factor band is empty", field="envelope")
        if self.phi_max_deg <= 0.0:
            raise ConfigError("phi_max_deg must be positive", field="envelope")
        return self


_CHANNELS = [f.name for f in fields(EnvelopeLimits)]


class EnvelopeDatabase:
    """Bilinear (Mach, altitude) schedule of EnvelopeLimits."""

    def __init__(self, mach_breakpoints, altitude_breakpoints, nodes):
        self.mach_bp = [float(m) for m in mach_breakpoints]
        self.alt_bp = [float(a) for a in altitude_breakpoints]
        if len(self.mach_bp) < 1 or len(self.alt_bp) < 1:
            raise ConfigError("envelope grid must have at least one node per axis",
                              field="envelope")
        for bp, name in ((self.mach_bp, "mach"), (self.alt_bp, "altitude")):
            if any(b1 <= b0 for b0, b1 in zip(bp, bp[1:])):
                raise ConfigError(f"{name} breakpoints must be strictly increasing",
                                  field="envelope")
        if len(nodes) != len(self.mach_bp) or any(len(row) != len(self.alt_bp)
                                                  for row in nodes):
            raise ConfigError("node grid shape does not match breakpoints",
                              field="envelope")
        self.nodes = [[limits.validate() for limits in row] for row in nodes]

    def schedule(self, mach, altitude_ft):
        """Bilinear interpolation of every channel; clamps to the grid hull.

        Returns (EnvelopeLimits, clamped flag).
        """
        i, wi, ci = _locate_1d(self.mach_bp, mach)
        j, wj, cj = _locate_1d(self.alt_bp, altitude_ft)
        out = {}
        for name in _CHANNELS:
            v00 = getattr(self.nodes[i][j], name)
            v01 = getattr(self.nodes[i][min(j + 1, len(self.alt_bp) - 1)], name)
            v10 = getattr(self.nodes[min(i + 1, len(self.mach_bp) - 1)][j], name)
            v11 = getattr(self.nodes[min(i + 1, len(self.mach_bp) - 1)]
                          [min(j + 1, len(self.alt_bp) - 1)], name)
            out[name] = ((1 - wi) * (1 - wj) * v00 + (1 - wi) * wj * v01
                         + wi * (1 - wj) * v10 + wi * wj * v11)
        return EnvelopeLimits(**out), (ci or cj)


def _locate_1d(bps, x):
    if len(bps) == 1 or x <= bps[0]:
        return 0, 0.0, x < bps[0]
    if x >= bps[-1]:
        return max(0, len(bps) - 2), 1.0, x > bps[-1]
    i = bisect_right(bps, x) - 1
    return i, (x - bps[i]) / (bps[i + 1] - bps[i]), False


@dataclass(frozen=True)
class ProtectionGains:
    """Restorative and damping gains plus the authority fade onsets."""

    k_alpha: float = 1.0
    k_qdamp: float = 0.5
    k_phi: float = 0.06
    k_pdamp: float = 0.5
    k_rdamp: float = 0.2
    alpha_fade: float = 0.85
    phi_fade: float = 0.6

    def __post_init__(self):
        if min(self.k_alpha, self.k_qdamp, self.k_phi, self.k_pdamp, self.k_rdamp) < 0.0:
            raise ConfigError("protection gains must be non-negative", field="protection")
        for name in ("alpha_fade", "phi_fade"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ConfigError(f"{name} must lie strictly inside (0, 1)",
                                  field="protection")


def rate_protect(omega_pilot, limits: EnvelopeLimits) -> np.ndarray:
    """Dynamic saturation of the pilot rate commands, per axis."""
    w = np.asarray(omega_pilot, float)
    lo = np.array([limits.p_min, limits.q_min, limits.r_min])
    hi = np.array([limits.p_max, limits.q_max, limits.r_max])
    return np.clip(w, lo, hi)


def nz_equivalent_alpha(weight_lbf, nz_g, qbar, area_ft2, cz_alpha_per_rad,
                        alpha_limit_rad, qbar_floor=10.0):
    """Angle of attack (rad) equivalent to a load factor boundary.

    W*nz / (qbar*S*|Cz_alpha|). Below the dynamic-pressure floor, or with a
    vanishing lift slope, the pure alpha limit is returned and flagged so the
    caller can log the fallback.
    """
    slope = abs(cz_alpha_per_rad)
    if qbar <= qbar_floor or slope < 1e-9:
        return alpha_limit_rad, True
    return weight_lbf * nz_g / (qbar * area_ft2 * slope), False


def effective_alpha_max(alpha_max_alpha_rad, alpha_max_nz_rad):
    """Restrictive upper incidence limit: the smaller of the two."""
    return min(alpha_max_alpha_rad, alpha_max_nz_rad)


def effective_alpha_min(alpha_min_alpha_rad, alpha_min_nz_rad):
    """Restrictive lower incidence limit: the larger (less negative)."""
    return max(alpha_min_alpha_rad, alpha_min_nz_rad)


def _fade(indicator, onset):
    return min(1.0, max(0.0, (1.0 - indicator) / (1.0 - onset)))


def longitudinal_protect(q_pilot, alpha_rad, q, alpha_max_eff_rad, limits: EnvelopeLimits,
                         gains: ProtectionGains, alpha_min_eff_rad=None):
    """Unified incidence / load-factor restorative pitch command.

    Nose-up demand is faded into a restorative command as alpha approaches the
    effective upper limit; nose-down demand mirrors against the lower limit
    when one is supplied. Demand away from the active boundary passes through
    the rate saturation only.

    Returns (q_cmd rad/s, active flag, pilot-authority fade factor).
    """
    q_sat = float(np.clip(q_pilot, limits.q_min, limits.q_max))
    if q_pilot > 0.0:
        indicator = alpha_rad / alpha_max_eff_rad
        lam = _fade(indicator, gains.alpha_fade)
        if lam >= 1.0:
            return q_sat, False, 1.0
        restorative = gains.k_alpha * (1.0 - indicator) * limits.q_max - gains.k_qdamp * q
        return lam * q_sat + (1.0 - lam) * restorative, True, lam
    if alpha_min_eff_rad is not None and alpha_min_eff_rad < 0.0:
        indicator = alpha_rad / alpha_min_eff_rad
        lam = _fade(indicator, gains.alpha_fade)
        if lam >= 1.0:
            return q_sat, False, 1.0
        restorative = gains.k_alpha * (1.0 - indicator) * limits.q_min - gains.k_qdamp * q
        return lam * q_sat + (1.0 - lam) * restorative, True, lam
    return q_sat, False, 1.0


def bank_protect(p_pilot, phi_rad, p, r, limits: EnvelopeLimits,
                 gains: ProtectionGains):
    """Bank-angle restorative roll command.

    Engages unless the pilot demand actively reduces bank; the restorative
    branch combines a counter-roll proportional to the normalized bank with
    damping on both roll and yaw rate (yaw-coupled build-up is damped too).

    Returns (p_cmd rad/s, active flag, pilot-authority fade factor).
    """
    p_sat = float(np.clip(p_pilot, limits.p_min, limits.p_max))
    phi_max_rad = limits.phi_max_deg * DEG2RAD
    sign = 1.0 if phi_rad > 0.0 else (-1.0 if phi_rad < 0.0 else 0.0)
    if sign != 0.0 and p_pilot * sign < 0.0:
        return p_sat, False, 1.0  # actively rolling away from the boundary
    indicator = abs(phi_rad) / phi_max_rad
    lam = _fade(indicator, gains.phi_fade)
    if lam >= 1.0:
        return p_sat, False, 1.0
    restorative = (-sign * gains.k_phi * indicator * limits.p_max
                   - gains.k_pdamp * p - gains.k_rdamp * r)
    return lam * p_sat + (1.0 - lam) * restorative, True, lam
