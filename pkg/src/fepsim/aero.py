"""Aerodynamic coefficient tables: interpolation lookup, rate-derivative
contributions, dimensionalization into body forces and moments, and the
control-effectivity matrix used by the rate controller.

Table axes are in degrees (alpha, beta, tail, aileron, rudder); coefficients
are nondimensional. Rate-derivative blocks are per radian and are applied
with the usual normalization p*b/2V, q*cbar/2V, r*b/2V.
"""

from __future__ import annotations

import json
import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

DEG2RAD = math.pi / 180.0
RAD2DEG = 180.0 / math.pi

AXIS_NAMES = ("alpha", "beta", "tail", "aileron", "rudder")
SURFACE_AXES = ("tail", "aileron", "rudder")
STATIC_TARGETS = ("Cx", "Cy", "Cz", "Cl", "Cm", "Cn")
MOMENT_TARGETS = ("Cl", "Cm", "Cn")
RATE_NAMES = ("p", "q", "r")


@dataclass(frozen=True)
class AeroCoefficients:
    """Interpolated nondimensional coefficients at one flight condition."""

    cx: float
    cy: float
    cz: float
    cl: float
    cm: float
    cn: float
    cz_alpha: float   # dCz/dalpha, per rad
    clamped: bool     # any lookup fell outside the table hull


@dataclass(frozen=True)
class ControlEffectivity:
    """Moment-coefficient derivatives w.r.t. surface deflection, per rad.

    Rows are (Cl, Cm, Cn), columns are (tail, aileron, rudder).
    """

    phi: np.ndarray
    one_sided: bool   # a finite difference had to fall back to one-sided


def _locate(breakpoints, x):
    """Cell index, weight in [0,1], and clamped flag for one axis."""
    if x <= breakpoints[0]:
        return 0, 0.0, x < breakpoints[0]
    last = len(breakpoints) - 1
    if x >= breakpoints[last]:
        return last - 1, 1.0, x > breakpoints[last]
    i = bisect_right(breakpoints, x) - 1
    lo = breakpoints[i]
    return i, (x - lo) / (breakpoints[i + 1] - lo), False


class CoefficientBlock:
    """One gridded coefficient: a static term or a rate derivative."""

    def __init__(self, target, axes, values, rate=None):
        if target not in STATIC_TARGETS:
            raise ConfigError(f"unknown coefficient target {target!r}", field="blocks")
        if rate is not None and rate not in RATE_NAMES:
            raise ConfigError(f"unknown rate axis {rate!r}", field=target)
        self.target = target
        self.rate = rate
        self.axis_names = []
        self.breakpoints = []
        for name, bps in axes:
            if name not in AXIS_NAMES:
                raise ConfigError(f"unknown table axis {name!r}", field=target)
            bps = [float(b) for b in bps]
            if len(bps) < 2:
                raise ConfigError(f"axis {name} needs at least two breakpoints", field=target)
            if any(not math.isfinite(b) for b in bps):
                raise ConfigError(f"axis {name} has non-finite breakpoints", field=target)
            if any(b1 <= b0 for b0, b1 in zip(bps, bps[1:])):
                raise ConfigError(f"axis {name} breakpoints must be strictly increasing",
                                  field=target)
            self.axis_names.append(name)
            self.breakpoints.append(bps)
        dims = tuple(len(b) for b in self.breakpoints)
        flat = [float(v) for v in np.asarray(values, dtype=float).ravel()]
        if len(flat) != int(np.prod(dims)):
            raise ConfigError(f"value count {len(flat)} does not match grid {dims}",
                              field=target)
        if any(not math.isfinite(v) for v in flat):
            raise ConfigError("grid values must be finite", field=target)
        self.dims = dims
        self.values = flat
        strides = []
        acc = 1
        for d in reversed(dims):
            strides.append(acc)
            acc *= d
        self.strides = tuple(reversed(strides))  # row-major

    def interpolate(self, coords):
        """Multilinear interpolation at coords (dict axis->value, degrees).

        Specialized for 1 to 3 dimensions (the hot path); generic corner
        expansion above that.
        """
        names = self.axis_names
        bps = self.breakpoints
        values = self.values
        ndim = len(names)
        if ndim == 1:
            i, w, c = _locate(bps[0], coords.get(names[0], 0.0))
            return values[i] * (1.0 - w) + values[i + 1] * w, c
        if ndim == 2:
            i0, w0, c0 = _locate(bps[0], coords.get(names[0], 0.0))
            i1, w1, c1 = _locate(bps[1], coords.get(names[1], 0.0))
            s0 = self.strides[0]
            base = i0 * s0 + i1
            lo = values[base] * (1.0 - w1) + values[base + 1] * w1
            hi = values[base + s0] * (1.0 - w1) + values[base + s0 + 1] * w1
            return lo * (1.0 - w0) + hi * w0, c0 or c1
        if ndim == 3:
            i0, w0, c0 = _locate(bps[0], coords.get(names[0], 0.0))
            i1, w1, c1 = _locate(bps[1], coords.get(names[1], 0.0))
            i2, w2, c2 = _locate(bps[2], coords.get(names[2], 0.0))
            s0, s1 = self.strides[0], self.strides[1]
            base = i0 * s0 + i1 * s1 + i2
            m2 = 1.0 - w2
            v00 = values[base] * m2 + values[base + 1] * w2
            v01 = values[base + s1] * m2 + values[base + s1 + 1] * w2
            v10 = values[base + s0] * m2 + values[base + s0 + 1] * w2
            v11 = values[base + s0 + s1] * m2 + values[base + s0 + s1 + 1] * w2
            lo = v00 * (1.0 - w1) + v01 * w1
            hi = v10 * (1.0 - w1) + v11 * w1
            return lo * (1.0 - w0) + hi * w0, c0 or c1 or c2
        idx = [0] * ndim
        wts = [0.0] * ndim
        clamped = False
        for k in range(ndim):
            i, w, c = _locate(bps[k], coords.get(names[k], 0.0))
            idx[k] = i
            wts[k] = w
            clamped = clamped or c
        total = 0.0
        strides = self.strides
        for corner in range(1 << ndim):
            weight = 1.0
            offset = 0
            for k in range(ndim):
                if corner >> k & 1:
                    weight *= wts[k]
                    offset += strides[k] * (idx[k] + 1)
                else:
                    weight *= 1.0 - wts[k]
                    offset += strides[k] * idx[k]
            if weight != 0.0:
                total += weight * values[offset]
        return total, clamped

    def axis_range(self, name):
        bps = self.breakpoints[self.axis_names.index(name)]
        return bps[0], bps[-1]


class AeroTables:
    """Immutable set of coefficient grids plus the declared validity envelope."""

    def __init__(self, version, envelope, blocks):
        self.version = version
        self.envelope = envelope
        self.static = {}
        self.rate_blocks = []
        for block in blocks:
            if block.rate is None:
                if block.target in self.static:
                    raise ConfigError(f"duplicate static block for {block.target}",
                                      field=block.target)
                self.static[block.target] = block
            else:
                self.rate_blocks.append(block)
        missing = [t for t in STATIC_TARGETS if t not in self.static]
        if missing:
            raise ConfigError(f"missing static blocks: {', '.join(missing)}", field="blocks")
        # 1-D rate blocks sharing a breakpoint vector share one axis search
        groups = {}
        self._rate_other = []
        for block in self.rate_blocks:
            if len(block.axis_names) == 1:
                key = (block.axis_names[0], tuple(block.breakpoints[0]))
                groups.setdefault(key, []).append(block)
            else:
                self._rate_other.append(block)
        self._rate_groups = [(name, list(bps), blocks_)
                             for (name, bps), blocks_ in groups.items()]

    @classmethod
    def from_dict(cls, raw):
        if raw.get("kind") != "aero_tables":
            raise ConfigError("not an aero table file (kind != 'aero_tables')", field="kind")
        if "version" not in raw:
            raise ConfigError("version field is mandatory", field="version")
        envelope = raw.get("envelope")
        if not envelope or "alpha_deg" not in envelope or "beta_deg" not in envelope \
                or "mach_max" not in envelope:
            raise ConfigError("envelope must declare alpha_deg, beta_deg and mach_max",
                              field="envelope")
        blocks = [CoefficientBlock(b["target"], b["axes"], b["values"], b.get("rate"))
                  for b in raw["blocks"]]
        return cls(raw["version"], envelope, blocks)

    @classmethod
    def load(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def alpha_range(self):
        lo, hi = self.envelope["alpha_deg"]
        return float(lo), float(hi)

    def beta_range(self):
        lo, hi = self.envelope["beta_deg"]
        return float(lo), float(hi)


def _coords(alpha_deg, beta_deg, surfaces_deg):
    return {
        "alpha": alpha_deg,
        "beta": beta_deg,
        "tail": surfaces_deg[0],
        "aileron": surfaces_deg[1],
        "rudder": surfaces_deg[2],
    }


def lookup_coefficients(alpha_deg, beta_deg, surfaces_deg, omega_radps, sample,
                        tables: AeroTables, geometry,
                        need_cz_alpha: bool = True) -> AeroCoefficients:
    """Interpolate all six coefficients and add rate-derivative contributions.

    ``geometry`` supplies the reference span and chord for the rate
    normalization. Queries outside the table hull are clamped and flagged.
    ``need_cz_alpha=False`` skips the lift-slope finite difference (the
    integrator's staged force evaluations have no use for it).
    """
    coords = _coords(alpha_deg, beta_deg, surfaces_deg)
    out = {}
    clamped = False
    for target in STATIC_TARGETS:
        value, c = tables.static[target].interpolate(coords)
        out[target] = value
        clamped = clamped or c
    if sample.vt > 1.0:
        p, q, r = float(omega_radps[0]), float(omega_radps[1]), float(omega_radps[2])
        half_v = 2.0 * sample.vt
        norm = {
            "p": p * geometry.span_ft / half_v,
            "q": q * geometry.chord_ft / half_v,
            "r": r * geometry.span_ft / half_v,
        }
        for axis_name, bps, blocks in tables._rate_groups:
            i, w, c = _locate(bps, coords.get(axis_name, 0.0))
            clamped = clamped or c
            m = 1.0 - w
            for block in blocks:
                values = block.values
                out[block.target] += (values[i] * m + values[i + 1] * w) \
                    * norm[block.rate]
        for block in tables._rate_other:
            value, c = block.interpolate(coords)
            out[block.target] += value * norm[block.rate]
            clamped = clamped or c
    cza = cz_alpha(alpha_deg, tables, beta_deg=beta_deg,
                   surfaces_deg=surfaces_deg) if need_cz_alpha else 0.0
    return AeroCoefficients(cx=out["Cx"], cy=out["Cy"], cz=out["Cz"],
                            cl=out["Cl"], cm=out["Cm"], cn=out["Cn"],
                            cz_alpha=cza, clamped=clamped)


def dimensionalize(coeffs: AeroCoefficients, sample, geometry):
    """Body forces (lbf) and moments (lbf*ft) from coefficients."""
    qs = sample.qbar * geometry.area_ft2
    force = np.array([qs * coeffs.cx, qs * coeffs.cy, qs * coeffs.cz])
    moment = np.array([qs * geometry.span_ft * coeffs.cl,
                       qs * geometry.chord_ft * coeffs.cm,
                       qs * geometry.span_ft * coeffs.cn])
    return force, moment


def _central_difference(block, coords, axis, h):
    """d(block)/d(axis) per degree; one-sided at the axis edge."""
    lo, hi = block.axis_range(axis)
    x = coords.get(axis, 0.0)
    x_plus = x + h
    x_minus = x - h
    one_sided = False
    if x_plus > hi:
        x_plus = x
        one_sided = True
    if x_minus < lo:
        x_minus = x
        one_sided = True
    if x_plus == x_minus:
        return 0.0, True
    up, _ = block.interpolate({**coords, axis: x_plus})
    dn, _ = block.interpolate({**coords, axis: x_minus})
    return (up - dn) / (x_plus - x_minus), one_sided


def effectivity(alpha_deg, beta_deg, surfaces_deg, tables: AeroTables,
                h_deg: float = 1.0) -> ControlEffectivity:
    """Moment-coefficient derivatives w.r.t. each surface, per rad.

    Central finite differences with step ``h_deg``; surfaces whose axis does
    not appear in a moment grid contribute exactly zero.
    """
    coords = _coords(alpha_deg, beta_deg, surfaces_deg)
    phi = np.zeros((3, 3))
    one_sided = False
    for col, surface in enumerate(SURFACE_AXES):
        for row, target in enumerate(MOMENT_TARGETS):
            block = tables.static[target]
            if surface not in block.axis_names:
                continue
            slope, edge = _central_difference(block, coords, surface, h_deg)
            phi[row, col] = slope * RAD2DEG
            one_sided = one_sided or edge
    return ControlEffectivity(phi=phi, one_sided=one_sided)


def cz_alpha(alpha_deg, tables: AeroTables, beta_deg: float = 0.0,
             surfaces_deg=(0.0, 0.0, 0.0), h_deg: float = 1.0) -> float:
    """dCz/dalpha in per-rad, central finite difference over the Cz grid."""
    coords = _coords(alpha_deg, beta_deg, surfaces_deg)
    block = tables.static["Cz"]
    if "alpha" not in block.axis_names:
        return 0.0
    slope, _ = _central_difference(block, coords, "alpha", h_deg)
    return slope * RAD2DEG
