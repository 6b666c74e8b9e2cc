"""Force-feel characteristic curves: the monotone position-to-force map that
defines the stick's artificial spring, plus the soft-stop construction used
for envelope-protection cueing."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

from ..errors import ConfigError

POSITION_LIMIT_DEG = 24.0
FORCE_LIMIT_LBF = 27.0


@dataclass(frozen=True)
class FfcCurve:
    """Breakpoint list of (position deg, holding force lbf).

    Positions strictly increase; force never decreases with position. The
    device cannot represent positions beyond +/-24 deg or forces beyond
    +/-27 lbf. Queries outside the span clamp to the end force.
    """

    points: tuple

    def __post_init__(self):
        pts = tuple((float(p), float(f)) for p, f in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 2:
            raise ConfigError("curve needs at least two breakpoints", field="ffc")
        for i, (pos, force) in enumerate(pts):
            if abs(pos) > POSITION_LIMIT_DEG + 1e-9:
                raise ConfigError(f"breakpoint {i} position {pos} beyond +/-24 deg",
                                  field="ffc")
            if abs(force) > FORCE_LIMIT_LBF + 1e-9:
                raise ConfigError(f"breakpoint {i} force {force} beyond +/-27 lbf",
                                  field="ffc")
        for i in range(1, len(pts)):
            if pts[i][0] <= pts[i - 1][0]:
                raise ConfigError(
                    f"breakpoint {i} position {pts[i][0]} not above {pts[i - 1][0]}",
                    field="ffc")
            if pts[i][1] < pts[i - 1][1]:
                raise ConfigError(
                    f"breakpoint {i} force {pts[i][1]} decreases from {pts[i - 1][1]}",
                    field="ffc")
        object.__setattr__(self, "_positions", tuple(p for p, _ in pts))

    def force_at(self, theta_deg: float) -> float:
        """Piecewise-linear holding force; clamps to the end force off-span."""
        pts = self.points
        positions = self._positions
        if theta_deg <= positions[0]:
            return pts[0][1]
        if theta_deg >= positions[-1]:
            return pts[-1][1]
        i = bisect_right(positions, theta_deg) - 1
        p0, f0 = pts[i]
        p1, f1 = pts[i + 1]
        return f0 + (f1 - f0) * (theta_deg - p0) / (p1 - p0)

    def gradient_at(self, theta_deg: float, direction: float = 1.0) -> float:
        """Local force gradient, lbf/deg.

        At a breakpoint the segment being entered (per ``direction``) wins.
        Off-span the end segment's gradient is used so the feel damping does
        not vanish against the hard stop.
        """
        pts = self.points
        positions = self._positions
        n = len(positions)
        if theta_deg <= positions[0]:
            i = 0
        elif theta_deg >= positions[-1]:
            i = n - 2
        else:
            i = bisect_right(positions, theta_deg) - 1
            if direction < 0.0 and theta_deg == positions[i] and i > 0:
                i -= 1
        p0, f0 = pts[i]
        p1, f1 = pts[i + 1]
        return (f1 - f0) / (p1 - p0)


def ffc_force(theta_deg: float, curve: FfcCurve) -> float:
    """Holding force at a deflection; restoring, so the stick dynamics apply
    the negative of this value as the spring term."""
    return curve.force_at(theta_deg)


class BlendedCurve:
    """Pointwise linear blend between two curves during a characteristic fade.

    fraction 0 is entirely the old curve, 1 entirely the new one.
    """

    def __init__(self, old: FfcCurve, new: FfcCurve, fraction: float):
        self.old = old
        self.new = new
        self.fraction = min(1.0, max(0.0, fraction))

    def force_at(self, theta_deg: float) -> float:
        s = self.fraction
        return (1.0 - s) * self.old.force_at(theta_deg) + s * self.new.force_at(theta_deg)

    def gradient_at(self, theta_deg: float, direction: float = 1.0) -> float:
        s = self.fraction
        return ((1.0 - s) * self.old.gradient_at(theta_deg, direction)
                + s * self.new.gradient_at(theta_deg, direction))


def build_softstop_ffc(base: FfcCurve, softstop_pos_deg: float,
                       gradient_multiplier: float):
    """Insert a soft stop: steepen the gradient beyond the given position.

    The side being steepened follows the sign of ``softstop_pos_deg``. The
    resulting force is re-clamped at the 27 lbf device limit (flat beyond the
    clamp crossing). Returns (curve, adjusted) where ``adjusted`` reports that
    a monotonicity cleanup pass had to modify the raw construction.

    Requires |softstop_pos_deg| < 24 and gradient_multiplier > 1.
    """
    if abs(softstop_pos_deg) >= POSITION_LIMIT_DEG:
        raise ValueError("soft stop must sit strictly inside the position range")
    if gradient_multiplier <= 1.0:
        raise ValueError("gradient multiplier must exceed 1")

    mult = gradient_multiplier
    pos = softstop_pos_deg
    anchor_force = base.force_at(pos)

    if pos >= 0.0:
        kept = [(p, f) for p, f in base.points if p < pos]
        tail = [(p, f) for p, f in base.points if p > pos]
        out = kept + [(pos, anchor_force)]
        clamped = False
        for p, f in tail:
            steep = anchor_force + mult * (f - anchor_force)
            if not clamped and steep > FORCE_LIMIT_LBF:
                prev_p, prev_f = out[-1]
                if steep > prev_f:
                    cross = prev_p + (p - prev_p) * (FORCE_LIMIT_LBF - prev_f) / (steep - prev_f)
                    if cross > prev_p:
                        out.append((cross, FORCE_LIMIT_LBF))
                clamped = True
            out.append((p, min(steep, FORCE_LIMIT_LBF)))
    else:
        kept = [(p, f) for p, f in base.points if p > pos]
        tail = [(p, f) for p, f in reversed(base.points) if p < pos]
        out_rev = [(pos, anchor_force)]
        clamped = False
        for p, f in tail:  # walking toward -24
            steep = anchor_force + mult * (f - anchor_force)
            if not clamped and steep < -FORCE_LIMIT_LBF:
                prev_p, prev_f = out_rev[-1]
                if steep < prev_f:
                    cross = prev_p + (p - prev_p) * (-FORCE_LIMIT_LBF - prev_f) / (steep - prev_f)
                    if cross < prev_p:
                        out_rev.append((cross, -FORCE_LIMIT_LBF))
                clamped = True
            out_rev.append((p, max(steep, -FORCE_LIMIT_LBF)))
        out = list(reversed(out_rev)) + kept

    # minimal monotone envelope: force must never decrease with position
    adjusted = False
    cleaned = [out[0]]
    for p, f in out[1:]:
        if p <= cleaned[-1][0]:
            adjusted = True
            continue
        if f < cleaned[-1][1]:
            adjusted = True
            f = cleaned[-1][1]
        cleaned.append((p, f))
    return FfcCurve(tuple(cleaned)), adjusted
