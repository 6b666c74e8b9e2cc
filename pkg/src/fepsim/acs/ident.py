"""Second-order parameter identification from a release transient.

The stick is deflected, held, and released; the recorded free response is
fitted with the second-order feel model. The fit is output-error least
squares over (damping ratio, natural frequency) with the amplitude profiled
out analytically, initialized from log-decrement and peak-spacing estimates
and refined from a small surrounding grid."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from ..errors import IdentificationError


@dataclass(frozen=True)
class FitResult:
    zeta: float
    omega_n: float
    amplitude_deg: float
    sse: float
    initial_zeta: float
    initial_omega_n: float
    overdamped: bool


def _release_shape(t, zeta, wn):
    """Vectorized unit-amplitude free response (same branches as
    analytic_release)."""
    if abs(zeta - 1.0) < 1e-12:
        return np.exp(-wn * t) * (1.0 + wn * t)
    if zeta < 1.0:
        wd = wn * math.sqrt(1.0 - zeta * zeta)
        return np.exp(-zeta * wn * t) * (np.cos(wd * t)
                                         + zeta / math.sqrt(1.0 - zeta * zeta)
                                         * np.sin(wd * t))
    root = math.sqrt(zeta * zeta - 1.0)
    r1 = -wn * (zeta - root)
    r2 = -wn * (zeta + root)
    return (r1 * np.exp(r2 * t) - r2 * np.exp(r1 * t)) / (r1 - r2)


def _profiled_residual(t, theta, zeta, wn):
    shape = _release_shape(t, zeta, wn)
    denom = float(shape @ shape)
    if denom <= 0.0:
        return theta, 0.0
    amp = float(shape @ theta) / denom
    return theta - amp * shape, amp


def _find_extrema(theta, smooth_window):
    if smooth_window > 1:
        kernel = np.ones(smooth_window) / smooth_window
        padded = np.concatenate([np.full(smooth_window // 2, theta[0]), theta,
                                 np.full(smooth_window // 2, theta[-1])])
        smoothed = np.convolve(padded, kernel, mode="valid")[:len(theta)]
    else:
        smoothed = theta
    d = np.diff(smoothed)
    sign = np.sign(d)
    sign[sign == 0] = 1
    turns = np.where(np.diff(sign) != 0)[0] + 1
    floor = 0.02 * np.max(np.abs(theta))
    return [i for i in turns if abs(smoothed[i]) > floor]


def fit_second_order(time_s, theta_deg) -> FitResult:
    """Fit (zeta, omega_n) to a recorded release trajectory.

    Raises IdentificationError when the record has no usable transient or
    the refinement fails to converge; the error carries the residual of the
    best attempt when one exists.
    """
    t = np.asarray(time_s, dtype=float)
    theta = np.asarray(theta_deg, dtype=float)
    if t.ndim != 1 or t.shape != theta.shape or len(t) < 16:
        raise IdentificationError("need a 1-D record of at least 16 samples")
    if np.any(np.diff(t) <= 0.0):
        raise IdentificationError("timestamps must strictly increase")
    t = t - t[0]
    span = float(np.max(np.abs(theta)))
    if span < 1e-9 or float(np.std(theta)) < 1e-6 * max(span, 1.0):
        raise IdentificationError("no release transient in the record")

    window = max(3, len(theta) // 200)
    if window % 2 == 0:
        window += 1
    extrema = _find_extrema(theta, window)

    if len(extrema) >= 2:
        overdamped = False
        amps = [abs(theta[0])] + [abs(theta[i]) for i in extrema]
        ratios = [a0 / a1 for a0, a1 in zip(amps, amps[1:]) if a1 > 1e-9 and a0 > a1]
        if ratios:
            decrement = float(np.mean(np.log(ratios)))
            zeta0 = decrement / math.sqrt(math.pi ** 2 + decrement ** 2)
        else:
            zeta0 = 0.1
        times = [0.0] + [t[i] for i in extrema]
        half_period = float(np.mean(np.diff(times)))
        wd = math.pi / half_period
        zeta0 = min(max(zeta0, 1e-3), 0.95)
        wn0 = wd / math.sqrt(1.0 - zeta0 ** 2)
    else:
        # no visible oscillation: try the overdamped branch, initialized from
        # the tail decay rate
        overdamped = True
        magnitude = np.abs(theta)
        usable = magnitude > 1e-6 * span
        if np.count_nonzero(usable) < 8:
            raise IdentificationError("record decays too fast to fit")
        slope = np.polyfit(t[usable], np.log(magnitude[usable]), 1)[0]
        if slope >= 0.0:
            raise IdentificationError("record does not decay: not a release transient")
        zeta0 = 1.5
        wn0 = -slope / (zeta0 - math.sqrt(zeta0 ** 2 - 1.0))

    # coarse grid around the initializer, then local refinement
    best = None
    for zf in (0.6, 0.8, 1.0, 1.25, 1.6):
        for wf in (0.85, 1.0, 1.2):
            z = min(max(zeta0 * zf, 1e-3), 4.9)
            w = wn0 * wf
            res, _ = _profiled_residual(t, theta, z, w)
            sse = float(res @ res)
            if best is None or sse < best[0]:
                best = (sse, z, w)
    _, z_init, w_init = best

    def residual(params):
        res, _ = _profiled_residual(t, theta, params[0], params[1])
        return res

    solution = least_squares(residual, x0=[z_init, w_init],
                             bounds=([1e-4, 1e-6], [5.0, np.inf]),
                             xtol=1e-14, ftol=1e-14, gtol=1e-14)
    res = solution.fun
    sse = float(res @ res)
    if not solution.success:
        raise IdentificationError("least-squares refinement did not converge",
                                  residual=sse)
    zeta_hat, wn_hat = float(solution.x[0]), float(solution.x[1])
    _, amp = _profiled_residual(t, theta, zeta_hat, wn_hat)
    if sse > 0.5 * float(theta @ theta):
        raise IdentificationError("fit residual exceeds half the signal energy",
                                  residual=sse)
    return FitResult(zeta=zeta_hat, omega_n=wn_hat, amplitude_deg=amp, sse=sse,
                     initial_zeta=zeta0, initial_omega_n=wn0,
                     overdamped=overdamped)
