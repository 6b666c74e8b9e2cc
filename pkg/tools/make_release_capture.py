#!/usr/bin/env python3
"""Regenerate the synthetic stick-release capture shipped for the fit
command: a 10 deg deflection released at t=0 with the default feel
parameters (zeta 0.35, gradient 2 lbf/deg, inertia 0.6)."""

import math
import os

from fepsim.acs.feel import analytic_release

ZETA = 0.35
OMEGA_N = math.sqrt(2.0 / 0.6)
THETA0 = 10.0
DT = 0.005
DURATION = 10.0


def main():
    out = os.path.normpath(os.path.join(os.path.dirname(__file__), "..", "src",
                                        "fepsim", "data", "release_capture.csv"))
    lines = ["t_s,theta_deg"]
    steps = int(DURATION / DT)
    for i in range(steps + 1):
        t = i * DT
        lines.append(f"{t:.3f},{analytic_release(t, THETA0, ZETA, OMEGA_N):.9f}")
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
