#!/usr/bin/env python3
"""Regenerate the coarse stand-in aero dataset shipped with the package.

The grids are sampled from smooth analytic shapes with realistic signs and
magnitudes for a small supersonic-class fighter at low Mach. They are a
desk-scale stand-in: the table file format is the contract, and a real
dataset in the same format can be dropped in via the normal loader.
"""

import json
import os

ALPHA = [-10.0 + 5.0 * i for i in range(12)]          # -10..45 deg
BETA = [-30.0 + 6.0 * i for i in range(11)]           # -30..30 deg
TAIL = [-25.0, -12.5, 0.0, 12.5, 25.0]
AILERON = [-21.5, -10.75, 0.0, 10.75, 21.5]
RUDDER = [-30.0, -15.0, 0.0, 15.0, 30.0]


def grid(axes, fn):
    """Row-major sample of fn over the cartesian product of axes."""
    names = [n for n, _ in axes]
    values = []

    def rec(prefix):
        depth = len(prefix)
        if depth == len(axes):
            values.append(fn(**dict(zip(names, prefix))))
            return
        for x in axes[depth][1]:
            rec(prefix + [x])

    rec([])
    return {"axes": [[n, list(b)] for n, b in axes], "values": values}


def main():
    blocks = []

    blocks.append({"target": "Cx", **grid(
        [("alpha", ALPHA), ("tail", TAIL)],
        lambda alpha, tail: -0.021 + 1.8e-4 * alpha ** 2 - 3.0e-5 * tail ** 2)})

    blocks.append({"target": "Cy", **grid(
        [("beta", BETA), ("rudder", RUDDER)],
        lambda beta, rudder: -0.016 * beta + 0.0034 * rudder)})

    blocks.append({"target": "Cz", **grid(
        [("alpha", ALPHA)],
        lambda alpha: -0.077 * alpha)})

    blocks.append({"target": "Cl", **grid(
        [("beta", BETA), ("aileron", AILERON), ("rudder", RUDDER)],
        lambda beta, aileron, rudder:
            -0.0019 * beta + 0.00203 * aileron + 0.000215 * rudder)})

    blocks.append({"target": "Cm", **grid(
        [("alpha", ALPHA), ("tail", TAIL)],
        lambda alpha, tail: 0.010 - 0.0040 * alpha - 0.0105 * tail)})

    blocks.append({"target": "Cn", **grid(
        [("beta", BETA), ("aileron", AILERON), ("rudder", RUDDER)],
        lambda beta, aileron, rudder:
            0.00132 * beta - 0.000115 * aileron - 0.00112 * rudder)})

    # rate derivatives, per rad, normalized p*b/2V, q*cbar/2V, r*b/2V
    rate_shapes = [
        ("Cx", "q", lambda alpha: 0.30),
        ("Cy", "p", lambda alpha: -0.075),
        ("Cy", "r", lambda alpha: 0.43),
        ("Cz", "q", lambda alpha: -25.0),
        ("Cl", "p", lambda alpha: -0.35 - 0.0008 * alpha),
        ("Cl", "r", lambda alpha: 0.16 + 0.001 * alpha),
        ("Cm", "q", lambda alpha: -8.5 + 0.01 * alpha),
        ("Cn", "p", lambda alpha: -0.037),
        ("Cn", "r", lambda alpha: -0.33),
    ]
    for target, rate, fn in rate_shapes:
        blocks.append({"target": target, "rate": rate,
                       **grid([("alpha", ALPHA)], fn)})

    doc = {
        "kind": "aero_tables",
        "version": 1,
        "description": "coarse stand-in dataset (desk-scale testing only)",
        "envelope": {"alpha_deg": [-10.0, 45.0], "beta_deg": [-30.0, 30.0],
                     "mach_max": 0.6},
        "blocks": blocks,
    }
    out = os.path.join(os.path.dirname(__file__), "..", "src", "fepsim", "data",
                       "standin_aero.json")
    out = os.path.normpath(out)
    os.makedirs(os.path.dirname(out), exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
