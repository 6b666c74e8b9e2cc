#!/usr/bin/env python3
"""Regenerate the scenario files shipped with the package, including the
aggressive nose-up family used by the protection regression suite."""

import json
import os

OUT_DIR = os.path.normpath(os.path.join(os.path.dirname(__file__), "..",
                                        "src", "fepsim", "data", "scenarios"))

BUILTINS = {
    "aircraft": "builtin:default_aircraft.json",
    "aero": "builtin:standin_aero.json",
    "envelope": "builtin:default_envelope.json",
}


def scenario(name, altitude, airspeed, dt, duration, protection, mode, profile):
    return {
        "kind": "scenario", "version": 1, "name": name,
        **BUILTINS,
        "initial": {"altitude_ft": altitude, "airspeed_fps": airspeed},
        "dt_s": dt, "duration_s": duration, "protection": protection,
        "input": {"mode": mode, "profile": profile},
    }


def write(doc, *relpath):
    path = os.path.join(OUT_DIR, *relpath)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    print(f"wrote {path}")


def main():
    write(scenario("level_hold", 10000.0, 500.0, 0.002, 3.0, True, "grip",
                   [{"t": 0.0, "pitch_lbf": 0.0, "roll_lbf": 0.0, "pedal": 0.0}]),
          "level_hold.json")

    # decoupled rate steps for controller regression (protection off so the
    # tracking is unobstructed)
    write(scenario("pitch_rate_step", 10000.0, 500.0, 0.001, 4.0, False, "rates",
                   [{"t": 0.0, "p_radps": 0.0, "q_radps": 0.0, "r_radps": 0.0},
                    {"t": 0.5, "q_radps": 0.2}]),
          "pitch_rate_step.json")
    write(scenario("roll_rate_step", 10000.0, 500.0, 0.001, 4.0, False, "rates",
                   [{"t": 0.0, "p_radps": 0.0, "q_radps": 0.0, "r_radps": 0.0},
                    {"t": 0.5, "p_radps": 0.5}]),
          "roll_rate_step.json")
    write(scenario("yaw_rate_step", 10000.0, 500.0, 0.001, 4.0, False, "rates",
                   [{"t": 0.0, "p_radps": 0.0, "q_radps": 0.0, "r_radps": 0.0},
                    {"t": 0.5, "r_radps": 0.2}]),
          "yaw_rate_step.json")
    write(scenario("coupled_rates", 10000.0, 500.0, 0.001, 20.0, False, "rates",
                   [{"t": 0.0, "p_radps": 0.0, "q_radps": 0.0, "r_radps": 0.0},
                    {"t": 0.5, "p_radps": 0.4, "q_radps": 0.1, "r_radps": 0.05}]),
          "coupled_rates.json")

    # full-authority grip scenarios: a sustained maximum pull is a loop
    # entry, so the pull is held for ~3 s under combat thrust and released
    write(scenario("noseup_full_grip", 10000.0, 500.0, 0.002, 6.0, True, "grip",
                   [{"t": 0.0, "pitch_lbf": 0.0, "roll_lbf": 0.0, "pedal": 0.0},
                    {"t": 0.5, "pitch_lbf": 27.0, "throttle": 1.0},
                    {"t": 3.5, "pitch_lbf": 0.0}]),
          "noseup_full_grip.json")
    write(scenario("bank_full_grip", 10000.0, 500.0, 0.002, 10.0, True, "grip",
                   [{"t": 0.0, "pitch_lbf": 0.0, "roll_lbf": 0.0, "pedal": 0.0},
                    {"t": 0.5, "roll_lbf": 27.0}]),
          "bank_full_grip.json")
    # moderate pedal: sustained full rudder builds enough sideslip for the
    # dihedral moment to overpower the ailerons outright
    write(scenario("bank_yaw_buildup", 10000.0, 500.0, 0.002, 10.0, True, "grip",
                   [{"t": 0.0, "pitch_lbf": 0.0, "roll_lbf": 0.0, "pedal": 0.0},
                    {"t": 0.5, "roll_lbf": 27.0, "pedal": 0.4}]),
          "bank_yaw_buildup.json")

    # force-displacement trace: a moderate pull engages the protection (the
    # soft stop installs), then a slow ramp sweeps the stick quasi-statically
    # through the steepened region
    ramp = [{"t": 0.0, "pitch_lbf": 0.0, "roll_lbf": 0.0, "pedal": 0.0,
             "throttle": 1.0},
            {"t": 0.5, "pitch_lbf": 18.0}]
    for i in range(1, 51):
        ramp.append({"t": round(3.0 + i * 0.05, 2),
                     "pitch_lbf": round(min(27.0, 18.0 + i * 0.18), 2)})
    write(scenario("softstop_trace", 10000.0, 500.0, 0.002, 6.0, True, "grip", ramp),
          "softstop_trace.json")

    # nose-up family: spans the incidence-limited and load-factor-limited
    # corners of the envelope
    # hold time shrinks with speed: a held 9g-class pull arcs through the
    # vertical in a few seconds
    family = [
        ("f01", 10000.0, 440.0, 27.0, 3.0), ("f02", 10000.0, 480.0, 27.0, 3.0),
        ("f03", 10000.0, 520.0, 27.0, 3.0), ("f04", 8000.0, 500.0, 24.0, 3.0),
        ("f05", 12000.0, 500.0, 27.0, 3.0), ("f06", 10000.0, 560.0, 24.0, 2.5),
        ("f07", 3000.0, 600.0, 27.0, 2.0), ("f08", 3000.0, 640.0, 27.0, 2.0),
        ("f09", 5000.0, 620.0, 24.0, 2.0), ("f10", 2000.0, 630.0, 27.0, 2.0),
        ("f11", 4000.0, 640.0, 27.0, 2.0), ("f12", 6000.0, 600.0, 24.0, 2.0),
    ]
    for name, altitude, airspeed, force, hold in family:
        doc = scenario(f"noseup_{name}", altitude, airspeed, 0.002,
                       round(hold + 2.5, 1), True, "grip",
                       [{"t": 0.0, "pitch_lbf": 0.0, "roll_lbf": 0.0, "pedal": 0.0},
                        {"t": 0.5, "pitch_lbf": force, "throttle": 1.0},
                        {"t": round(0.5 + hold, 1), "pitch_lbf": 0.0}])
        write(doc, "noseup_family", f"{name}.json")


if __name__ == "__main__":
    main()
