"""Command-line front end.

Subcommands: run (scripted scenario), serve (live with telemetry), trim,
fit (release-capture identification), validate (any config file). Exit
codes: 0 success, 2 usage, 3 config/validation, 4 trim, 5 simulation
runtime, 6 identification, 7 I/O.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from .config import load_scenario, validate_file
from .errors import (
    ConfigError,
    FepsimError,
    IdentificationError,
    SingularityError,
    TrimError,
)

EXIT_OK = 0
EXIT_CONFIG = 3
EXIT_TRIM = 4
EXIT_RUNTIME = 5
EXIT_IDENT = 6
EXIT_IO = 7


def _add_protection_flag(parser):
    parser.add_argument("--protection", choices=("on", "off"), default=None,
                        help="override the scenario's protection setting")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fepsim",
        description="Deterministic pilot-in-the-loop flight simulation with "
                    "envelope protection and an active sidestick emulator.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scripted scenario to completion")
    run.add_argument("scenario", help="scenario file")
    _add_protection_flag(run)
    run.add_argument("--out", default=".", help="output directory for the log")
    run.add_argument("--replay", default=None,
                     help="JSON recording of inbound frames to replay")

    serve = sub.add_parser("serve", help="run live with WebSocket telemetry")
    serve.add_argument("scenario", help="scenario file")
    _add_protection_flag(serve)
    serve.add_argument("--out", default=".", help="output directory for the log")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--ws-port", type=int, default=8765)
    serve.add_argument("--http-port", type=int, default=8080)
    serve.add_argument("--ui-dir", default=None,
                       help="static cockpit bundle to serve over HTTP")
    serve.add_argument("--pace", type=float, default=1.0,
                       help="realtime factor (0 = as fast as possible)")
    serve.add_argument("--rate", type=float, default=30.0,
                       help="telemetry frame rate, Hz")
    serve.add_argument("--record", default=None,
                       help="write received inbound frames to this JSON file")
    serve.add_argument("--acs-udp", default=None, metavar="HOST:PORT",
                       help="mirror stick wire traffic to a UDP observer")

    trim = sub.add_parser("trim", help="solve wings-level trim")
    trim.add_argument("scenario", help="scenario file naming the configs")
    trim.add_argument("--altitude", type=float, default=None, help="ft")
    trim.add_argument("--airspeed", type=float, default=None, help="ft/s")

    fit = sub.add_parser("fit", help="identify feel parameters from a release capture")
    fit.add_argument("capture", help="CSV with time and deflection columns")

    validate = sub.add_parser("validate", help="validate any config file")
    validate.add_argument("config")
    return parser


def _protection_override(value):
    if value is None:
        return None
    return value == "on"


def _summarize(log, scenario, protection_on):
    alpha = log.column("alpha_deg")
    nz = log.column("nz_g")
    phi = np.degrees(log.column("phi_rad"))
    state = "on" if protection_on else "off"
    return (f"{scenario.name}: {len(log)} steps, protection {state}, "
            f"max alpha {alpha.max():.2f} deg, max nz {nz.max():.2f} g, "
            f"max |phi| {np.abs(phi).max():.2f} deg")


def cmd_run(args):
    from .sim import FrameOverlaySource, ScriptedSource, Simulation, export_log
    scenario = load_scenario(args.scenario)
    override = _protection_override(args.protection)
    source = None
    if args.replay is not None:
        import json
        with open(args.replay, "r", encoding="utf-8") as fh:
            recording = [(int(step), frame) for step, frame in json.load(fh)]
        source = FrameOverlaySource(ScriptedSource(scenario), recording)
    sim = Simulation(scenario, protection_override=override, input_source=source)
    aborted = None
    try:
        sim.run()
    except (SingularityError, FepsimError) as exc:
        aborted = exc
    os.makedirs(args.out, exist_ok=True)
    out_path = os.path.join(args.out, f"{scenario.name}.csv")
    extra = {"aborted": str(aborted)} if aborted else None
    export_log(sim.log, out_path, scenario=scenario, extra_meta=extra)
    print(_summarize(sim.log, scenario, sim.protection_enabled))
    print(f"log written to {out_path}")
    if aborted is not None:
        print(f"aborted early: {aborted}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_serve(args):
    import json

    from .acs.transport import UdpEndpoint
    from .sim import LiveSource, ScriptedSource, Simulation, export_log
    from .telemetry import TelemetryServer, run_live, serve_static

    scenario = load_scenario(args.scenario)
    override = _protection_override(args.protection)
    server = TelemetryServer(host=args.host, port=args.ws_port).start()
    static = None
    if args.ui_dir is not None:
        static = serve_static(args.ui_dir, host=args.host, port=args.http_port)
        print(f"cockpit assets at http://{args.host}:{args.http_port}/")
    print(f"telemetry at ws://{args.host}:{server.port}")
    source = LiveSource(ScriptedSource(scenario), server.inbound)
    sim = Simulation(scenario, protection_override=override, input_source=source)
    if args.acs_udp is not None:
        host, _, port = args.acs_udp.rpartition(":")
        sim.mirror = UdpEndpoint(local=("127.0.0.1", 0),
                                 peer=(host or "127.0.0.1", int(port)))
    aborted = None
    try:
        run_live(sim, server, decimate_hz=args.rate, pace=args.pace)
    except (SingularityError, FepsimError) as exc:
        aborted = exc
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
    finally:
        server.stop()
        if static is not None:
            static.shutdown()
    os.makedirs(args.out, exist_ok=True)
    out_path = os.path.join(args.out, f"{scenario.name}.csv")
    export_log(sim.log, out_path, scenario=scenario,
               extra_meta={"aborted": str(aborted)} if aborted else None)
    if args.record is not None:
        with open(args.record, "w", encoding="utf-8") as fh:
            json.dump(source.recording, fh, indent=1)
        print(f"inbound frames recorded to {args.record}")
    print(_summarize(sim.log, scenario, sim.protection_enabled))
    print(f"log written to {out_path}")
    return EXIT_RUNTIME if aborted else EXIT_OK


def cmd_trim(args):
    from .config import load_aero, load_aircraft
    from .trim import trim_level_flight
    scenario = load_scenario(args.scenario)
    aircraft = load_aircraft(scenario.aircraft_path)
    tables = load_aero(scenario.aero_path)
    altitude = scenario.altitude_ft if args.altitude is None else args.altitude
    airspeed = scenario.airspeed_fps if args.airspeed is None else args.airspeed
    result = trim_level_flight(altitude, airspeed, aircraft, tables)
    print(f"trim at {altitude:.0f} ft, {airspeed:.0f} ft/s:")
    print(f"  alpha  {math.degrees(result.alpha_rad):9.4f} deg")
    print(f"  tail   {result.tail_deg:9.4f} deg")
    print(f"  thrust {result.thrust_lbf:9.1f} lbf")
    print(f"  residual {result.residual:.3e} in {result.iterations} iterations")
    return EXIT_OK


def _read_capture(path):
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except (ValueError, IndexError):
                continue  # header or malformed line
    if not rows:
        raise ConfigError(f"{path}: no numeric time,deflection rows found")
    return (np.array([r[0] for r in rows]), np.array([r[1] for r in rows]))


def cmd_fit(args):
    from .acs.ident import fit_second_order
    t, theta = _read_capture(args.capture)
    fit = fit_second_order(t, theta)
    branch = "overdamped" if fit.overdamped else "oscillatory"
    print(f"fit ({branch} branch):")
    print(f"  damping ratio   {fit.zeta:9.5f}")
    print(f"  natural freq    {fit.omega_n:9.5f} rad/s")
    print(f"  amplitude       {fit.amplitude_deg:9.4f} deg")
    print(f"  residual SSE    {fit.sse:.4e}")
    print(f"  initializer     zeta {fit.initial_zeta:.4f}, "
          f"omega_n {fit.initial_omega_n:.4f}")
    return EXIT_OK


def cmd_validate(args):
    kind = validate_file(args.config)
    print(f"{args.config}: valid {kind} file")
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"run": cmd_run, "serve": cmd_serve, "trim": cmd_trim,
                "fit": cmd_fit, "validate": cmd_validate}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except TrimError as exc:
        print(f"trim error: {exc}", file=sys.stderr)
        return EXIT_TRIM
    except IdentificationError as exc:
        print(f"identification error: {exc}", file=sys.stderr)
        return EXIT_IDENT
    except SingularityError as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
