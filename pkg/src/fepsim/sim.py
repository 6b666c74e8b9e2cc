"""Scenario execution: the closed-loop pipeline stick -> protection -> rate
controller -> actuators/dynamics, with per-step logging, scripted or live
input sources, and CSV/JSON export.

Pipeline order is fixed per step: (1) sample inputs, (2) drive the stick
emulator with grip forces, (3) gear stick deflection to pilot rate commands,
(4) envelope protection, (5) incremental rate control, (6) actuators plus
rigid-body integration. Protection engagement pushes a soft-stop cue to the
stick over the message channel. Scripted runs are bit-deterministic."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from . import __version__
from .acs.emulator import AcsEmulator
from .acs.messages import (
    AXIS_PITCH,
    AXIS_ROLL,
    CharacteristicControl,
    ControlCommand,
    CueingForceControl,
    decode,
    encode,
)
from .acs.policy import TransmitPolicy
from .acs.transport import loopback_pair
from .aero import dimensionalize, lookup_coefficients
from .config import (
    AircraftConfig,
    Scenario,
    file_sha256,
    load_aero,
    load_aircraft,
    load_envelope,
)
from .dynamics import atmosphere_sample, gravity_body, integrate_step
from .errors import FepsimError
from .indi import RateController, input_map
from .protection import (
    bank_protect,
    effective_alpha_max,
    effective_alpha_min,
    longitudinal_protect,
    nz_equivalent_alpha,
    rate_protect,
)
from .aero import effectivity
from .trim import trim_level_flight

DEG2RAD = math.pi / 180.0
RAD2DEG = 180.0 / math.pi
STICK_TRAVEL_DEG = 24.0

LOG_COLUMNS = (
    "t_s", "u_fps", "v_fps", "w_fps", "p_radps", "q_radps", "r_radps",
    "phi_rad", "theta_rad", "psi_rad", "north_ft", "east_ft", "down_ft",
    "tail_deg", "aileron_deg", "rudder_deg",
    "alpha_deg", "beta_deg", "qbar_psf", "mach", "vt_fps", "nz_g",
    "alpha_max_eff_deg", "alpha_bar", "phi_bar", "nz_max_g", "phi_max_deg",
    "lambda_long", "lambda_lat",
    "pilot_p_radps", "pilot_q_radps", "pilot_r_radps",
    "cmd_p_radps", "cmd_q_radps", "cmd_r_radps",
    "indi_tail_deg", "indi_aileron_deg", "indi_rudder_deg",
    "thrust_lbf", "throttle",
    "stick_pitch_deg", "stick_roll_deg",
    "stick_pitch_force_lbf", "stick_roll_force_lbf", "acs_mode",
    "prot_enabled", "prot_rate_flag", "prot_long_flag", "prot_lat_flag",
    "aero_clamped", "env_clamped", "indi_pinv", "nz_fallback",
)


class TrajectoryLog:
    """Fixed-schema per-step records with CSV round-trip at full precision."""

    def __init__(self):
        self.rows = []

    def append(self, record: dict):
        missing = [c for c in LOG_COLUMNS if c not in record]
        if missing:
            raise ValueError(f"log record missing channels: {missing}")
        self.rows.append(tuple(float(record[c]) for c in LOG_COLUMNS))

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        idx = LOG_COLUMNS.index(name)
        return np.array([row[idx] for row in self.rows])

    def to_csv_bytes(self) -> bytes:
        lines = [",".join(LOG_COLUMNS)]
        for row in self.rows:
            lines.append(",".join(repr(v) for v in row))
        return ("\n".join(lines) + "\n").encode("ascii")


def export_log(log: TrajectoryLog, path: str, scenario: Scenario = None,
               extra_meta: dict = None):
    """Write the CSV log plus a JSON sidecar with config hashes."""
    try:
        with open(path, "wb") as fh:
            fh.write(log.to_csv_bytes())
        meta = {"package_version": __version__,
                "rows": len(log), "channels": list(LOG_COLUMNS)}
        if scenario is not None:
            meta["scenario"] = {"name": scenario.name, "dt_s": scenario.dt_s,
                                "duration_s": scenario.duration_s,
                                "protection": scenario.protection}
            meta["config_hashes"] = {k: file_sha256(v)
                                     for k, v in scenario.config_paths().items()}
        if extra_meta:
            meta.update(extra_meta)
        sidecar = os.path.splitext(path)[0] + ".meta.json"
        with open(sidecar, "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=1, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise FepsimError(f"cannot write log to {path}: {exc}")
    return path


def load_log_csv(path: str) -> dict:
    """Read an exported log back; values reproduce at full stored precision."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip().split(",")
        rows = [tuple(float(x) for x in line.strip().split(","))
                for line in fh if line.strip()]
    return {name: np.array([r[i] for r in rows])
            for i, name in enumerate(header)}


@dataclass
class StepInputs:
    grip_pitch_lbf: float = 0.0
    grip_roll_lbf: float = 0.0
    pedal: float = 0.0
    throttle: float = None          # None holds the trim setting
    rates: tuple = None             # direct (p, q, r) commands, rad/s
    protection: bool = None         # toggle event
    acs_mode: int = None            # mode request event
    reset: bool = False


class ScriptedSource:
    """Zero-order-hold evaluation of a scenario input profile."""

    def __init__(self, scenario: Scenario):
        self.mode = scenario.input_mode
        self.times = []
        self.snapshots = []
        held = {}
        for entry in scenario.profile:
            held.update(entry.values)
            self.times.append(entry.t)
            self.snapshots.append(dict(held))

    def _held_at(self, t: float) -> dict:
        idx = -1
        for i, t_i in enumerate(self.times):
            if t_i <= t + 1e-12:
                idx = i
            else:
                break
        return self.snapshots[idx] if idx >= 0 else {}

    def sample(self, step_index: int, t: float) -> StepInputs:
        held = self._held_at(t)
        if self.mode == "rates":
            return StepInputs(
                rates=(held.get("p_radps", 0.0), held.get("q_radps", 0.0),
                       held.get("r_radps", 0.0)),
                throttle=held.get("throttle"))
        return StepInputs(grip_pitch_lbf=held.get("pitch_lbf", 0.0),
                          grip_roll_lbf=held.get("roll_lbf", 0.0),
                          pedal=held.get("pedal", 0.0),
                          throttle=held.get("throttle"))


def _merge_frame(inputs: StepInputs, frame: dict) -> StepInputs:
    grip = frame.get("grip", {})
    if "pitch" in grip:
        inputs.grip_pitch_lbf = float(grip["pitch"])
    if "roll" in grip:
        inputs.grip_roll_lbf = float(grip["roll"])
    if "pedal" in frame:
        inputs.pedal = float(frame["pedal"])
    if "throttle" in frame:
        inputs.throttle = float(frame["throttle"])
    if "protection" in frame:
        inputs.protection = bool(frame["protection"])
    if "acs_mode" in frame:
        inputs.acs_mode = {"disabled": 0, "enabled": 1, "jammed": 2}.get(
            str(frame["acs_mode"]).lower())
    if frame.get("reset"):
        inputs.reset = True
    return inputs


class FrameOverlaySource:
    """Scripted base plus recorded command frames applied at fixed steps.

    Frames persist: a grip value from a frame holds until a later frame (or
    the base profile never reasserts grip channels in live mode).
    """

    def __init__(self, base: ScriptedSource, frames):
        self.base = base
        self.frames = sorted(frames, key=lambda sf: sf[0])
        self._cursor = 0
        self._held = {}

    def sample(self, step_index: int, t: float) -> StepInputs:
        inputs = self.base.sample(step_index, t)
        events = []
        while (self._cursor < len(self.frames)
               and self.frames[self._cursor][0] <= step_index):
            events.append(self.frames[self._cursor][1])
            self._cursor += 1
        for frame in events:
            if "grip" in frame:
                # grip holds per axis: a roll-only frame keeps the held pitch
                self._held.setdefault("grip", {}).update(frame["grip"])
            for key in ("pedal", "throttle"):
                if key in frame:
                    self._held[key] = frame[key]
        if self._held:
            inputs = _merge_frame(inputs, self._held)
        for frame in events:
            transient = {k: v for k, v in frame.items()
                         if k in ("protection", "acs_mode", "reset")}
            if transient:
                inputs = _merge_frame(inputs, transient)
        return inputs


class LiveSource:
    """Scripted base plus frames drained from a thread-safe queue.

    Every applied frame is recorded with its step index so the run can be
    replayed exactly through FrameOverlaySource.
    """

    def __init__(self, base: ScriptedSource, inbound):
        self.base = base
        self.inbound = inbound        # queue.Queue of dict frames
        self.recording = []
        self._overlay = FrameOverlaySource(base, [])

    def sample(self, step_index: int, t: float) -> StepInputs:
        while True:
            try:
                frame = self.inbound.get_nowait()
            except Exception:
                break
            self.recording.append((step_index, frame))
            self._overlay.frames.append((step_index, frame))
        return self._overlay.sample(step_index, t)


class Simulation:
    """Owns all mutable state of one scenario run."""

    def __init__(self, scenario: Scenario, protection_override=None,
                 input_source=None, aircraft: AircraftConfig = None,
                 tables=None, envelope=None):
        self.scenario = scenario
        self.aircraft = aircraft or load_aircraft(scenario.aircraft_path)
        self.tables = tables or load_aero(scenario.aero_path)
        self.envelope = envelope or load_envelope(scenario.envelope_path)
        self.protection_enabled = (scenario.protection
                                   if protection_override is None
                                   else protection_override)
        self.dt = scenario.dt_s
        self.steps_total = round(scenario.duration_s / scenario.dt_s)
        self.source = input_source or ScriptedSource(scenario)
        self.log = TrajectoryLog()

        trim = trim_level_flight(scenario.altitude_ft, scenario.airspeed_fps,
                                 self.aircraft, self.tables)
        self.trim = trim
        self._initial_state = trim.state.copy()
        self.state = trim.state.copy()
        self.thrust_lbf = trim.thrust_lbf
        self.trim_throttle = trim.thrust_lbf / self.aircraft.thrust.max_lbf
        self._thrust_alpha = 1.0 - math.exp(-self.dt / self.aircraft.thrust.tau_s)

        indi = self.aircraft.indi
        self.controller = RateController(
            indi.gains, indi.filter_natural_freq_radps, indi.filter_damping,
            self.aircraft.position_limits_deg, dt=self.dt,
            cond_limit=indi.condition_limit)
        self.controller.reset(np.zeros(3), self.state.surfaces)

        self.step_index = 0
        self._cue_state = {AXIS_PITCH: None, AXIS_ROLL: None}
        self._cue_last_active = {AXIS_PITCH: None, AXIS_ROLL: None}
        self._cue_hold_steps = max(1, round(0.5 / self.dt))
        self._last_limits = None
        self.status_log = []      # decoded RotaryStatus stream (wire truth)
        self.mirror = None        # optional UDP mirror endpoint

        self.acs = AcsEmulator(pitch_curve=self.aircraft.stick_pitch.curve,
                               roll_curve=self.aircraft.stick_roll.curve,
                               pitch_feel=self.aircraft.stick_pitch.feel_fields(),
                               roll_feel=self.aircraft.stick_roll.feel_fields(),
                               status_rate_hz=self.aircraft.acs_status_rate_hz)
        self.host_port, self.device_port = loopback_pair()
        self.host_policy = TransmitPolicy()
        self.acs.run_ibit()
        self._send_to_acs(ControlCommand(mode_request=1))
        self._send_to_acs(CharacteristicControl(
            fade_time_s=self.aircraft.protection.softstop_fade_s))
        self._pump_acs()

    # -- ACS message channel ---------------------------------------------

    def _send_to_acs(self, message):
        for msg in self.host_policy.offer(message, self.step_index * self.dt):
            self.host_port.send(encode(msg))

    def _mirror_send(self, wire: bytes):
        # observing is never load-bearing: drop on any transport trouble
        if self.mirror is None:
            return
        try:
            self.mirror.send(wire)
        except OSError:
            pass

    def _pump_acs(self):
        now = self.step_index * self.dt
        for msg in self.host_policy.due(now):
            self.host_port.send(encode(msg))
        for datagram in self.device_port.receive():
            for reply in self.acs.handle_datagram(datagram):
                self.device_port.send(reply)
                self._mirror_send(reply)
        for datagram in self.host_port.receive():
            message = decode(datagram)
            if message.MSG_ID == 20:
                self.status_log.append(message)

    def _update_softstop_cues(self, long_active: bool, lat_active: bool,
                              phi_rad: float):
        # the cue latches: it drops only after protection stays quiet for a
        # hold time, so brief fade exits do not flutter the stick feel
        prot = self.aircraft.protection
        pos = prot.softstop_fraction * STICK_TRAVEL_DEG
        for axis, active, position in (
                (AXIS_PITCH, long_active, pos),
                (AXIS_ROLL, lat_active, math.copysign(pos, phi_rad or 1.0))):
            if active:
                self._cue_last_active[axis] = self.step_index
            last = self._cue_last_active[axis]
            hold = last is not None and \
                (self.step_index - last) < self._cue_hold_steps
            enable = active or hold
            if enable and self._cue_state[axis] is not None \
                    and self._cue_state[axis][0]:
                position = self._cue_state[axis][1]  # keep the installed side
            if self._cue_state[axis] == (enable, position):
                continue
            self._cue_state[axis] = (enable, position)
            self._send_to_acs(CueingForceControl(
                axis=axis, enable=enable, softstop_pos_deg=position,
                gradient_multiplier=prot.softstop_multiplier))

    # -- pipeline ----------------------------------------------------------

    def _reset_run(self):
        self.state = self._initial_state.copy()
        self.thrust_lbf = self.trim.thrust_lbf
        self.controller.reset(np.zeros(3), self.state.surfaces)

    def step(self):
        """Advance one dt; appends and returns the log record."""
        t = self.step_index * self.dt
        inputs = self.source.sample(self.step_index, t)
        if inputs.reset:
            self._reset_run()
        if inputs.protection is not None:
            self.protection_enabled = inputs.protection
        if inputs.acs_mode is not None:
            self._send_to_acs(ControlCommand(mode_request=inputs.acs_mode))

        # stick feel
        self._pump_acs()
        self.acs.step(self.dt, grip_forces=(inputs.grip_pitch_lbf,
                                            inputs.grip_roll_lbf))
        for status in self.acs.poll_status():
            wire = encode(status)
            self.device_port.send(wire)
            self._mirror_send(wire)
        pitch_state = self.acs.axis_state(AXIS_PITCH)
        roll_state = self.acs.axis_state(AXIS_ROLL)

        # stick-to-command gearing (or direct rates)
        gear = self.aircraft.gearing
        if inputs.rates is not None:
            pilot = np.array(inputs.rates, dtype=float)
        else:
            pilot = np.array([
                roll_state.theta_deg / STICK_TRAVEL_DEG * gear.p_max_radps,
                pitch_state.theta_deg / STICK_TRAVEL_DEG * gear.q_max_radps,
                inputs.pedal * gear.r_max_radps,
            ])

        # measurements at the start of the step
        state = self.state
        altitude = state.altitude_ft
        sample = atmosphere_sample(state.velocity, altitude)
        alpha_deg = sample.alpha_rad * RAD2DEG
        beta_deg = sample.beta_rad * RAD2DEG
        coeffs = lookup_coefficients(alpha_deg, beta_deg, state.surfaces,
                                     state.omega, sample, self.tables,
                                     self.aircraft.geometry)
        aero_force, _ = dimensionalize(coeffs, sample, self.aircraft.geometry)
        weight = self.aircraft.mass.weight_lbf
        nz_g = -aero_force[2] / weight
        limits, env_clamped = self.envelope.schedule(sample.mach, altitude)
        self._last_limits = limits

        # protection
        phi = float(state.euler[0])
        p, q, r = (float(state.omega[0]), float(state.omega[1]),
                   float(state.omega[2]))
        alpha_max_eff = limits.alpha_max_deg * DEG2RAD
        long_active = lat_active = False
        rate_flag = False
        nz_fallback = False
        lambda_long = lambda_lat = 1.0
        if self.protection_enabled:
            prot = self.aircraft.protection
            alpha_nz_max, fb_hi = nz_equivalent_alpha(
                weight, limits.nz_max_g, sample.qbar,
                self.aircraft.geometry.area_ft2, coeffs.cz_alpha,
                limits.alpha_max_deg * DEG2RAD, prot.qbar_floor_psf)
            alpha_nz_min, fb_lo = nz_equivalent_alpha(
                weight, limits.nz_min_g, sample.qbar,
                self.aircraft.geometry.area_ft2, coeffs.cz_alpha,
                limits.alpha_min_deg * DEG2RAD, prot.qbar_floor_psf)
            nz_fallback = fb_hi or fb_lo
            alpha_max_eff = effective_alpha_max(limits.alpha_max_deg * DEG2RAD,
                                                alpha_nz_max)
            alpha_min_eff = effective_alpha_min(limits.alpha_min_deg * DEG2RAD,
                                                alpha_nz_min)
            q_c, long_active, lambda_long = longitudinal_protect(
                pilot[1], sample.alpha_rad, q, alpha_max_eff, limits,
                prot.gains, alpha_min_eff_rad=alpha_min_eff)
            p_c, lat_active, lambda_lat = bank_protect(pilot[0], phi, p, r,
                                                       limits, prot.gains)
            r_c = float(np.clip(pilot[2], limits.r_min, limits.r_max))
            commanded = np.array([p_c, q_c, r_c])
            saturated = rate_protect(pilot, limits)
            rate_flag = bool(np.any(saturated != pilot))
            self._update_softstop_cues(long_active, lat_active, phi)
        else:
            commanded = pilot.copy()
            self._update_softstop_cues(False, False, phi)

        # incremental rate control
        eff = effectivity(alpha_deg, beta_deg, state.surfaces, self.tables)
        g_matrix = input_map(self.aircraft.mass.inertia_inv, sample.qbar,
                             self.aircraft.geometry, eff.phi)
        delta_cmd, used_pinv = self.controller.step(commanded, state.omega,
                                                    g_matrix)

        # thrust lag toward the commanded setting
        throttle = self.trim_throttle if inputs.throttle is None else inputs.throttle
        throttle = min(1.0, max(0.0, throttle))
        self.thrust_lbf += (throttle * self.aircraft.thrust.max_lbf
                            - self.thrust_lbf) * self._thrust_alpha

        # dynamics
        aero_clamped = coeffs.clamped

        def force_moment(stage_state, stage_t):
            nonlocal aero_clamped
            s = atmosphere_sample(stage_state.velocity, stage_state.altitude_ft)
            c = lookup_coefficients(s.alpha_rad * RAD2DEG, s.beta_rad * RAD2DEG,
                                    stage_state.surfaces, stage_state.omega,
                                    s, self.tables, self.aircraft.geometry,
                                    need_cz_alpha=False)
            aero_clamped = aero_clamped or c.clamped
            force, moment = dimensionalize(c, s, self.aircraft.geometry)
            force = force + gravity_body(stage_state.euler, weight)
            force[0] += self.thrust_lbf
            return force, moment

        new_state = integrate_step(state, delta_cmd, self.aircraft.actuators,
                                   self.aircraft.mass, force_moment, self.dt, t)

        record = {
            "t_s": t,
            "u_fps": state.velocity[0], "v_fps": state.velocity[1],
            "w_fps": state.velocity[2],
            "p_radps": p, "q_radps": q, "r_radps": r,
            "phi_rad": phi, "theta_rad": state.euler[1],
            "psi_rad": state.euler[2],
            "north_ft": state.position[0], "east_ft": state.position[1],
            "down_ft": state.position[2],
            "tail_deg": state.surfaces[0], "aileron_deg": state.surfaces[1],
            "rudder_deg": state.surfaces[2],
            "alpha_deg": alpha_deg, "beta_deg": beta_deg,
            "qbar_psf": sample.qbar, "mach": sample.mach, "vt_fps": sample.vt,
            "nz_g": nz_g,
            "alpha_max_eff_deg": alpha_max_eff * RAD2DEG,
            "alpha_bar": sample.alpha_rad / alpha_max_eff if alpha_max_eff else 0.0,
            "phi_bar": abs(phi) / (limits.phi_max_deg * DEG2RAD),
            "nz_max_g": limits.nz_max_g,
            "phi_max_deg": limits.phi_max_deg,
            "lambda_long": lambda_long, "lambda_lat": lambda_lat,
            "pilot_p_radps": pilot[0], "pilot_q_radps": pilot[1],
            "pilot_r_radps": pilot[2],
            "cmd_p_radps": commanded[0], "cmd_q_radps": commanded[1],
            "cmd_r_radps": commanded[2],
            "indi_tail_deg": delta_cmd[0], "indi_aileron_deg": delta_cmd[1],
            "indi_rudder_deg": delta_cmd[2],
            "thrust_lbf": self.thrust_lbf, "throttle": throttle,
            "stick_pitch_deg": pitch_state.theta_deg,
            "stick_roll_deg": roll_state.theta_deg,
            "stick_pitch_force_lbf": inputs.grip_pitch_lbf,
            "stick_roll_force_lbf": inputs.grip_roll_lbf,
            "acs_mode": int(pitch_state.mode),
            "prot_enabled": float(self.protection_enabled),
            "prot_rate_flag": float(rate_flag),
            "prot_long_flag": float(long_active),
            "prot_lat_flag": float(lat_active),
            "aero_clamped": float(aero_clamped),
            "env_clamped": float(env_clamped),
            "indi_pinv": float(used_pinv),
            "nz_fallback": float(nz_fallback),
        }
        self.log.append(record)
        self.state = new_state
        self.step_index += 1
        return record

    def run(self) -> TrajectoryLog:
        """Run to the scenario duration; the partial log survives aborts."""
        while self.step_index < self.steps_total:
            self.step()
        return self.log

    def frame(self) -> dict:
        """Current telemetry state frame (shares the log's conventions)."""
        if not self.log.rows:
            return {"type": "state", "t": 0.0}
        last = dict(zip(LOG_COLUMNS, self.log.rows[-1]))
        prot = self.aircraft.protection
        pitch_unit = self.acs.axes[AXIS_PITCH]
        roll_unit = self.acs.axes[AXIS_ROLL]

        def curve_points(unit):
            curve = unit.effective_curve()
            if hasattr(curve, "points"):
                return [[p, f] for p, f in curve.points]
            positions = sorted({p for p, _ in curve.old.points}
                               | {p for p, _ in curve.new.points})
            return [[p, curve.force_at(p)] for p in positions]

        return {
            "type": "state",
            "t": last["t_s"],
            "attitude_deg": {"phi": last["phi_rad"] * RAD2DEG,
                             "theta": last["theta_rad"] * RAD2DEG,
                             "psi": last["psi_rad"] * RAD2DEG},
            "rates_dps": {"p": last["p_radps"] * RAD2DEG,
                          "q": last["q_radps"] * RAD2DEG,
                          "r": last["r_radps"] * RAD2DEG},
            "alpha_deg": last["alpha_deg"], "beta_deg": last["beta_deg"],
            "nz_g": last["nz_g"], "qbar_psf": last["qbar_psf"],
            "airspeed_fps": last["vt_fps"],
            "altitude_ft": -last["down_ft"],
            "limits": {"alpha_max_deg": last["alpha_max_eff_deg"],
                       "alpha_min_deg": self._last_limits.alpha_min_deg,
                       "nz_max_g": self._last_limits.nz_max_g,
                       "nz_min_g": self._last_limits.nz_min_g,
                       "phi_max_deg": self._last_limits.phi_max_deg,
                       "q_max_dps": self._last_limits.q_max * RAD2DEG,
                       "p_max_dps": self._last_limits.p_max * RAD2DEG},
            "alpha_bar": last["alpha_bar"], "phi_bar": last["phi_bar"],
            "stick": {"pitch": {"theta_deg": last["stick_pitch_deg"],
                                "force_lbf": last["stick_pitch_force_lbf"]},
                      "roll": {"theta_deg": last["stick_roll_deg"],
                               "force_lbf": last["stick_roll_force_lbf"]}},
            "ffc": {"pitch": curve_points(pitch_unit),
                    "roll": curve_points(roll_unit)},
            "protection": {"enabled": bool(last["prot_enabled"]),
                           "rate": bool(last["prot_rate_flag"]),
                           "longitudinal": bool(last["prot_long_flag"]),
                           "lateral": bool(last["prot_lat_flag"])},
            "acs_mode": {0: "disabled", 1: "enabled", 2: "jammed"}[
                int(last["acs_mode"])],
        }


def run_scenario(scenario: Scenario, protection_override=None,
                 input_source=None) -> TrajectoryLog:
    sim = Simulation(scenario, protection_override=protection_override,
                     input_source=input_source)
    return sim.run()
