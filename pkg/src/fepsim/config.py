"""Configuration file loading and validation.

All files are versioned JSON with a ``kind`` discriminator: aircraft
(mass/inertia/geometry/actuators plus controller, protection, gearing and
stick-feel sections), aero tables, the envelope database, and scenarios.
Paths referenced from a scenario resolve relative to the scenario file;
the ``builtin:`` prefix resolves into the packaged data directory."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .acs.ffc import FfcCurve
from .aero import AeroTables
from .dynamics import ActuatorSpec, MassProperties
from .errors import ConfigError
from .indi import IndiGains
from .protection import EnvelopeDatabase, EnvelopeLimits, ProtectionGains

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
SURFACE_ORDER = ("tail", "aileron", "rudder")


def builtin_path(name: str) -> str:
    return os.path.join(DATA_DIR, name)


def resolve_path(ref: str, base_dir: str) -> str:
    if ref.startswith("builtin:"):
        return builtin_path(ref[len("builtin:"):])
    if os.path.isabs(ref):
        return ref
    return os.path.normpath(os.path.join(base_dir, ref))


def file_sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _load_json(path: str, expected_kind: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}")
    if raw.get("kind") != expected_kind:
        raise ConfigError(f"{path}: expected kind {expected_kind!r}, "
                          f"found {raw.get('kind')!r}", field="kind")
    if "version" not in raw:
        raise ConfigError(f"{path}: version field is mandatory", field="version")
    return raw


def _require(raw: dict, key: str, context: str):
    if key not in raw:
        raise ConfigError(f"missing required field {key!r}", field=context)
    return raw[key]


@dataclass(frozen=True)
class Geometry:
    area_ft2: float
    span_ft: float
    chord_ft: float

    def __post_init__(self):
        if min(self.area_ft2, self.span_ft, self.chord_ft) <= 0.0:
            raise ConfigError("geometry values must be positive", field="geometry")


@dataclass(frozen=True)
class ThrustConfig:
    max_lbf: float
    tau_s: float

    def __post_init__(self):
        if self.max_lbf <= 0.0 or self.tau_s <= 0.0:
            raise ConfigError("thrust parameters must be positive", field="thrust")


@dataclass(frozen=True)
class GearingConfig:
    """Full stick deflection (24 deg) / full pedal maps to these rates."""

    p_max_radps: float
    q_max_radps: float
    r_max_radps: float

    def __post_init__(self):
        if min(self.p_max_radps, self.q_max_radps, self.r_max_radps) <= 0.0:
            raise ConfigError("gearing rates must be positive", field="gearing")


@dataclass(frozen=True)
class ProtectionConfig:
    gains: ProtectionGains
    qbar_floor_psf: float = 10.0
    softstop_fraction: float = 0.85    # of full stick travel
    softstop_multiplier: float = 3.0
    softstop_fade_s: float = 0.3

    def __post_init__(self):
        if self.qbar_floor_psf <= 0.0:
            raise ConfigError("qbar floor must be positive", field="protection")
        if not 0.0 < self.softstop_fraction < 1.0:
            raise ConfigError("softstop fraction must be inside (0, 1)",
                              field="protection")
        if self.softstop_multiplier <= 1.0:
            raise ConfigError("softstop multiplier must exceed 1", field="protection")


@dataclass(frozen=True)
class StickConfig:
    inertia: float
    zeta: float
    curve: FfcCurve
    friction_coulomb_lbf: float = 0.0
    friction_viscous: float = 0.0

    def feel_fields(self) -> dict:
        return {"inertia": self.inertia, "zeta": self.zeta,
                "friction_coulomb_lbf": self.friction_coulomb_lbf,
                "friction_viscous": self.friction_viscous}


@dataclass(frozen=True)
class IndiConfig:
    gains: IndiGains
    filter_natural_freq_radps: float = 50.0
    filter_damping: float = 0.7
    condition_limit: float = 1e6

    def __post_init__(self):
        if self.filter_natural_freq_radps <= 0.0 or self.filter_damping <= 0.0:
            raise ConfigError("filter parameters must be positive", field="indi")


@dataclass
class AircraftConfig:
    name: str
    mass: MassProperties
    geometry: Geometry
    gravity_ftps2: float
    actuators: tuple          # (tail, aileron, rudder) ActuatorSpec
    indi: IndiConfig
    thrust: ThrustConfig
    gearing: GearingConfig
    protection: ProtectionConfig
    stick_pitch: StickConfig
    stick_roll: StickConfig
    acs_status_rate_hz: float
    path: str = ""

    @property
    def position_limits_deg(self):
        return tuple((a.pos_min_deg, a.pos_max_deg) for a in self.actuators)


def load_aircraft(path: str) -> AircraftConfig:
    raw = _load_json(path, "aircraft")
    mass = MassProperties(
        mass_slug=float(_require(raw, "mass_slug", "aircraft")),
        inertia=np.array(_require(raw, "inertia_slugft2", "aircraft"), dtype=float))
    geo_raw = _require(raw, "geometry", "aircraft")
    geometry = Geometry(area_ft2=float(geo_raw["area_ft2"]),
                        span_ft=float(geo_raw["span_ft"]),
                        chord_ft=float(geo_raw["chord_ft"]))
    act_raw = _require(raw, "actuators", "aircraft")
    actuators = []
    for name in SURFACE_ORDER:
        if name not in act_raw:
            raise ConfigError(f"missing actuator spec for {name}", field="actuators")
        a = act_raw[name]
        actuators.append(ActuatorSpec(tau_s=float(a["tau_s"]),
                                      rate_limit_dps=float(a["rate_limit_dps"]),
                                      pos_min_deg=float(a["pos_min_deg"]),
                                      pos_max_deg=float(a["pos_max_deg"])))
    indi_raw = _require(raw, "indi", "aircraft")
    indi = IndiConfig(
        gains=IndiGains(kp=float(indi_raw["kp"]), kq=float(indi_raw["kq"]),
                        kr=float(indi_raw["kr"])),
        filter_natural_freq_radps=float(indi_raw.get("filter_natural_freq_radps", 50.0)),
        filter_damping=float(indi_raw.get("filter_damping", 0.7)),
        condition_limit=float(indi_raw.get("condition_limit", 1e6)))
    thrust_raw = _require(raw, "thrust", "aircraft")
    thrust = ThrustConfig(max_lbf=float(thrust_raw["max_lbf"]),
                          tau_s=float(thrust_raw["tau_s"]))
    gear_raw = _require(raw, "gearing", "aircraft")
    gearing = GearingConfig(p_max_radps=float(gear_raw["p_max_radps"]),
                            q_max_radps=float(gear_raw["q_max_radps"]),
                            r_max_radps=float(gear_raw["r_max_radps"]))
    prot_raw = dict(_require(raw, "protection", "aircraft"))
    gain_fields = {k: prot_raw.pop(k) for k in
                   ("k_alpha", "k_qdamp", "k_phi", "k_pdamp", "k_rdamp",
                    "alpha_fade", "phi_fade") if k in prot_raw}
    try:
        protection = ProtectionConfig(gains=ProtectionGains(**gain_fields), **prot_raw)
    except TypeError as exc:
        raise ConfigError(f"bad protection section: {exc}", field="protection")
    stick_raw = _require(raw, "stick", "aircraft")

    def load_stick(axis_name):
        s = stick_raw[axis_name]
        try:
            curve = FfcCurve(tuple((p, f) for p, f in s["ffc"]))
        except ConfigError as exc:
            raise ConfigError(f"stick.{axis_name}.ffc: {exc}")
        return StickConfig(inertia=float(s["inertia"]), zeta=float(s["zeta"]),
                           curve=curve,
                           friction_coulomb_lbf=float(s.get("friction_coulomb_lbf", 0.0)),
                           friction_viscous=float(s.get("friction_viscous", 0.0)))

    acs_raw = raw.get("acs", {})
    return AircraftConfig(
        name=raw.get("name", "unnamed"),
        mass=mass, geometry=geometry,
        gravity_ftps2=float(raw.get("gravity_ftps2", 32.174)),
        actuators=tuple(actuators), indi=indi, thrust=thrust, gearing=gearing,
        protection=protection,
        stick_pitch=load_stick("pitch"), stick_roll=load_stick("roll"),
        acs_status_rate_hz=float(acs_raw.get("status_rate_hz", 100.0)),
        path=path)


def load_envelope(path: str) -> EnvelopeDatabase:
    raw = _load_json(path, "envelope")
    nodes = []
    for i, row in enumerate(_require(raw, "nodes", "envelope")):
        try:
            nodes.append([EnvelopeLimits(**entry) for entry in row])
        except TypeError as exc:
            raise ConfigError(f"bad limit record in node row {i}: {exc}",
                              field="envelope.nodes")
    return EnvelopeDatabase(
        mach_breakpoints=_require(raw, "mach_breakpoints", "envelope"),
        altitude_breakpoints=_require(raw, "altitude_breakpoints_ft", "envelope"),
        nodes=nodes)


def load_aero(path: str) -> AeroTables:
    try:
        return AeroTables.load(path)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}")


@dataclass(frozen=True)
class ProfileEntry:
    """One scripted input row; unset channels hold their previous value."""

    t: float
    values: dict


@dataclass
class Scenario:
    name: str
    aircraft_path: str
    aero_path: str
    envelope_path: str
    altitude_ft: float
    airspeed_fps: float
    dt_s: float
    duration_s: float
    protection: bool
    input_mode: str               # "grip" or "rates"
    profile: list = field(default_factory=list)
    path: str = ""

    def config_paths(self) -> dict:
        return {"aircraft": self.aircraft_path, "aero": self.aero_path,
                "envelope": self.envelope_path, "scenario": self.path}


_GRIP_CHANNELS = {"pitch_lbf", "roll_lbf", "pedal", "throttle"}
_RATE_CHANNELS = {"p_radps", "q_radps", "r_radps", "throttle"}


def load_scenario(path: str) -> Scenario:
    raw = _load_json(path, "scenario")
    base_dir = os.path.dirname(os.path.abspath(path))
    initial = _require(raw, "initial", "scenario")
    dt = float(_require(raw, "dt_s", "scenario"))
    duration = float(_require(raw, "duration_s", "scenario"))
    if dt <= 0.0 or duration <= 0.0:
        raise ConfigError("dt_s and duration_s must be positive", field="scenario")
    input_raw = _require(raw, "input", "scenario")
    mode = input_raw.get("mode", "grip")
    if mode not in ("grip", "rates"):
        raise ConfigError(f"unknown input mode {mode!r}", field="scenario.input")
    allowed = _GRIP_CHANNELS if mode == "grip" else _RATE_CHANNELS
    profile = []
    last_t = None
    for i, entry in enumerate(input_raw.get("profile", [])):
        entry = dict(entry)
        t = float(entry.pop("t"))
        if last_t is not None and t <= last_t:
            raise ConfigError(f"profile timestamps must strictly increase (row {i})",
                              field="scenario.input.profile")
        last_t = t
        unknown = set(entry) - allowed
        if unknown:
            raise ConfigError(f"unknown profile channels {sorted(unknown)} (row {i})",
                              field="scenario.input.profile")
        profile.append(ProfileEntry(t=t, values=entry))
    return Scenario(
        name=raw.get("name", os.path.basename(path)),
        aircraft_path=resolve_path(_require(raw, "aircraft", "scenario"), base_dir),
        aero_path=resolve_path(_require(raw, "aero", "scenario"), base_dir),
        envelope_path=resolve_path(_require(raw, "envelope", "scenario"), base_dir),
        altitude_ft=float(initial["altitude_ft"]),
        airspeed_fps=float(initial["airspeed_fps"]),
        dt_s=dt, duration_s=duration,
        protection=bool(raw.get("protection", True)),
        input_mode=mode, profile=profile, path=path)


def validate_file(path: str) -> str:
    """Validate any config file by its ``kind``; returns the kind."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}")
    kind = raw.get("kind")
    loaders = {"aircraft": load_aircraft, "aero_tables": load_aero,
               "envelope": load_envelope, "scenario": load_scenario}
    if kind not in loaders:
        raise ConfigError(f"{path}: unknown config kind {kind!r}", field="kind")
    loaders[kind](path)
    if kind == "scenario":
        scenario = load_scenario(path)
        load_aircraft(scenario.aircraft_path)
        load_aero(scenario.aero_path)
        load_envelope(scenario.envelope_path)
    return kind
