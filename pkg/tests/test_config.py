import json
import shutil

import pytest

from fepsim.config import (
    builtin_path,
    file_sha256,
    load_aircraft,
    load_envelope,
    load_scenario,
    validate_file,
)
from fepsim.errors import ConfigError


class TestBuiltins:
    def test_default_aircraft_loads(self):
        aircraft = load_aircraft(builtin_path("default_aircraft.json"))
        assert aircraft.mass.mass_slug == pytest.approx(637.16)
        assert aircraft.actuators[0].pos_max_deg == 25.0
        assert aircraft.actuators[1].rate_limit_dps == 80.0
        assert aircraft.stick_pitch.curve.force_at(24.0) == 27.0

    def test_default_envelope_loads(self):
        db = load_envelope(builtin_path("default_envelope.json"))
        limits, clamped = db.schedule(0.3, 10000.0)
        assert not clamped
        assert limits.phi_max_deg == 60.0

    def test_every_shipped_scenario_validates(self):
        import glob
        import os
        for path in glob.glob(builtin_path("scenarios/**/*.json"), recursive=True):
            assert validate_file(path) == "scenario", os.path.basename(path)


class TestValidation:
    def test_kind_mismatch(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"kind": "aircraft", "version": 1}))
        with pytest.raises(ConfigError):
            load_scenario(str(path))

    def test_version_mandatory(self, tmp_path):
        raw = json.load(open(builtin_path("default_aircraft.json")))
        del raw["version"]
        path = tmp_path / "aircraft.json"
        path.write_text(json.dumps(raw))
        with pytest.raises(ConfigError) as err:
            load_aircraft(str(path))
        assert "version" in str(err.value)

    def test_nonmonotone_ffc_names_breakpoint(self, tmp_path):
        raw = json.load(open(builtin_path("default_aircraft.json")))
        raw["stick"]["pitch"]["ffc"][3] = [0.0, -5.0]  # force dips at index 3
        path = tmp_path / "aircraft.json"
        path.write_text(json.dumps(raw))
        with pytest.raises(ConfigError) as err:
            load_aircraft(str(path))
        assert "breakpoint" in str(err.value)

    def test_profile_timestamps_must_increase(self, tmp_path):
        raw = json.load(open(builtin_path("scenarios/level_hold.json")))
        raw["input"]["profile"].append({"t": 0.0, "pitch_lbf": 1.0})
        path = tmp_path / "scn.json"
        path.write_text(json.dumps(raw))
        with pytest.raises(ConfigError):
            load_scenario(str(path))

    def test_unknown_profile_channel(self, tmp_path):
        raw = json.load(open(builtin_path("scenarios/level_hold.json")))
        raw["input"]["profile"][0]["bogus"] = 1.0
        path = tmp_path / "scn.json"
        path.write_text(json.dumps(raw))
        with pytest.raises(ConfigError):
            load_scenario(str(path))


class TestHashing:
    def test_hash_changes_iff_bytes_change(self, tmp_path):
        src = builtin_path("default_aircraft.json")
        copy = tmp_path / "copy.json"
        shutil.copyfile(src, copy)
        assert file_sha256(src) == file_sha256(str(copy))
        with open(copy, "a") as fh:
            fh.write(" ")
        assert file_sha256(src) != file_sha256(str(copy))


class TestPathResolution:
    def test_relative_paths_resolve_against_scenario(self, tmp_path):
        for name in ("default_aircraft.json", "default_envelope.json",
                     "standin_aero.json"):
            shutil.copyfile(builtin_path(name), tmp_path / name)
        scn = {
            "kind": "scenario", "version": 1, "name": "local",
            "aircraft": "default_aircraft.json",
            "aero": "standin_aero.json",
            "envelope": "default_envelope.json",
            "initial": {"altitude_ft": 10000.0, "airspeed_fps": 500.0},
            "dt_s": 0.002, "duration_s": 1.0, "protection": True,
            "input": {"mode": "grip", "profile": []},
        }
        path = tmp_path / "scn.json"
        path.write_text(json.dumps(scn))
        loaded = load_scenario(str(path))
        assert loaded.aircraft_path == str(tmp_path / "default_aircraft.json")
        assert validate_file(str(path)) == "scenario"
