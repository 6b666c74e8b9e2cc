import json

import pytest

from fepsim.cli import main
from fepsim.config import builtin_path


class TestValidate:
    def test_valid_config(self, capsys):
        assert main(["validate", builtin_path("default_aircraft.json")]) == 0
        assert "valid aircraft" in capsys.readouterr().out

    def test_nonmonotone_ffc_rejected(self, tmp_path, capsys):
        raw = json.load(open(builtin_path("default_aircraft.json")))
        raw["stick"]["roll"]["ffc"][2] = [-2.0, -20.0]
        path = tmp_path / "aircraft.json"
        path.write_text(json.dumps(raw))
        assert main(["validate", str(path)]) == 3
        err = capsys.readouterr().err
        assert "breakpoint" in err

    def test_missing_file(self, capsys):
        assert main(["validate", "/nonexistent.json"]) == 3


class TestRun:
    def test_run_writes_log_and_summary(self, tmp_path, capsys):
        code = main(["run", builtin_path("scenarios/level_hold.json"),
                     "--out", str(tmp_path)])
        assert code == 0
        out = capsys.readouterr().out
        assert "max alpha" in out
        assert "max nz" in out
        assert (tmp_path / "level_hold.csv").exists()
        assert (tmp_path / "level_hold.meta.json").exists()

    def test_protection_override_flag(self, tmp_path, capsys):
        code = main(["run", builtin_path("scenarios/level_hold.json"),
                     "--protection", "off", "--out", str(tmp_path)])
        assert code == 0
        assert "protection off" in capsys.readouterr().out

    def test_aborted_run_flushes_partial_log(self, tmp_path, capsys):
        # the unprotected full pull arcs through the pitch guard band
        code = main(["run", builtin_path("scenarios/noseup_family/f02.json"),
                     "--protection", "off", "--out", str(tmp_path)])
        assert code == 5
        captured = capsys.readouterr()
        assert "aborted early" in captured.err
        log_path = tmp_path / "noseup_f02.csv"
        assert log_path.exists()
        with open(log_path) as fh:
            rows = sum(1 for _ in fh) - 1
        assert 0 < rows < 3000  # partial: fewer rows than the full run
        meta = json.load(open(tmp_path / "noseup_f02.meta.json"))
        assert "aborted" in meta


class TestTrim:
    def test_trim_report(self, capsys):
        code = main(["trim", builtin_path("scenarios/level_hold.json")])
        assert code == 0
        out = capsys.readouterr().out
        assert "alpha" in out
        assert "residual" in out

    def test_trim_out_of_envelope(self, capsys):
        code = main(["trim", builtin_path("scenarios/level_hold.json"),
                     "--airspeed", "900"])
        assert code == 4


class TestFit:
    def test_fit_shipped_capture(self, capsys):
        code = main(["fit", builtin_path("release_capture.csv")])
        assert code == 0
        out = capsys.readouterr().out
        assert "0.350" in out
        assert "1.825" in out

    def test_fit_degenerate_capture(self, tmp_path, capsys):
        path = tmp_path / "flat.csv"
        path.write_text("t,theta\n" + "\n".join(f"{i*0.01},5.0" for i in range(200)))
        assert main(["fit", str(path)]) == 6


class TestUsage:
    def test_no_command_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_unknown_command_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2
