import dataclasses
import json
import threading
import time

import numpy as np
import pytest
from websockets.sync.client import connect

from fepsim.config import builtin_path, load_scenario
from fepsim.sim import LiveSource, ScriptedSource, Simulation
from fepsim.telemetry import TelemetryServer, run_live, validate_command_frame


class TestFrameValidation:
    def test_valid_command(self):
        frame, error = validate_command_frame(json.dumps(
            {"type": "command", "grip": {"pitch": 5.0, "roll": -2.0},
             "pedal": 0.5, "throttle": 0.8}))
        assert error is None
        assert frame["grip"] == {"pitch": 5.0, "roll": -2.0}

    def test_grip_clamped_to_device_limit(self):
        frame, _ = validate_command_frame(json.dumps(
            {"type": "command", "grip": {"pitch": 99.0, "roll": -99.0}}))
        assert frame["grip"] == {"pitch": 27.0, "roll": -27.0}

    def test_malformed_rejected(self):
        for raw in ("nonsense", "[]", json.dumps({"type": "state"}),
                    json.dumps({"type": "command"}),
                    json.dumps({"type": "command", "grip": {"pitch": "x"}}),
                    json.dumps({"type": "command", "protection": 1}),
                    json.dumps({"type": "command", "acs_mode": "weird"})):
            frame, error = validate_command_frame(raw)
            assert frame is None
            assert error

    def test_pedal_and_throttle_clamped(self):
        frame, _ = validate_command_frame(json.dumps(
            {"type": "command", "pedal": -5.0, "throttle": 7.0}))
        assert frame == {"pedal": -1.0, "throttle": 1.0}


@pytest.fixture()
def short_scenario():
    scn = load_scenario(builtin_path("scenarios/level_hold.json"))
    return dataclasses.replace(scn, duration_s=1.0)


class TestServer:
    def test_publish_and_receive(self, short_scenario):
        server = TelemetryServer(port=0).start()
        received = []

        def client():
            with connect(f"ws://127.0.0.1:{server.port}") as ws:
                for _ in range(3):
                    received.append(json.loads(ws.recv(timeout=5)))

        thread = threading.Thread(target=client)
        thread.start()
        time.sleep(0.2)
        for k in range(3):
            server.publish({"type": "state", "t": k * 0.1})
            time.sleep(0.05)
        thread.join(timeout=5)
        server.stop()
        assert [f["t"] for f in received] == [0.0, 0.1, pytest.approx(0.2)]
        assert all("seq" in f and "wall_ms" in f for f in received)

    def test_error_frame_for_malformed_command(self):
        server = TelemetryServer(port=0).start()
        with connect(f"ws://127.0.0.1:{server.port}") as ws:
            ws.send("garbage")
            reply = json.loads(ws.recv(timeout=5))
        server.stop()
        assert reply["type"] == "error"
        assert server.inbound.empty()

    def test_backpressure_drops_frames_not_steps(self):
        server = TelemetryServer(port=0, max_backlog=2)
        # not started: nothing drains the outbox
        for k in range(10):
            server.publish({"type": "state", "t": float(k)})
        assert server.dropped_frames == 8

    def test_inbound_command_queued(self):
        server = TelemetryServer(port=0).start()
        with connect(f"ws://127.0.0.1:{server.port}") as ws:
            ws.send(json.dumps({"type": "command", "protection": False}))
            time.sleep(0.2)
        server.stop()
        assert server.inbound.get_nowait() == {"protection": False}


class TestLiveRun:
    def test_headless_run_matches_scripted(self, short_scenario):
        from fepsim.sim import run_scenario
        scripted = run_scenario(short_scenario).to_csv_bytes()
        server = TelemetryServer(port=0).start()
        live = LiveSource(ScriptedSource(short_scenario), server.inbound)
        sim = Simulation(short_scenario, input_source=live)
        run_live(sim, server, decimate_hz=30.0, pace=0.0)
        server.stop()
        assert sim.log.to_csv_bytes() == scripted

    def test_decimation_timestamps(self, short_scenario):
        server = TelemetryServer(port=0).start()
        frames = []
        stop = threading.Event()

        def client():
            with connect(f"ws://127.0.0.1:{server.port}") as ws:
                while not stop.is_set():
                    try:
                        frames.append(json.loads(ws.recv(timeout=1)))
                    except TimeoutError:
                        break

        thread = threading.Thread(target=client)
        thread.start()
        time.sleep(0.2)
        live = LiveSource(ScriptedSource(short_scenario), server.inbound)
        sim = Simulation(short_scenario, input_source=live)
        run_live(sim, server, decimate_hz=30.0, pace=1.0)
        time.sleep(0.3)
        stop.set()
        thread.join(timeout=3)
        server.stop()
        states = [f for f in frames if f.get("type") == "state"]
        assert len(states) >= 20
        stride = 1.0 / 30.0
        for frame in states:
            remainder = frame["t"] % stride
            slack = min(remainder, stride - remainder)
            assert slack <= short_scenario.dt_s + 1e-9

    def test_inbound_toggle_lands_in_log(self, short_scenario):
        server = TelemetryServer(port=0).start()
        live = LiveSource(ScriptedSource(short_scenario), server.inbound)
        sim = Simulation(short_scenario, input_source=live)
        with connect(f"ws://127.0.0.1:{server.port}") as ws:
            ws.send(json.dumps({"type": "command", "protection": False}))
            time.sleep(0.3)
            run_live(sim, server, decimate_hz=30.0, pace=0.0)
        server.stop()
        enabled = sim.log.column("prot_enabled")
        assert enabled[0] == 0.0 or np.any(enabled == 0.0)
