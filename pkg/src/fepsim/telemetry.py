"""WebSocket telemetry: outbound state frames, inbound command frames, and
the live run loop.

The server owns an asyncio loop in a daemon thread and touches the
simulation only through two thread-safe queues, so a disconnecting or absent
client can never stall the loop: outbound frames are dropped on backpressure,
never simulation steps."""

from __future__ import annotations

import asyncio
import http.server
import json
import queue
import threading
import time

import websockets

STATE_KEYS = {"type", "t"}
COMMAND_NUMERIC = {"pedal": (-1.0, 1.0), "throttle": (0.0, 1.0)}
GRIP_LIMIT_LBF = 27.0


def validate_command_frame(raw: str):
    """Parse one inbound text frame; returns (frame dict, error string)."""
    try:
        frame = json.loads(raw)
    except json.JSONDecodeError as exc:
        return None, f"not valid JSON: {exc}"
    if not isinstance(frame, dict) or frame.get("type") != "command":
        return None, "frame must be an object with type='command'"
    out = {}
    grip = frame.get("grip")
    if grip is not None:
        if not isinstance(grip, dict):
            return None, "grip must be an object"
        clean = {}
        for axis in ("pitch", "roll"):
            if axis in grip:
                try:
                    value = float(grip[axis])
                except (TypeError, ValueError):
                    return None, f"grip.{axis} must be a number"
                clean[axis] = min(GRIP_LIMIT_LBF, max(-GRIP_LIMIT_LBF, value))
        if clean:
            out["grip"] = clean
    for key, (lo, hi) in COMMAND_NUMERIC.items():
        if key in frame:
            try:
                value = float(frame[key])
            except (TypeError, ValueError):
                return None, f"{key} must be a number"
            out[key] = min(hi, max(lo, value))
    if "protection" in frame:
        if not isinstance(frame["protection"], bool):
            return None, "protection must be a boolean"
        out["protection"] = frame["protection"]
    if "acs_mode" in frame:
        mode = str(frame["acs_mode"]).lower()
        if mode not in ("disabled", "enabled", "jammed"):
            return None, f"unknown acs_mode {frame['acs_mode']!r}"
        out["acs_mode"] = mode
    if frame.get("reset"):
        out["reset"] = True
    if not out:
        return None, "command frame carries no recognized fields"
    return out, None


class TelemetryServer:
    """Broadcasts state frames to every client; queues validated commands."""

    def __init__(self, host="127.0.0.1", port=8765, max_backlog=8):
        self.host = host
        self.requested_port = port
        self.port = None
        self.inbound = queue.Queue()
        self._outbox = queue.Queue(maxsize=max_backlog)
        self.dropped_frames = 0
        self._thread = None
        self._loop = None
        self._stop = None
        self._ready = threading.Event()
        self._seq = 0

    def start(self, timeout=5.0):
        self._thread = threading.Thread(target=self._run, daemon=True,
                                        name="telemetry")
        self._thread.start()
        if not self._ready.wait(timeout):
            raise RuntimeError("telemetry server failed to start")
        return self

    def stop(self):
        if self._loop is not None:
            self._loop.call_soon_threadsafe(self._stop.set)
        if self._thread is not None:
            self._thread.join(timeout=5.0)

    def publish(self, frame: dict):
        """Queue a frame for broadcast; drops silently when clients lag."""
        self._seq += 1
        frame = dict(frame)
        frame["seq"] = self._seq
        frame["wall_ms"] = time.time() * 1000.0
        try:
            self._outbox.put_nowait(json.dumps(frame))
        except queue.Full:
            self.dropped_frames += 1

    def _run(self):
        asyncio.run(self._main())

    async def _main(self):
        self._loop = asyncio.get_running_loop()
        self._stop = asyncio.Event()
        clients = set()

        async def handler(ws):
            clients.add(ws)
            try:
                async for raw in ws:
                    frame, error = validate_command_frame(raw)
                    if error is not None:
                        await ws.send(json.dumps({"type": "error",
                                                  "reason": error}))
                        continue
                    self.inbound.put(frame)
            except websockets.ConnectionClosed:
                pass
            finally:
                clients.discard(ws)

        async def broadcaster():
            while not self._stop.is_set():
                try:
                    payload = self._outbox.get_nowait()
                except queue.Empty:
                    await asyncio.sleep(0.002)
                    continue
                stale = []
                # snapshot: handlers may join or leave while a send awaits
                for ws in list(clients):
                    try:
                        await ws.send(payload)
                    except websockets.ConnectionClosed:
                        stale.append(ws)
                for ws in stale:
                    clients.discard(ws)

        async with websockets.serve(handler, self.host,
                                    self.requested_port) as server:
            self.port = server.sockets[0].getsockname()[1]
            self._ready.set()
            task = asyncio.create_task(broadcaster())
            await self._stop.wait()
            task.cancel()


def serve_static(directory: str, host="127.0.0.1", port=8080):
    """Serve the cockpit asset bundle from a daemon thread."""
    def factory(*args, **kwargs):
        return http.server.SimpleHTTPRequestHandler(*args, directory=directory,
                                                    **kwargs)

    server = http.server.ThreadingHTTPServer((host, port), factory)
    thread = threading.Thread(target=server.serve_forever, daemon=True,
                              name="static-http")
    thread.start()
    return server


def run_live(sim, server: TelemetryServer, decimate_hz: float = 30.0,
             pace: float = 1.0):
    """Drive a simulation whose input source drains the server's inbound
    queue; publishes decimated state frames. ``pace`` 1.0 tracks wall time,
    0 runs flat out (tests).

    Frames go out at the first step on or after each 1/decimate_hz
    boundary, so timestamps stay on the frame grid within one sim step.
    """
    frame_interval = 1.0 / decimate_hz
    next_frame = 0.0
    t_start = time.perf_counter()
    while sim.step_index < sim.steps_total:
        sim.step()
        now = sim.step_index * sim.dt
        if now + 1e-12 >= next_frame:
            server.publish(sim.frame())
            next_frame += frame_interval * (1 + (now - next_frame) // frame_interval)
        if pace > 0.0:
            target = t_start + now / pace
            lag = target - time.perf_counter()
            if lag > 0.0005:
                time.sleep(lag)
    return sim.log
