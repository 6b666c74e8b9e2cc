"""On-change transmit policy with a per-ID rate ceiling.

A message goes out only when its encoded payload differs from the last one
sent to the same (ID, axis) address, and never more often than the per-ID
interval (200 Hz by default). Changed messages arriving inside the blackout
window are buffered (latest per axis wins) and flushed at the boundary, one
per interval, lowest axis first."""

from __future__ import annotations

from .messages import encode


class TransmitPolicy:
    def __init__(self, max_rate_hz: float = 200.0):
        if max_rate_hz <= 0.0:
            raise ValueError("rate ceiling must be positive")
        self.interval = 1.0 / max_rate_hz
        self._last_payload = {}   # (id, axis) -> bytes
        self._next_ok = {}        # id -> earliest next send time
        self._pending = {}        # id -> {axis: (msg, bytes)}

    def offer(self, message, now: float):
        """Submit a message; returns the list of messages to send now."""
        wire = encode(message)
        msg_id = type(message).MSG_ID
        key = (msg_id, message.axis)
        if self._last_payload.get(key) == wire:
            self._pending.get(msg_id, {}).pop(message.axis, None)
            return []
        if now >= self._next_ok.get(msg_id, float("-inf")):
            self._send(msg_id, key, wire, now)
            return [message]
        self._pending.setdefault(msg_id, {})[message.axis] = (message, wire)
        return []

    def due(self, now: float):
        """Flush buffered changes whose blackout window has elapsed."""
        out = []
        for msg_id in sorted(self._pending):
            bucket = self._pending[msg_id]
            while bucket and now >= self._next_ok.get(msg_id, float("-inf")):
                axis = min(bucket)
                message, wire = bucket.pop(axis)
                key = (msg_id, axis)
                if self._last_payload.get(key) == wire:
                    continue
                self._send(msg_id, key, wire, now)
                out.append(message)
        return out

    def _send(self, msg_id, key, wire, now):
        self._last_payload[key] = wire
        self._next_ok[msg_id] = now + self.interval
