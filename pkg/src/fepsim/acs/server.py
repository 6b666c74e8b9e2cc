"""Standalone UDP service wrapper around the stick emulator.

Hosts one emulator behind a UDP endpoint so external tools can command it
and observe the status stream exactly as they would the hardware. An
endpoint-change command (ID50) is honored at the next bind, i.e. the next
service step after it arrives."""

from __future__ import annotations

from .emulator import AcsEmulator
from .messages import encode
from .transport import UdpEndpoint


class AcsUdpServer:
    """Pump datagrams between a UDP socket and an emulator, step by step."""

    def __init__(self, emulator: AcsEmulator = None, local=("127.0.0.1", 0)):
        self.emulator = emulator or AcsEmulator()
        self.endpoint = UdpEndpoint(local=local)
        self._bound_endpoint = self.endpoint.address

    @property
    def address(self):
        return self.endpoint.address

    def step(self, dt: float, grip_forces=(0.0, 0.0)):
        """One service cycle: apply pending rebind, handle inbound commands,
        advance the feel loop, emit due status messages."""
        advertised = self.emulator.advertised_endpoint
        if advertised is not None and advertised != self._bound_endpoint:
            self.endpoint.rebind(advertised)
            self._bound_endpoint = self.endpoint.address
        for datagram in self.endpoint.receive():
            for reply in self.emulator.handle_datagram(datagram):
                self.endpoint.send(reply)
        self.emulator.step(dt, grip_forces=grip_forces)
        for status in self.emulator.poll_status():
            self.endpoint.send(encode(status))

    def close(self):
        self.endpoint.close()
