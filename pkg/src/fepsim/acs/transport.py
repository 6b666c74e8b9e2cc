"""Datagram transports for the stick protocol: an in-process loopback pair
for deterministic tests and a UDP endpoint with the same surface."""

from __future__ import annotations

import socket
from collections import deque


class LoopbackEndpoint:
    """One side of an in-process datagram pair."""

    def __init__(self, outbox: deque, inbox: deque):
        self._outbox = outbox
        self._inbox = inbox

    def send(self, data: bytes):
        self._outbox.append(bytes(data))

    def receive(self):
        """Drain and return all queued datagrams, oldest first."""
        out = []
        while self._inbox:
            out.append(self._inbox.popleft())
        return out

    def close(self):
        pass


def loopback_pair():
    """Two connected endpoints; what one sends the other receives."""
    a_to_b = deque()
    b_to_a = deque()
    return (LoopbackEndpoint(a_to_b, b_to_a), LoopbackEndpoint(b_to_a, a_to_b))


class UdpEndpoint:
    """Non-blocking UDP datagram endpoint bound to a local port."""

    def __init__(self, local=("127.0.0.1", 0), peer=None):
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._sock.bind(local)
        self._sock.setblocking(False)
        self.peer = peer

    @property
    def address(self):
        return self._sock.getsockname()

    def rebind(self, local):
        """Close and bind anew; used when an endpoint-change command lands."""
        self._sock.close()
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self._sock.bind(local)
        self._sock.setblocking(False)

    def send(self, data: bytes):
        if self.peer is None:
            raise OSError("no peer address configured")
        self._sock.sendto(data, self.peer)

    def receive(self):
        out = []
        while True:
            try:
                data, sender = self._sock.recvfrom(65535)
            except BlockingIOError:
                break
            if self.peer is None:
                self.peer = sender
            out.append(data)
        return out

    def close(self):
        self._sock.close()
