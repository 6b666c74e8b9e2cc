"""Binary wire protocol for the active sidestick.

Datagram layout, little-endian throughout:

    byte 0      message ID
    byte 1      axis selector (0 pitch, 1 roll, 255 broadcast/none)
    bytes 2-3   payload length in bytes (uint16)
    bytes 4..   payload: consecutive IEEE-754 float32 fields
    last 2      checksum: 16-bit ones'-complement sum over ID..payload

Every message round-trips encode -> decode bit-exactly: float fields are
quantized to float32 at construction. Booleans travel as 0.0/1.0, small
integers (modes, IDs, ports, address octets) as exact float32 integers.
Reserved IDs decode to ReservedMessage but refuse to encode.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, fields

from ..errors import (
    ChecksumError,
    FieldError,
    LengthError,
    ReservedIdError,
    TruncatedError,
    UnknownIdError,
)

AXIS_PITCH = 0
AXIS_ROLL = 1
AXIS_ALL = 255
_VALID_AXES = (AXIS_PITCH, AXIS_ROLL, AXIS_ALL)

RESERVED_IDS = frozenset({1, 3, 4, 11, 12, 21, 23, 24})

_HEADER = struct.Struct("<BBH")
_CHECKSUM = struct.Struct("<H")


def _f32(value: float) -> float:
    """Quantize to the nearest float32 so wire round-trips are exact."""
    out = struct.unpack("<f", struct.pack("<f", float(value)))[0]
    if not math.isfinite(out):
        raise ValueError(f"field value {value!r} is not a finite float32")
    return out


def checksum16(data: bytes) -> int:
    """Ones'-complement sum of 16-bit little-endian words (odd tail padded)."""
    if len(data) % 2:
        data = data + b"\x00"
    total = 0
    for i in range(0, len(data), 2):
        total += data[i] | (data[i + 1] << 8)
        total = (total & 0xFFFF) + (total >> 16)
    return ~total & 0xFFFF


@dataclass(frozen=True)
class GripSwitches:
    """Grip switch states: S1 left, S2 right, S3 trim, S4 trigger."""

    s1: bool = False
    s2: bool = False
    s3: bool = False
    s4: bool = False


class _Message:
    """Shared float32 quantization for the wire dataclasses."""

    MSG_ID = None
    _FLOAT_FIELDS = ()
    _BOOL_FIELDS = ()
    _INT_FIELDS = ()

    def __post_init__(self):
        if self.axis not in _VALID_AXES:
            raise ValueError(f"invalid axis selector {self.axis}")
        for name in self._FLOAT_FIELDS:
            object.__setattr__(self, name, _f32(getattr(self, name)))
        for name in self._BOOL_FIELDS:
            object.__setattr__(self, name, bool(getattr(self, name)))
        for name in self._INT_FIELDS:
            value = int(getattr(self, name))
            if not 0 <= value <= 2 ** 24:
                raise ValueError(f"{name}={value} not exactly encodable")
            object.__setattr__(self, name, value)

    def payload_values(self):
        out = []
        for f in fields(self):
            if f.name == "axis":
                continue
            value = getattr(self, f.name)
            if f.name in self._BOOL_FIELDS:
                out.append(1.0 if value else 0.0)
            else:
                out.append(float(value))
        return out

    @classmethod
    def field_count(cls):
        return len(fields(cls)) - 1  # minus the axis selector


@dataclass(frozen=True)
class ControlCommand(_Message):
    """ID2: feature enable flags and the operating-mode request."""

    axis: int = AXIS_ALL
    trim_enable: bool = True
    shaker_enable: bool = False
    damping_enable: bool = True
    mode_request: int = 1   # Mode value: 0 disabled, 1 enabled, 2 jammed

    MSG_ID = 2
    _BOOL_FIELDS = ("trim_enable", "shaker_enable", "damping_enable")
    _INT_FIELDS = ("mode_request",)

    def __post_init__(self):
        super().__post_init__()
        if self.mode_request not in (0, 1, 2):
            raise ValueError(f"invalid mode request {self.mode_request}")


@dataclass(frozen=True)
class CharacteristicControl(_Message):
    """ID5: fade time for feel-characteristic transitions, seconds."""

    axis: int = AXIS_ALL
    fade_time_s: float = 0.0

    MSG_ID = 5
    _FLOAT_FIELDS = ("fade_time_s",)


@dataclass(frozen=True)
class TrimControl(_Message):
    """ID6: axis trim position, degrees."""

    axis: int = AXIS_PITCH
    trim_deg: float = 0.0

    MSG_ID = 6
    _FLOAT_FIELDS = ("trim_deg",)


@dataclass(frozen=True)
class ShakerControl(_Message):
    """ID7: shaker amplitude (lbf) and frequency (Hz)."""

    axis: int = AXIS_ALL
    amplitude_lbf: float = 0.0
    frequency_hz: float = 0.0

    MSG_ID = 7
    _FLOAT_FIELDS = ("amplitude_lbf", "frequency_hz")


@dataclass(frozen=True)
class DampingControl(_Message):
    """ID8: damping ratio."""

    axis: int = AXIS_ALL
    ratio: float = 0.7

    MSG_ID = 8
    _FLOAT_FIELDS = ("ratio",)


@dataclass(frozen=True)
class CueingForceControl(_Message):
    """ID9: soft-stop cueing parameters."""

    axis: int = AXIS_PITCH
    enable: bool = False
    softstop_pos_deg: float = 0.0
    gradient_multiplier: float = 3.0

    MSG_ID = 9
    _BOOL_FIELDS = ("enable",)
    _FLOAT_FIELDS = ("softstop_pos_deg", "gradient_multiplier")


@dataclass(frozen=True)
class InertiaControl(_Message):
    """ID10: perceived inertia in device units (0.01 resolution)."""

    axis: int = AXIS_ALL
    value: float = 0.6

    MSG_ID = 10
    _FLOAT_FIELDS = ("value",)


@dataclass(frozen=True)
class RotaryStatus(_Message):
    """ID20: axis deflection, measured grip force, mode and switches."""

    axis: int = AXIS_PITCH
    theta_deg: float = 0.0
    force_lbf: float = 0.0
    mode: int = 0
    s1: bool = False
    s2: bool = False
    s3: bool = False
    s4: bool = False

    MSG_ID = 20
    _FLOAT_FIELDS = ("theta_deg", "force_lbf")
    _BOOL_FIELDS = ("s1", "s2", "s3", "s4")
    _INT_FIELDS = ("mode",)

    def __post_init__(self):
        super().__post_init__()
        if self.mode not in (0, 1, 2):
            raise ValueError(f"invalid mode {self.mode}")


@dataclass(frozen=True)
class LimitedCharacteristic(_Message):
    """ID22: a request was limited by device capability, or rejected.

    source_id names the offending command ID (0 for transport-level errors);
    code describes the cause; value echoes the applied (clamped) parameter.
    """

    axis: int = AXIS_ALL
    source_id: int = 0
    code: int = 0
    value: float = 0.0

    CODE_CLAMPED = 0
    CODE_CHECKSUM = 1
    CODE_UNKNOWN_ID = 2
    CODE_TRUNCATED = 3
    CODE_LENGTH = 4
    CODE_RESERVED = 5
    CODE_FIELD = 6
    CODE_MODE_REJECTED = 7
    CODE_DIRECTION = 8

    MSG_ID = 22
    _INT_FIELDS = ("source_id", "code")
    _FLOAT_FIELDS = ("value",)


@dataclass(frozen=True)
class IpChange(_Message):
    """ID50: advertised endpoint change; takes effect at the next bind."""

    axis: int = AXIS_ALL
    octet_a: int = 127
    octet_b: int = 0
    octet_c: int = 0
    octet_d: int = 1
    port: int = 0

    MSG_ID = 50
    _INT_FIELDS = ("octet_a", "octet_b", "octet_c", "octet_d", "port")

    def __post_init__(self):
        super().__post_init__()
        for name in ("octet_a", "octet_b", "octet_c", "octet_d"):
            if not 0 <= getattr(self, name) <= 255:
                raise ValueError(f"{name} out of range")
        if not 0 <= self.port <= 65535:
            raise ValueError("port out of range")


@dataclass(frozen=True)
class ReservedMessage:
    """An ID that exists in the protocol map but has no published layout."""

    msg_id: int
    axis: int
    payload: bytes


MESSAGE_TYPES = {cls.MSG_ID: cls for cls in (
    ControlCommand, CharacteristicControl, TrimControl, ShakerControl,
    DampingControl, CueingForceControl, InertiaControl, RotaryStatus,
    LimitedCharacteristic, IpChange)}


def encode(message) -> bytes:
    """Serialize a message to one datagram."""
    if isinstance(message, ReservedMessage):
        raise ReservedIdError(f"ID {message.msg_id} is reserved and cannot be encoded")
    cls = type(message)
    if cls.MSG_ID not in MESSAGE_TYPES:
        raise UnknownIdError(f"cannot encode unregistered type {cls.__name__}")
    values = message.payload_values()
    payload = struct.pack(f"<{len(values)}f", *values) if values else b""
    head = _HEADER.pack(cls.MSG_ID, message.axis, len(payload))
    body = head + payload
    return body + _CHECKSUM.pack(checksum16(body))


def decode(data: bytes):
    """Parse one datagram.

    Raises a DecodeError subclass on any malformed input; never anything
    else, no matter the bytes.
    """
    if not isinstance(data, (bytes, bytearray, memoryview)):
        raise TruncatedError("datagram is not a byte string")
    data = bytes(data)
    if len(data) < _HEADER.size + _CHECKSUM.size:
        raise TruncatedError(f"datagram of {len(data)} bytes is below the minimum")
    msg_id, axis, declared = _HEADER.unpack_from(data, 0)
    expected_total = _HEADER.size + declared + _CHECKSUM.size
    if len(data) < expected_total:
        raise TruncatedError(
            f"datagram of {len(data)} bytes is short of the declared {expected_total}")
    if len(data) > expected_total:
        raise LengthError(
            f"datagram of {len(data)} bytes exceeds the declared {expected_total}")
    body = data[:_HEADER.size + declared]
    (stored,) = _CHECKSUM.unpack_from(data, _HEADER.size + declared)
    if checksum16(body) != stored:
        raise ChecksumError("checksum mismatch")
    if msg_id in RESERVED_IDS:
        return ReservedMessage(msg_id=msg_id, axis=axis,
                               payload=data[_HEADER.size:_HEADER.size + declared])
    cls = MESSAGE_TYPES.get(msg_id)
    if cls is None:
        raise UnknownIdError(f"unknown message ID {msg_id}")
    count = cls.field_count()
    if declared != 4 * count:
        raise LengthError(
            f"ID {msg_id} expects {4 * count} payload bytes, got {declared}")
    raw = struct.unpack_from(f"<{count}f", data, _HEADER.size)
    kwargs = {"axis": axis}
    for name, value in zip([f.name for f in fields(cls) if f.name != "axis"], raw):
        if not math.isfinite(value):
            raise FieldError(f"ID {msg_id} field {name} is not finite")
        if name in cls._BOOL_FIELDS:
            if value not in (0.0, 1.0):
                raise FieldError(f"ID {msg_id} flag {name} must be 0 or 1, got {value}")
            kwargs[name] = bool(value)
        elif name in cls._INT_FIELDS:
            if value != int(value):
                raise FieldError(f"ID {msg_id} field {name} must be integral, got {value}")
            kwargs[name] = int(value)
        else:
            kwargs[name] = value
    try:
        return cls(**kwargs)
    except ValueError as exc:
        raise FieldError(str(exc))
