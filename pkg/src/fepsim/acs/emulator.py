"""The sidestick device twin: two feel axes, an operating-mode machine, the
message-level command surface, characteristic fades, and the status stream.

The emulator is stepped explicitly by its owner (the simulation loop or a
realtime wrapper); all interaction crosses the message interface, so the
same code runs over the in-process loopback or UDP."""

from __future__ import annotations

from dataclasses import replace

from ..errors import (
    ChecksumError,
    DecodeError,
    FieldError,
    LengthError,
    ReservedIdError,
    TruncatedError,
    UnknownIdError,
)
from .feel import (
    DAMPING_RATIO_RANGE,
    INERTIA_RANGE,
    Mode,
    StickAxisState,
    stick_dynamics_step,
)
from .ffc import POSITION_LIMIT_DEG, BlendedCurve, FfcCurve, build_softstop_ffc
from .messages import (
    AXIS_ALL,
    AXIS_PITCH,
    AXIS_ROLL,
    CharacteristicControl,
    ControlCommand,
    CueingForceControl,
    DampingControl,
    GripSwitches,
    InertiaControl,
    IpChange,
    LimitedCharacteristic,
    ReservedMessage,
    RotaryStatus,
    ShakerControl,
    TrimControl,
    decode,
    encode,
)
from .policy import TransmitPolicy

FADE_TIME_RANGE = (0.0, 10.0)
SHAKER_AMP_RANGE = (0.0, 27.0)
SHAKER_FREQ_RANGE = (0.0, 100.0)
SOFTSTOP_POS_CAP = 23.5
SOFTSTOP_MULT_RANGE = (1.1, 8.0)

_DECODE_CODES = {
    ChecksumError: LimitedCharacteristic.CODE_CHECKSUM,
    UnknownIdError: LimitedCharacteristic.CODE_UNKNOWN_ID,
    TruncatedError: LimitedCharacteristic.CODE_TRUNCATED,
    LengthError: LimitedCharacteristic.CODE_LENGTH,
    ReservedIdError: LimitedCharacteristic.CODE_RESERVED,
    FieldError: LimitedCharacteristic.CODE_FIELD,
}


class AxisUnit:
    """One feel axis: state, its active curve and any fade in progress."""

    def __init__(self, base_curve: FfcCurve, state: StickAxisState):
        self.state = state
        self.active_curve = base_curve
        self.base_curve = base_curve       # commanded shape without cueing
        self.target_curve = None
        self.fade_total_s = 0.0
        self.fade_time_s = 0.0             # commanded fade for future swaps
        self.cue_enabled = False
        self.cue_pos_deg = 0.0
        self.cue_multiplier = 3.0

    def effective_curve(self):
        if self.target_curve is None:
            return self.active_curve
        if self.fade_total_s <= 0.0:
            return self.target_curve
        progress = 1.0 - self.state.fade_remaining_s / self.fade_total_s
        return BlendedCurve(self.active_curve, self.target_curve, progress)

    def begin_swap(self, new_curve: FfcCurve):
        # a swap during a fade starts from the currently felt blend, sampled
        # at the union of breakpoints (exact: the blend is piecewise linear)
        if self.target_curve is not None:
            frozen = self.effective_curve()
            if isinstance(frozen, BlendedCurve):
                positions = sorted({p for p, _ in self.active_curve.points}
                                   | {p for p, _ in self.target_curve.points})
                self.active_curve = FfcCurve(tuple(
                    (p, frozen.force_at(p)) for p in positions))
            else:
                self.active_curve = frozen
        if self.fade_time_s <= 0.0:
            self.active_curve = new_curve
            self.target_curve = None
            self.fade_total_s = 0.0
            self.state = replace(self.state, fade_remaining_s=0.0)
            return
        self.target_curve = new_curve
        self.fade_total_s = self.fade_time_s
        self.state = replace(self.state, fade_remaining_s=self.fade_time_s)

    def step_fade(self, dt: float):
        if self.target_curve is None:
            return
        remaining = self.state.fade_remaining_s - dt
        if remaining <= 0.0:
            self.active_curve = self.target_curve
            self.target_curve = None
            self.fade_total_s = 0.0
            remaining = 0.0
        self.state = replace(self.state, fade_remaining_s=remaining)

    def rebuild_characteristic(self):
        """Recompute the felt curve from the base shape and the cue state."""
        if self.cue_enabled:
            curve, _ = build_softstop_ffc(self.base_curve, self.cue_pos_deg,
                                          self.cue_multiplier)
        else:
            curve = self.base_curve
        self.begin_swap(curve)


def _default_curve():
    return FfcCurve(((-24.0, -27.0), (-10.0, -9.0), (-2.0, -1.4), (0.0, 0.0),
                     (2.0, 1.4), (10.0, 9.0), (24.0, 27.0)))


class AcsEmulator:
    """Two-axis active sidestick twin driven entirely over messages."""

    def __init__(self, pitch_curve=None, roll_curve=None,
                 inertia: float = 0.6, zeta: float = 0.7,
                 status_rate_hz: float = 100.0, policy=None,
                 pitch_feel: dict = None, roll_feel: dict = None):
        base = StickAxisState(inertia=inertia, zeta=zeta, mode=Mode.DISABLED)
        self.axes = {
            AXIS_PITCH: AxisUnit(pitch_curve or _default_curve(),
                                 replace(base, **(pitch_feel or {}))),
            AXIS_ROLL: AxisUnit(roll_curve or _default_curve(),
                                replace(base, **(roll_feel or {}))),
        }
        self.switches = GripSwitches()
        self.zeroed = False
        self.force_offsets = {AXIS_PITCH: 0.0, AXIS_ROLL: 0.0}
        self.measured_forces = {AXIS_PITCH: 0.0, AXIS_ROLL: 0.0}
        self.time_s = 0.0
        self.status_interval_s = 1.0 / status_rate_hz
        self._status_due_s = 0.0
        self.policy = policy or TransmitPolicy()
        self.advertised_endpoint = None

    # -- power-up -----------------------------------------------------------

    def run_ibit(self, applied_forces=(0.0, 0.0)):
        """Built-in test: zero the force measurements. Gates Enabled mode."""
        self.force_offsets[AXIS_PITCH] = float(applied_forces[0])
        self.force_offsets[AXIS_ROLL] = float(applied_forces[1])
        self.zeroed = True

    # -- mode machine --------------------------------------------------------

    def request_mode(self, axis_sel: int, mode: Mode):
        """Returns True when every addressed axis accepted the transition."""
        ok = True
        for axis_id in self._addressed(axis_sel):
            unit = self.axes[axis_id]
            current = unit.state.mode
            if mode == Mode.ENABLED:
                allowed = (current in (Mode.ENABLED, Mode.JAMMED)
                           or (current == Mode.DISABLED and self.zeroed))
            elif mode == Mode.JAMMED:
                allowed = current in (Mode.ENABLED, Mode.JAMMED)
            else:
                allowed = True
            if allowed:
                unit.state = replace(unit.state, mode=mode)
            else:
                ok = False
        return ok

    def _addressed(self, axis_sel: int):
        if axis_sel == AXIS_ALL:
            return (AXIS_PITCH, AXIS_ROLL)
        return (axis_sel,)

    # -- command surface -----------------------------------------------------

    def handle_datagram(self, data: bytes):
        """Decode and apply one datagram; returns encoded replies."""
        try:
            message = decode(data)
        except DecodeError as exc:
            code = _DECODE_CODES.get(type(exc), LimitedCharacteristic.CODE_FIELD)
            return [encode(LimitedCharacteristic(source_id=0, code=code))]
        return [encode(reply) for reply in self.apply_message(message)]

    def apply_message(self, message):
        """Apply one decoded message; returns reply messages (possibly none).

        Out-of-range requests are clamped to device capability and echoed
        with a LimitedCharacteristic reply. Feel commands are rejected in
        Disabled mode and leave the state untouched.
        """
        if isinstance(message, ReservedMessage):
            return [LimitedCharacteristic(source_id=message.msg_id,
                                          code=LimitedCharacteristic.CODE_RESERVED)]
        handler = self._HANDLERS.get(type(message))
        if handler is None:
            return [LimitedCharacteristic(source_id=type(message).MSG_ID,
                                          code=LimitedCharacteristic.CODE_DIRECTION)]
        return handler(self, message)

    def _reject_if_disabled(self, message):
        for axis_id in self._addressed(message.axis):
            if self.axes[axis_id].state.mode == Mode.DISABLED:
                return [LimitedCharacteristic(
                    axis=message.axis, source_id=type(message).MSG_ID,
                    code=LimitedCharacteristic.CODE_MODE_REJECTED)]
        return None

    def _clamp(self, message, value, lo, hi, axis):
        if lo <= value <= hi:
            return value, []
        clamped = min(hi, max(lo, value))
        reply = LimitedCharacteristic(axis=axis, source_id=type(message).MSG_ID,
                                      code=LimitedCharacteristic.CODE_CLAMPED,
                                      value=clamped)
        return clamped, [reply]

    def _on_control(self, msg: ControlCommand):
        accepted = self.request_mode(msg.axis, Mode(msg.mode_request))
        for axis_id in self._addressed(msg.axis):
            unit = self.axes[axis_id]
            unit.state = replace(unit.state, trim_on=msg.trim_enable,
                                 shaker_on=msg.shaker_enable,
                                 damping_on=msg.damping_enable)
        if not accepted:
            return [LimitedCharacteristic(axis=msg.axis, source_id=ControlCommand.MSG_ID,
                                          code=LimitedCharacteristic.CODE_MODE_REJECTED,
                                          value=float(msg.mode_request))]
        return []

    def _on_characteristic(self, msg: CharacteristicControl):
        rejected = self._reject_if_disabled(msg)
        if rejected:
            return rejected
        value, replies = self._clamp(msg, msg.fade_time_s, *FADE_TIME_RANGE, msg.axis)
        for axis_id in self._addressed(msg.axis):
            self.axes[axis_id].fade_time_s = value
        return replies

    def _on_trim(self, msg: TrimControl):
        rejected = self._reject_if_disabled(msg)
        if rejected:
            return rejected
        value, replies = self._clamp(msg, msg.trim_deg, -POSITION_LIMIT_DEG,
                                     POSITION_LIMIT_DEG, msg.axis)
        for axis_id in self._addressed(msg.axis):
            unit = self.axes[axis_id]
            unit.state = replace(unit.state, trim_deg=value)
        return replies

    def _on_shaker(self, msg: ShakerControl):
        rejected = self._reject_if_disabled(msg)
        if rejected:
            return rejected
        amp, replies_a = self._clamp(msg, msg.amplitude_lbf, *SHAKER_AMP_RANGE, msg.axis)
        freq, replies_f = self._clamp(msg, msg.frequency_hz, *SHAKER_FREQ_RANGE, msg.axis)
        for axis_id in self._addressed(msg.axis):
            unit = self.axes[axis_id]
            unit.state = replace(unit.state, shaker_amp_lbf=amp, shaker_freq_hz=freq)
        return replies_a + replies_f

    def _on_damping(self, msg: DampingControl):
        rejected = self._reject_if_disabled(msg)
        if rejected:
            return rejected
        value, replies = self._clamp(msg, msg.ratio, *DAMPING_RATIO_RANGE, msg.axis)
        for axis_id in self._addressed(msg.axis):
            unit = self.axes[axis_id]
            unit.state = replace(unit.state, zeta=value)
        return replies

    def _on_cueing(self, msg: CueingForceControl):
        rejected = self._reject_if_disabled(msg)
        if rejected:
            return rejected
        replies = []
        pos, extra = self._clamp(msg, msg.softstop_pos_deg, -SOFTSTOP_POS_CAP,
                                 SOFTSTOP_POS_CAP, msg.axis)
        replies += extra
        mult, extra = self._clamp(msg, msg.gradient_multiplier, *SOFTSTOP_MULT_RANGE,
                                  msg.axis)
        replies += extra
        for axis_id in self._addressed(msg.axis):
            unit = self.axes[axis_id]
            unit.cue_enabled = msg.enable
            unit.cue_pos_deg = pos
            unit.cue_multiplier = mult
            unit.rebuild_characteristic()
        return replies

    def _on_inertia(self, msg: InertiaControl):
        rejected = self._reject_if_disabled(msg)
        if rejected:
            return rejected
        value, replies = self._clamp(msg, msg.value, *INERTIA_RANGE, msg.axis)
        value = round(value / 0.01) * 0.01  # 0.01 device resolution
        for axis_id in self._addressed(msg.axis):
            unit = self.axes[axis_id]
            unit.state = replace(unit.state, inertia=value)
        return replies

    def _on_ip_change(self, msg: IpChange):
        self.advertised_endpoint = (
            f"{msg.octet_a}.{msg.octet_b}.{msg.octet_c}.{msg.octet_d}", msg.port)
        return []

    _HANDLERS = {
        ControlCommand: _on_control,
        CharacteristicControl: _on_characteristic,
        TrimControl: _on_trim,
        ShakerControl: _on_shaker,
        DampingControl: _on_damping,
        CueingForceControl: _on_cueing,
        InertiaControl: _on_inertia,
        IpChange: _on_ip_change,
    }

    # -- feel loop -----------------------------------------------------------

    def step(self, dt: float, grip_forces=(0.0, 0.0)):
        """Advance both feel axes by dt with the applied grip forces, lbf."""
        for axis_id, grip in zip((AXIS_PITCH, AXIS_ROLL), grip_forces):
            unit = self.axes[axis_id]
            unit.step_fade(dt)
            measured = grip - self.force_offsets[axis_id]
            self.measured_forces[axis_id] = measured
            unit.state = stick_dynamics_step(unit.state, grip,
                                             unit.effective_curve(), dt,
                                             t=self.time_s)
        self.time_s += dt

    def axis_state(self, axis_id) -> StickAxisState:
        return self.axes[axis_id].state

    def set_switches(self, switches: GripSwitches):
        self.switches = switches

    # -- status stream -------------------------------------------------------

    def poll_status(self):
        """Due status messages, rate-gated and passed through the policy.

        Call once per feel step so deferred sends flush at the per-ID rate
        boundaries even between status emissions.
        """
        out = self.policy.due(self.time_s)
        if self.time_s + 1e-12 < self._status_due_s:
            return out
        self._status_due_s = self.time_s + self.status_interval_s
        for axis_id in (AXIS_PITCH, AXIS_ROLL):
            unit = self.axes[axis_id]
            status = RotaryStatus(axis=axis_id,
                                  theta_deg=unit.state.theta_deg,
                                  force_lbf=self.measured_forces[axis_id],
                                  mode=int(unit.state.mode),
                                  s1=self.switches.s1, s2=self.switches.s2,
                                  s3=self.switches.s3, s4=self.switches.s4)
            out += self.policy.offer(status, self.time_s)
        return out
