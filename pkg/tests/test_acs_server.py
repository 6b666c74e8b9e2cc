import math
import time

import pytest

from fepsim.acs.emulator import AcsEmulator
from fepsim.acs.feel import Mode, StickAxisState, stick_dynamics_step
from fepsim.acs.ffc import FfcCurve
from fepsim.acs.messages import (
    AXIS_ALL,
    AXIS_PITCH,
    ControlCommand,
    DampingControl,
    IpChange,
    LimitedCharacteristic,
    RotaryStatus,
    decode,
    encode,
)
from fepsim.acs.server import AcsUdpServer
from fepsim.acs.transport import UdpEndpoint

LINEAR = FfcCurve(((-24.0, -24.0), (24.0, 24.0)))


def make_server():
    emu = AcsEmulator(pitch_curve=LINEAR, roll_curve=LINEAR, status_rate_hz=200.0)
    emu.run_ibit()
    emu.request_mode(AXIS_ALL, Mode.ENABLED)
    return AcsUdpServer(emulator=emu)


def drain(endpoint, tries=20):
    out = []
    for _ in range(tries):
        got = endpoint.receive()
        if got:
            out += got
        else:
            time.sleep(0.005)
    return out


class TestUdpService:
    def test_command_reply_and_status_over_real_sockets(self):
        server = make_server()
        client = UdpEndpoint(local=("127.0.0.1", 0), peer=server.address)
        try:
            client.send(encode(DampingControl(axis=AXIS_PITCH, ratio=9.0)))
            time.sleep(0.02)
            for k in range(12):
                server.step(0.005, grip_forces=(4.0, 0.0))
            messages = [decode(d) for d in drain(client)]
            limited = [m for m in messages if isinstance(m, LimitedCharacteristic)]
            statuses = [m for m in messages if isinstance(m, RotaryStatus)]
            assert limited and limited[0].value == pytest.approx(6.0)
            assert statuses, "no status stream over UDP"
            assert server.emulator.axis_state(AXIS_PITCH).zeta == 6.0
        finally:
            client.close()
            server.close()

    def test_endpoint_change_applies_at_next_bind(self):
        server = make_server()
        client = UdpEndpoint(local=("127.0.0.1", 0), peer=server.address)
        try:
            # reserve a free port, then release it for the server to take
            probe = UdpEndpoint(local=("127.0.0.1", 0))
            new_port = probe.address[1]
            probe.close()
            client.send(encode(IpChange(octet_a=127, octet_b=0, octet_c=0,
                                        octet_d=1, port=new_port)))
            time.sleep(0.02)
            server.step(0.005)   # ingest ID50; rebind happens next step
            server.step(0.005)
            assert server.address[1] == new_port
            mover = UdpEndpoint(local=("127.0.0.1", 0), peer=server.address)
            mover.send(encode(ControlCommand(mode_request=2)))
            time.sleep(0.02)
            server.step(0.005)
            assert server.emulator.axis_state(AXIS_PITCH).mode == Mode.JAMMED
            mover.close()
        finally:
            client.close()
            server.close()


class TestFeelOptions:
    def test_shaker_oscillates_at_commanded_frequency(self):
        # critical damping decays the turn-on transient fastest, so the
        # window isolates the forced 4 Hz buzz
        axis = StickAxisState(mode=Mode.ENABLED, inertia=0.6, zeta=1.0,
                              shaker_on=True, shaker_amp_lbf=3.0,
                              shaker_freq_hz=4.0)
        dt = 0.001
        trace = []
        for i in range(10000):  # 10 s; the turn-on transient needs ~8 s
            axis = stick_dynamics_step(axis, 0.0, LINEAR, dt, t=i * dt)
            trace.append(axis.theta_deg)
        steady = trace[8000:]
        mean = sum(steady) / len(steady)
        swing = max(steady) - min(steady)
        # second-order forced amplitude: F / sqrt((k - m w^2)^2 + (c w)^2)
        w = 2.0 * math.pi * 4.0
        k, m = 1.0, 0.6
        c = 2.0 * 1.0 * math.sqrt(m * k)
        expected = 3.0 / math.sqrt((k - m * w * w) ** 2 + (c * w) ** 2)
        assert swing == pytest.approx(2.0 * expected, rel=0.15)
        crossings = sum(1 for a, b in zip(steady, steady[1:])
                        if a < mean <= b)
        assert crossings / 2.0 == pytest.approx(4.0, abs=0.5)

    def test_viscous_friction_slows_settling(self):
        base = StickAxisState(mode=Mode.ENABLED, inertia=0.6, zeta=0.2)
        sticky = StickAxisState(mode=Mode.ENABLED, inertia=0.6, zeta=0.2,
                                friction_viscous=2.0)
        a, b = base, sticky
        peak_a = peak_b = 0.0
        for i in range(4000):
            a = stick_dynamics_step(a, 11.0, LINEAR, 0.001, t=i * 0.001)
            b = stick_dynamics_step(b, 11.0, LINEAR, 0.001, t=i * 0.001)
            peak_a = max(peak_a, a.theta_deg)
            peak_b = max(peak_b, b.theta_deg)
        assert peak_b < peak_a  # extra dissipation trims the overshoot

    def test_coulomb_friction_sticks_inside_the_friction_band(self):
        coulomb = 2.0
        axis = StickAxisState(mode=Mode.ENABLED, inertia=0.6, zeta=0.2,
                              friction_coulomb_lbf=coulomb)
        for i in range(20000):
            axis = stick_dynamics_step(axis, 11.0, LINEAR, 0.001, t=i * 0.001)
        gradient = LINEAR.gradient_at(axis.theta_deg)
        target = 11.0 / gradient
        # rests wherever the spring mismatch is within the breakout force,
        # and friction keeps it away from the exact frictionless equilibrium
        assert abs(axis.theta_deg * gradient - 11.0) <= coulomb + 0.05
        assert abs(axis.theta_deg - target) > 0.05
        assert abs(axis.theta_dot_dps) < 0.2

    def test_state_invariants_enforced(self):
        with pytest.raises(ValueError):
            StickAxisState(zeta=0.1)
        with pytest.raises(ValueError):
            StickAxisState(inertia=11.0)
        with pytest.raises(ValueError):
            StickAxisState(theta_deg=30.0)
        with pytest.raises(ValueError):
            StickAxisState(friction_coulomb_lbf=-1.0)
