import math

import numpy as np
import pytest

from fepsim.dynamics import (
    ActuatorSpec,
    AircraftState,
    MassProperties,
    actuator_step,
    atmosphere_sample,
    body_to_ned_matrix,
    euler_kinematics,
    integrate_step,
    rotational_derivative,
    rotational_energy,
    standard_atmosphere,
    translational_derivative,
)
from fepsim.errors import ConfigError, RangeError, SingularityError


def make_mass(m=10.0, inertia=None):
    if inertia is None:
        inertia = np.diag([1.0, 2.0, 3.0])
    return MassProperties(mass_slug=m, inertia=inertia)


TAIL = ActuatorSpec(tau_s=0.0495, rate_limit_dps=60.0, pos_min_deg=-25.0, pos_max_deg=25.0)


class TestTranslational:
    def test_equilibrium(self):
        out = translational_derivative([0, 0, 0], [0, 0, 0], [0, 0, 0], make_mass())
        np.testing.assert_array_equal(out, np.zeros(3))

    def test_coriolis_only(self):
        # V=(100,0,0), omega=(0,0,0.1): -omega x V = (0, -10, 0)
        out = translational_derivative([100, 0, 0], [0, 0, 0.1], [0, 0, 0], make_mass())
        np.testing.assert_allclose(out, [0.0, -10.0, 0.0], atol=1e-12)

    def test_force_over_mass(self):
        out = translational_derivative([0, 0, 0], [0, 0, 0], [321.74, 0, 0], make_mass())
        np.testing.assert_allclose(out, [32.174, 0.0, 0.0], rtol=1e-12)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            translational_derivative([np.nan, 0, 0], [0, 0, 0], [0, 0, 0], make_mass())


class TestRotational:
    def test_principal_axis_spin(self):
        out = rotational_derivative([1, 0, 0], [0, 0, 0], make_mass())
        np.testing.assert_allclose(out, np.zeros(3), atol=1e-15)

    def test_gyroscopic_coupling(self):
        # J=diag(1,2,3), omega=(1,1,0): omega x J omega = (0,0,1)
        out = rotational_derivative([1, 1, 0], [0, 0, 0], make_mass())
        np.testing.assert_allclose(out, [0.0, 0.0, -1.0 / 3.0], rtol=1e-12)

    def test_inverse_inertia(self):
        out = rotational_derivative([0, 0, 0], [1, 2, 3], make_mass())
        np.testing.assert_allclose(out, [1.0, 1.0, 1.0], rtol=1e-12)

    def test_singular_inertia_rejected_at_load(self):
        with pytest.raises(ConfigError):
            MassProperties(mass_slug=1.0, inertia=np.zeros((3, 3)))


class TestEulerKinematics:
    def test_identity_at_level(self):
        out = euler_kinematics([0, 0, 0], [0.1, -0.2, 0.3])
        np.testing.assert_array_equal(out, [0.1, -0.2, 0.3])

    def test_rolled_yaw(self):
        # phi=90 deg, theta=0, omega=(0,0,1) -> (0, -1, 0)
        out = euler_kinematics([math.pi / 2, 0, 0], [0, 0, 1])
        np.testing.assert_allclose(out, [0.0, -1.0, 0.0], atol=1e-12)

    def test_guard_band(self):
        with pytest.raises(SingularityError) as err:
            euler_kinematics([0, math.radians(89.9), 0], [0, 0, 0], margin_deg=0.5)
        assert err.value.euler_rad[1] == pytest.approx(math.radians(89.9))


class TestActuator:
    def test_fixed_point(self):
        assert actuator_step(5.0, 5.0, TAIL, 0.001) == 5.0

    def test_rate_limited_ramp(self):
        # demanded rate 25/0.0495 ~ 505 deg/s >> 60, so pure 60 deg/s ramp
        pos = 0.0
        for _ in range(100):
            pos = actuator_step(pos, 25.0, TAIL, 0.001)
        assert pos == pytest.approx(6.0, abs=1e-9)

    def test_command_clamped_to_position_band(self):
        pos = 0.0
        for _ in range(5000):
            pos = actuator_step(pos, 40.0, TAIL, 0.001)
        assert pos == pytest.approx(25.0, abs=1e-9)

    def test_property_band_and_rate(self):
        rng = np.random.default_rng(42)
        pos = np.zeros(2000)
        dt = 0.001
        for _ in range(200):
            cmd = rng.uniform(-80.0, 80.0, size=pos.shape)
            new = actuator_step(pos, cmd, TAIL, dt)
            assert np.all(new >= TAIL.pos_min_deg - 1e-12)
            assert np.all(new <= TAIL.pos_max_deg + 1e-12)
            assert np.all(np.abs(new - pos) <= TAIL.rate_limit_dps * dt + 1e-12)
            pos = new

    def test_no_overshoot_with_coarse_step(self):
        # dt > tau would overshoot plain forward Euler; the clamp stops at cmd
        new = actuator_step(0.0, 1.0, TAIL, 0.1)
        assert new == pytest.approx(1.0)


class TestAtmosphere:
    def test_sea_level_density(self):
        rho, _ = standard_atmosphere(0.0)
        assert rho == pytest.approx(0.0023769, rel=1e-3)

    def test_tropopause_lapse_stops(self):
        # speed of sound constant above the breakpoint, falling below it
        _, a_below = standard_atmosphere(36000.0)
        _, a_at = standard_atmosphere(36089.24)
        _, a_above = standard_atmosphere(40000.0)
        assert a_below > a_at
        assert a_at == pytest.approx(a_above, rel=1e-12)

    def test_density_continuous_at_tropopause(self):
        rho_lo, _ = standard_atmosphere(36089.24 - 1e-6)
        rho_hi, _ = standard_atmosphere(36089.24 + 1e-6)
        assert rho_lo == pytest.approx(rho_hi, rel=1e-9)

    def test_out_of_range(self):
        with pytest.raises(RangeError):
            standard_atmosphere(-1.0)
        with pytest.raises(RangeError):
            standard_atmosphere(50001.0)

    def test_sample_relations(self):
        s = atmosphere_sample([300.0, 10.0, 30.0], 10000.0)
        vt = math.sqrt(300**2 + 10**2 + 30**2)
        assert s.vt == pytest.approx(vt)
        assert s.qbar == pytest.approx(0.5 * s.rho * vt * vt)
        assert s.alpha_rad == pytest.approx(math.atan2(30.0, 300.0))
        assert s.beta_rad == pytest.approx(math.asin(10.0 / vt))


def zero_fm(state, t):
    return np.zeros(3), np.zeros(3)


def make_state(velocity=(0, 0, 0), omega=(0, 0, 0), euler=(0, 0, 0),
               position=(0, 0, -5000.0), surfaces=(0, 0, 0)):
    return AircraftState(np.array(velocity, float), np.array(omega, float),
                         np.array(euler, float), np.array(position, float),
                         np.array(surfaces, float))


SPECS = (TAIL,
         ActuatorSpec(0.0495, 80.0, -21.5, 21.5),
         ActuatorSpec(0.0495, 120.0, -30.0, 30.0))


class TestIntegrate:
    def test_ballistic_straight_line(self):
        mass = make_mass(m=10.0, inertia=np.diag([100.0, 200.0, 300.0]))
        state = make_state(velocity=(200.0, 0.0, 0.0), euler=(0.0, 0.2, 0.5))
        start = state.copy()
        for i in range(1000):
            state = integrate_step(state, state.surfaces, SPECS, mass, zero_fm,
                                   dt=0.001, t=i * 0.001)
        np.testing.assert_allclose(state.velocity, start.velocity, atol=1e-12)
        np.testing.assert_allclose(state.euler, start.euler, atol=1e-12)
        expected = start.position + body_to_ned_matrix(start.euler) @ start.velocity * 1.0
        np.testing.assert_allclose(state.position, expected, rtol=1e-9)

    def test_principal_axis_roll_conserved(self):
        mass = make_mass(m=10.0, inertia=np.diag([100.0, 200.0, 300.0]))
        state = make_state(omega=(1.5, 0.0, 0.0))
        for i in range(10000):
            state = integrate_step(state, state.surfaces, SPECS, mass, zero_fm,
                                   dt=0.001, t=i * 0.001)
        assert abs(state.omega[0] - 1.5) < 1e-9
        assert abs(state.omega[1]) < 1e-9
        assert abs(state.omega[2]) < 1e-9

    def test_torque_free_energy_drift(self):
        mass = MassProperties(10.0, np.array([[100.0, 0.0, -20.0],
                                              [0.0, 200.0, 0.0],
                                              [-20.0, 0.0, 300.0]]))
        state = make_state(omega=(0.8, 0.3, -0.4))
        e0 = rotational_energy(state.omega, mass)
        for i in range(10000):
            state = integrate_step(state, state.surfaces, SPECS, mass, zero_fm,
                                   dt=0.001, t=i * 0.001)
        e1 = rotational_energy(state.omega, mass)
        assert abs(e1 - e0) / e0 < 1e-7

    def test_rk4_order_four_convergence(self):
        mass = MassProperties(12.0, np.array([[90.0, 0.0, -15.0],
                                              [0.0, 180.0, 0.0],
                                              [-15.0, 0.0, 260.0]]))

        def smooth_fm(state, t):
            moment = np.array([40.0 * math.sin(1.7 * t),
                               30.0 * math.cos(2.3 * t),
                               -20.0 * math.sin(1.1 * t)])
            force = np.array([15.0 * math.cos(0.9 * t), 8.0 * math.sin(1.3 * t), -12.0])
            return force, moment

        def run(dt):
            state = make_state(velocity=(150.0, 0.0, 10.0), omega=(0.2, -0.1, 0.05),
                               euler=(0.1, 0.05, 0.0))
            steps = round(2.0 / dt)
            for i in range(steps):
                state = integrate_step(state, state.surfaces, SPECS, mass, smooth_fm,
                                       dt=dt, t=i * dt)
            return np.concatenate([state.velocity, state.omega, state.euler])

        ref = run(0.02 / 64.0)
        err_coarse = np.linalg.norm(run(0.02) - ref)
        err_fine = np.linalg.norm(run(0.01) - ref)
        ratio = err_coarse / err_fine
        assert 13.0 <= ratio <= 19.0

    def test_deterministic(self):
        mass = make_mass(m=10.0, inertia=np.diag([100.0, 200.0, 300.0]))

        def wiggle(state, t):
            return np.array([5.0, 1.0, -2.0]), np.array([3.0 * math.sin(t), -1.0, 0.5])

        def run():
            state = make_state(velocity=(100.0, 5.0, 2.0), omega=(0.1, 0.2, -0.1))
            out = []
            for i in range(500):
                state = integrate_step(state, (1.0, -2.0, 0.5), SPECS, mass, wiggle,
                                       dt=0.001, t=i * 0.001)
                out.append(state.velocity.tobytes() + state.omega.tobytes() +
                           state.euler.tobytes() + state.position.tobytes() +
                           state.surfaces.tobytes())
            return b"".join(out)

        assert run() == run()

    def test_singularity_propagates(self):
        mass = make_mass(m=10.0, inertia=np.diag([100.0, 200.0, 300.0]))
        state = make_state(euler=(0.0, math.radians(89.8), 0.0))
        with pytest.raises(SingularityError):
            integrate_step(state, state.surfaces, SPECS, mass, zero_fm, dt=0.001)
