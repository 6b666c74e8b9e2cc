import math

import pytest

from fepsim.acs.feel import (
    Mode,
    StickAxisState,
    analytic_release,
    analytic_step_response,
    peak_overshoot_fraction,
    stick_dynamics_step,
)
from fepsim.acs.ffc import FfcCurve

# linear gradient of 2 lbf/deg over the span where 27 lbf is reached
LINEAR_K2 = FfcCurve(((-13.5, -27.0), (13.5, 27.0)))


def enabled_axis(**kwargs):
    defaults = dict(mode=Mode.ENABLED, inertia=0.6, zeta=0.35, trim_deg=0.0)
    defaults.update(kwargs)
    return StickAxisState(**defaults)


class TestStickDynamics:
    def test_equilibrium_at_trim(self):
        axis = enabled_axis(theta_deg=0.0)
        out = stick_dynamics_step(axis, 0.0, LINEAR_K2, 0.001)
        assert out.theta_deg == 0.0
        assert out.theta_dot_dps == 0.0

    def test_jammed_locks_motion(self):
        axis = enabled_axis(theta_deg=3.0, mode=Mode.JAMMED)
        out = axis
        for _ in range(1000):
            out = stick_dynamics_step(out, 20.0, LINEAR_K2, 0.001)
        assert out.theta_deg == 3.0
        assert out.theta_dot_dps == 0.0

    def test_step_response_matches_analytic(self):
        axis = enabled_axis()
        dt = 0.001
        worst = 0.0
        for i in range(10000):
            axis = stick_dynamics_step(axis, 11.0, LINEAR_K2, dt, t=i * dt)
            expect = analytic_step_response((i + 1) * dt, 0.6, 0.35, 2.0, 11.0)
            worst = max(worst, abs(axis.theta_deg - expect))
        assert worst < 1e-6
        # transient needs ~24 s to decay below 1e-6; continue to steady state
        for i in range(10000, 30000):
            axis = stick_dynamics_step(axis, 11.0, LINEAR_K2, dt, t=i * dt)
        assert axis.theta_deg == pytest.approx(5.5, abs=1e-6)

    def test_damped_frequency(self):
        # zero crossings of (theta - final) spaced by pi/wd
        axis = enabled_axis()
        dt = 0.001
        crossings = []
        prev = -5.5
        for i in range(20000):
            axis = stick_dynamics_step(axis, 11.0, LINEAR_K2, dt, t=i * dt)
            cur = axis.theta_deg - 5.5
            if prev < 0.0 <= cur or prev > 0.0 >= cur:
                crossings.append((i + 1) * dt)
            prev = cur
        spacing = [b - a for a, b in zip(crossings, crossings[1:])]
        wd = math.sqrt(2.0 / 0.6) * math.sqrt(1.0 - 0.35 ** 2)
        assert sum(spacing) / len(spacing) == pytest.approx(math.pi / wd, rel=1e-3)

    def test_hard_stop(self):
        axis = enabled_axis()
        for i in range(5000):
            axis = stick_dynamics_step(axis, 200.0, LINEAR_K2, 0.001, t=i * 0.001)
        assert axis.theta_deg == 24.0

    def test_disabled_drops_spring(self):
        axis = enabled_axis(theta_deg=5.0, mode=Mode.DISABLED, damping_on=False)
        out = stick_dynamics_step(axis, 0.0, LINEAR_K2, 0.001)
        assert out.theta_dot_dps == pytest.approx(0.0)  # no spring pullback

    def test_trim_shifts_equilibrium(self):
        axis = enabled_axis(trim_deg=4.0, theta_deg=4.0, zeta=0.9)
        out = axis
        for i in range(8000):
            out = stick_dynamics_step(out, 0.0, LINEAR_K2, 0.001, t=i * 0.001)
        assert out.theta_deg == pytest.approx(4.0, abs=1e-9)


class TestAnalytic:
    def test_initial_condition(self):
        assert analytic_step_response(0.0, 0.6, 0.35, 2.0, 11.0) == 0.0

    def test_final_value(self):
        assert analytic_step_response(200.0, 0.6, 0.35, 2.0, 11.0) == pytest.approx(5.5)

    def test_peak_overshoot(self):
        wd = math.sqrt(2.0 / 0.6) * math.sqrt(1.0 - 0.35 ** 2)
        peak_t = math.pi / wd
        peak = analytic_step_response(peak_t, 0.6, 0.35, 2.0, 11.0)
        expect = 5.5 * (1.0 + peak_overshoot_fraction(0.35))
        assert peak == pytest.approx(expect, rel=1e-12)
        assert peak == pytest.approx(7.20, abs=0.01)

    def test_critical_and_overdamped_branches(self):
        for zeta in (1.0, 1.8):
            assert analytic_step_response(0.0, 0.6, zeta, 2.0, 11.0) == 0.0
            assert analytic_step_response(100.0, 0.6, zeta, 2.0, 11.0) == pytest.approx(5.5)
            # monotone rise, no overshoot
            samples = [analytic_step_response(t * 0.05, 0.6, zeta, 2.0, 11.0)
                       for t in range(400)]
            assert all(b >= a - 1e-12 for a, b in zip(samples, samples[1:]))
            assert max(samples) <= 5.5 + 1e-9

    def test_release_branches_continuous_near_critical(self):
        for t in (0.3, 1.0, 2.5):
            lo = analytic_release(t, 10.0, 1.0 - 1e-9, 1.826)
            hi = analytic_release(t, 10.0, 1.0 + 1e-9, 1.826)
            mid = analytic_release(t, 10.0, 1.0, 1.826)
            assert lo == pytest.approx(mid, rel=1e-6)
            assert hi == pytest.approx(mid, rel=1e-6)

    def test_release_initial_conditions(self):
        assert analytic_release(0.0, 10.0, 0.35, 1.826) == pytest.approx(10.0)
        eps = 1e-7
        rate = (analytic_release(eps, 10.0, 0.35, 1.826) - 10.0) / eps
        assert rate == pytest.approx(0.0, abs=1e-5)
