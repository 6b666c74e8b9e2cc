import math

import numpy as np
import pytest

from fepsim.errors import ConfigError
from fepsim.protection import (
    EnvelopeDatabase,
    EnvelopeLimits,
    ProtectionGains,
    bank_protect,
    effective_alpha_max,
    effective_alpha_min,
    longitudinal_protect,
    nz_equivalent_alpha,
    rate_protect,
)

LIMITS = EnvelopeLimits(p_min=-3.0, p_max=3.0, q_min=-0.5, q_max=1.5,
                        r_min=-0.5, r_max=0.5, alpha_max_deg=25.0,
                        alpha_min_deg=-10.0, nz_max_g=9.0, nz_min_g=-3.0,
                        phi_max_deg=60.0).validate()

GAINS = ProtectionGains(k_alpha=1.0, k_qdamp=0.5, k_phi=0.06, k_pdamp=0.5,
                        k_rdamp=0.2, alpha_fade=0.85, phi_fade=0.6)


class TestRateProtect:
    def test_inside_passes_unchanged(self):
        out = rate_protect([0.5, 0.2, -0.1], LIMITS)
        np.testing.assert_array_equal(out, [0.5, 0.2, -0.1])

    def test_saturates(self):
        out = rate_protect([0.0, 2.0, 0.0], LIMITS)
        assert out[1] == 1.5

    def test_idempotent(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            w = rng.uniform(-5, 5, size=3)
            once = rate_protect(w, LIMITS)
            twice = rate_protect(once, LIMITS)
            np.testing.assert_array_equal(once, twice)
            assert np.all(once >= [LIMITS.p_min, LIMITS.q_min, LIMITS.r_min])
            assert np.all(once <= [LIMITS.p_max, LIMITS.q_max, LIMITS.r_max])


class TestNzEquivalentAlpha:
    def test_direct_evaluation(self):
        alpha, fallback = nz_equivalent_alpha(20000.0, 9.0, 300.0, 300.0, -4.0, 0.6)
        assert alpha == pytest.approx(0.5)
        assert not fallback

    def test_inverse_in_qbar(self):
        a1, _ = nz_equivalent_alpha(20000.0, 9.0, 300.0, 300.0, -4.0, 0.6)
        a2, _ = nz_equivalent_alpha(20000.0, 9.0, 600.0, 300.0, -4.0, 0.6)
        assert a2 == pytest.approx(a1 / 2.0)

    def test_qbar_floor_fallback(self):
        alpha, fallback = nz_equivalent_alpha(20000.0, 9.0, 5.0, 300.0, -4.0, 0.43)
        assert fallback
        assert alpha == 0.43


class TestEffectiveLimits:
    def test_min_selection(self):
        assert effective_alpha_max(0.45, 0.50) == 0.45
        assert effective_alpha_max(0.50, 0.45) == 0.45
        assert effective_alpha_max(0.45, 0.45) == 0.45

    def test_lower_side_mirrors(self):
        assert effective_alpha_min(-0.20, -0.10) == -0.10


class TestLongitudinalProtect:
    ALPHA_MAX = math.radians(25.0)

    def test_inactive_region_passthrough(self):
        q_c, active, lam = longitudinal_protect(0.3, 0.5 * self.ALPHA_MAX, 0.1,
                                           self.ALPHA_MAX, LIMITS, GAINS)
        assert q_c == 0.3
        assert not active

    def test_pure_restorative_at_limit(self):
        q_c, active, lam = longitudinal_protect(0.3, self.ALPHA_MAX, 0.2,
                                           self.ALPHA_MAX, LIMITS, GAINS)
        assert active
        assert q_c == pytest.approx(-0.1)

    def test_midfade_blend(self):
        alpha = 0.925 * self.ALPHA_MAX
        q = 0.1
        q_c, active, lam = longitudinal_protect(0.3, alpha, q, self.ALPHA_MAX, LIMITS, GAINS)
        assert active
        restorative = GAINS.k_alpha * (1 - 0.925) * LIMITS.q_max - GAINS.k_qdamp * q
        assert q_c == pytest.approx(0.5 * 0.3 + 0.5 * restorative)

    def test_nose_down_passes_rate_protect_only(self):
        q_c, active, lam = longitudinal_protect(-0.3, self.ALPHA_MAX, 0.2,
                                           self.ALPHA_MAX, LIMITS, GAINS)
        assert q_c == -0.3
        assert not active

    def test_min_side_mirror(self):
        alpha_min = math.radians(-10.0)
        q_c, active, lam = longitudinal_protect(-0.3, alpha_min, -0.2, self.ALPHA_MAX,
                                           LIMITS, GAINS, alpha_min_eff_rad=alpha_min)
        assert active
        # at the limit the restorative is pure damping: -k_qdamp * q > 0
        assert q_c == pytest.approx(0.1)

    def test_authority_monotone_in_alpha(self):
        prev = None
        for alpha_frac in np.linspace(0.0, 1.3, 200):
            q_c, _, _ = longitudinal_protect(0.4, alpha_frac * self.ALPHA_MAX, 0.0,
                                          self.ALPHA_MAX, LIMITS, GAINS)
            if prev is not None:
                assert q_c <= prev + 1e-12
            prev = q_c

    def test_fade_factor_monotone_and_clamped(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            q_p = rng.uniform(0.01, 1.5)
            q = rng.uniform(-0.5, 0.5)
            prev = None
            for frac in np.linspace(0.0, 1.5, 120):
                _, _, lam = longitudinal_protect(q_p, frac * self.ALPHA_MAX, q,
                                                 self.ALPHA_MAX, LIMITS, GAINS)
                assert 0.0 <= lam <= 1.0
                if prev is not None:
                    assert lam <= prev + 1e-12
                prev = lam

    def test_continuity_in_alpha(self):
        grid = np.linspace(0.0, 1.2 * self.ALPHA_MAX, 4000)
        outs = [longitudinal_protect(0.4, a, 0.15, self.ALPHA_MAX, LIMITS, GAINS)[0]
                for a in grid]
        steps = np.abs(np.diff(outs))
        # bounded by (local slope) * grid spacing, with a safety factor
        dalpha = grid[1] - grid[0]
        slope_bound = (abs(0.4) + GAINS.k_alpha * LIMITS.q_max + 1.0) \
            / ((1 - GAINS.alpha_fade) * self.ALPHA_MAX)
        assert np.max(steps) < 3.0 * slope_bound * dalpha


class TestBankProtect:
    PHI_MAX = math.radians(60.0)

    def test_inactive_below_fade(self):
        p_c, active, lam = bank_protect(0.5, 0.2 * self.PHI_MAX, 0.5, 0.0, LIMITS, GAINS)
        assert p_c == 0.5
        assert not active

    def test_restorative_at_limit(self):
        p_c, active, lam = bank_protect(0.5, self.PHI_MAX, 0.3, 0.1, LIMITS, GAINS)
        assert active
        expect = -GAINS.k_phi * LIMITS.p_max - 0.5 * 0.3 - 0.2 * 0.1
        assert p_c == pytest.approx(expect)

    def test_yaw_only_buildup_engages(self):
        phi = 0.95 * self.PHI_MAX
        p_c, active, lam = bank_protect(0.0, phi, 0.0, 0.3, LIMITS, GAINS)
        assert active
        assert p_c < 0.0

    def test_bank_reducing_demand_passes(self):
        p_c, active, lam = bank_protect(-0.4, 0.95 * self.PHI_MAX, 0.0, 0.0, LIMITS, GAINS)
        assert p_c == -0.4
        assert not active

    def test_symmetry(self):
        p_pos, _, _ = bank_protect(0.5, 0.9 * self.PHI_MAX, 0.3, 0.1, LIMITS, GAINS)
        p_neg, _, _ = bank_protect(-0.5, -0.9 * self.PHI_MAX, -0.3, -0.1, LIMITS, GAINS)
        assert p_pos == pytest.approx(-p_neg)

    def test_authority_monotone_in_phi(self):
        prev = None
        for frac in np.linspace(0.0, 1.3, 200):
            p_c, _, _ = bank_protect(0.6, frac * self.PHI_MAX, 0.0, 0.0, LIMITS, GAINS)
            if prev is not None:
                assert p_c <= prev + 1e-12
            prev = p_c

    def test_fade_factor_monotone_in_phi(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            p_p = rng.uniform(0.01, 2.0)
            p = rng.uniform(-0.5, 0.5)
            r = rng.uniform(-0.3, 0.3)
            prev = None
            for frac in np.linspace(0.0, 1.5, 120):
                _, _, lam = bank_protect(p_p, frac * self.PHI_MAX, p, r,
                                         LIMITS, GAINS)
                assert 0.0 <= lam <= 1.0
                if prev is not None:
                    assert lam <= prev + 1e-12
                prev = lam

    def test_continuity_in_phi(self):
        grid = np.linspace(0.01, 1.2 * self.PHI_MAX, 4000)
        outs = [bank_protect(0.6, x, 0.2, 0.05, LIMITS, GAINS)[0] for x in grid]
        steps = np.abs(np.diff(outs))
        dphi = grid[1] - grid[0]
        slope_bound = (abs(0.6) + GAINS.k_phi * LIMITS.p_max + 1.0) \
            / ((1 - GAINS.phi_fade) * self.PHI_MAX)
        assert np.max(steps) < 3.0 * slope_bound * dphi


def node(q_max=0.7, alpha_max=25.0):
    return EnvelopeLimits(p_min=-3.0, p_max=3.0, q_min=-0.5, q_max=q_max,
                          r_min=-0.5, r_max=0.5, alpha_max_deg=alpha_max,
                          alpha_min_deg=-10.0, nz_max_g=9.0, nz_min_g=-3.0,
                          phi_max_deg=60.0)


class TestSchedule:
    def make_db(self):
        nodes = [
            [node(q_max=0.8, alpha_max=26.0), node(q_max=0.7, alpha_max=25.0)],
            [node(q_max=0.6, alpha_max=24.0), node(q_max=0.5, alpha_max=23.0)],
        ]
        return EnvelopeDatabase([0.2, 0.6], [0.0, 40000.0], nodes)

    def test_node_identity(self):
        db = self.make_db()
        lim, clamped = db.schedule(0.2, 0.0)
        assert lim.q_max == 0.8
        assert lim.alpha_max_deg == 26.0
        assert not clamped

    def test_midpoint_mean(self):
        db = self.make_db()
        lim, _ = db.schedule(0.4, 0.0)
        assert lim.q_max == pytest.approx(0.7)
        assert lim.alpha_max_deg == pytest.approx(25.0)

    def test_outside_hull_clamps_and_flags(self):
        db = self.make_db()
        lim, clamped = db.schedule(0.9, 50000.0)
        assert clamped
        assert lim.q_max == pytest.approx(0.5)

    def test_invalid_node_rejected(self):
        bad = EnvelopeLimits(p_min=3.0, p_max=-3.0, q_min=-0.5, q_max=0.5,
                             r_min=-0.5, r_max=0.5, alpha_max_deg=25.0,
                             alpha_min_deg=-10.0, nz_max_g=9.0, nz_min_g=-3.0,
                             phi_max_deg=60.0)
        with pytest.raises(ConfigError):
            EnvelopeDatabase([0.2], [0.0], [[bad]])


class TestGainValidation:
    def test_fade_onset_bounds(self):
        with pytest.raises(ConfigError):
            ProtectionGains(alpha_fade=1.0)
        with pytest.raises(ConfigError):
            ProtectionGains(phi_fade=0.0)

    def test_negative_gain_rejected(self):
        with pytest.raises(ConfigError):
            ProtectionGains(k_alpha=-0.1)
