import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ofdmjcas.echo import (CONSTANT_ACCELERATION, CONSTANT_VELOCITY, EXPONENTIAL, MotionModel,
                           NoiseSpec, RadarLinkParams, TargetState, doppler_phase_step, propagate,
                           range_phase_step, received_power, relative_amplitude_db, synth_comb,
                           synth_diagonal)
from ofdmjcas.errors import DomainError, TargetPassedAntennaError
from ofdmjcas.grid import comb_allocation, diagonal_allocation
from ofdmjcas.sysconfig import SystemParams, derive_grid

CV = MotionModel(CONSTANT_VELOCITY)
CA = MotionModel(CONSTANT_ACCELERATION)


@pytest.fixture(scope="module")
def diag(grid):
    return diagonal_allocation(grid)


@pytest.fixture(scope="module")
def small():
    # 120 x 120 comb keeps the rank-1 checks cheap
    g = derive_grid(SystemParams(28e9, 840 * 120e3, 120e3, 0.125e-3, 60, 7))
    return g, comb_allocation(g)


class TestPropagate:
    def test_constant_velocity(self):
        s = propagate(TargetState(10, 20), 0.03, CV)
        assert s.range == pytest.approx(9.4)
        assert s.velocity == 20

    def test_constant_acceleration(self):
        s = propagate(TargetState(40, 5, 5.4), 0.03, CA)
        assert s.velocity == pytest.approx(5.162)
        assert s.range == pytest.approx(39.84757)

    def test_zero_dt(self):
        s = TargetState(12.5, -3, 1.0)
        assert propagate(s, 0.0, CA) == s
        assert propagate(s, 0.0, CV) == s

    def test_cv_ignores_acceleration(self):
        assert propagate(TargetState(40, 5, 5.4), 0.1, CV).velocity == 5

    def test_passes_antenna(self):
        with pytest.raises(TargetPassedAntennaError):
            propagate(TargetState(1.0, 20), 0.06, CV)

    def test_negative_dt(self):
        with pytest.raises(DomainError):
            propagate(TargetState(1.0, 1.0), -0.1, CV)

    def test_non_positive_range(self):
        with pytest.raises(DomainError):
            TargetState(0.0, 1.0)

    @given(st.floats(20, 200), st.floats(-30, 30), st.floats(-5.4, 5.4),
           st.floats(0, 0.2), st.floats(0, 0.2), st.sampled_from([CV, CA]))
    def test_composes(self, r, v, a, t1, t2, model):
        s = TargetState(r, v, a)
        once = propagate(s, t1 + t2, model)
        twice = propagate(propagate(s, t1, model), t2, model)
        assert once.range == pytest.approx(twice.range, rel=1e-12, abs=1e-12)
        assert once.velocity == pytest.approx(twice.velocity, rel=1e-12, abs=1e-12)


class TestAmplitude:
    @pytest.mark.parametrize("r,expected", [(9.4, 1.07), (7.6, 4.77), (10.0, 0.0)])
    def test_relative_db(self, r, expected):
        assert relative_amplitude_db(r, 10.0) == pytest.approx(expected, abs=5e-3)

    def test_relative_db_domain(self):
        with pytest.raises(DomainError):
            relative_amplitude_db(0.0, 10.0)

    def test_power_ratio(self):
        link = RadarLinkParams()
        ratio = received_power(link, TargetState(10, 0)) / received_power(link, TargetState(40, 0))
        assert ratio == pytest.approx(256, rel=1e-12)

    def test_doubling_range(self):
        link = RadarLinkParams(tx_power=2.0, tx_gain=10.0)
        p1 = received_power(link, TargetState(25, 0))
        assert received_power(link, TargetState(50, 0)) == pytest.approx(p1 / 16)

    def test_zero_rcs(self):
        assert received_power(RadarLinkParams(), TargetState(10, 0, rcs=0.0)) == 0.0

    def test_verbatim_formula(self):
        link = RadarLinkParams(tx_power=3.0, tx_gain=2.0, rx_gain=5.0)
        lam = 3e8 / 28e9
        expected = 3.0 * 2.0 * 5.0 * 1.5 * lam ** 2 / ((4 * math.pi) ** 3 * 20.0 ** 4 * 28e9 ** 2)
        assert received_power(link, TargetState(20, 0, rcs=1.5)) == pytest.approx(expected, rel=1e-12)

    @given(st.floats(0.5, 500), st.floats(0.5, 500))
    def test_db_matches_power(self, r, r_ref):
        link = RadarLinkParams()
        from_power = 10 * math.log10(received_power(link, TargetState(r, 0))
                                     / received_power(link, TargetState(r_ref, 0)))
        assert relative_amplitude_db(r, r_ref) == pytest.approx(from_power, abs=1e-9)


class TestSynthDiagonal:
    def test_phase_steps(self, grid):
        th_r = range_phase_step(40, grid)
        th_v = doppler_phase_step(5, grid)
        assert th_r == pytest.approx(1.40743, abs=5e-6)
        assert th_v == pytest.approx(0.36652, abs=5e-6)
        assert th_r * 480 / (2 * math.pi) == pytest.approx(107.52, abs=5e-3)
        assert th_v * 480 / (2 * math.pi) == pytest.approx(28.00, abs=5e-3)

    def test_samples_match_direct_evaluation(self, grid, diag):
        frame = synth_diagonal([TargetState(40, 5)], grid, diag)
        th_r, th_v = range_phase_step(40, grid), doppler_phase_step(5, grid)
        expected = [math.cos(th_r * k) * math.cos(th_v * k) for k in range(480)]
        np.testing.assert_allclose(frame.samples.real, expected, atol=1e-12)
        assert not frame.samples.imag.any()

    def test_bounded_by_alpha(self, grid, diag):
        s = synth_diagonal([TargetState(17.3, -8.1)], grid, diag).samples
        assert np.abs(s).max() <= 1.0 + 1e-12

    def test_steady_is_single_tone(self, grid, diag):
        s = synth_diagonal([TargetState(40, 0)], grid, diag).samples
        k = np.arange(480)
        np.testing.assert_allclose(s.real, np.cos(range_phase_step(40, grid) * k), atol=1e-12)

    def test_dc_limit(self, grid, diag):
        s = synth_diagonal([TargetState(1e-12, 0)], grid, diag).samples
        np.testing.assert_allclose(s, 1.0, atol=1e-9)

    def test_weaker_target_scaled(self, grid, diag):
        s = synth_diagonal([TargetState(10, 0), TargetState(20, 0)], grid, diag).samples
        near = synth_diagonal([TargetState(10, 0)], grid, diag).samples
        far = synth_diagonal([TargetState(20, 0)], grid, diag).samples
        np.testing.assert_allclose(s, near + far / 4, atol=1e-12)

    def test_exponential_model_is_unit_modulus(self, grid, diag):
        s = synth_diagonal([TargetState(40, 5)], grid, diag, model=EXPONENTIAL).samples
        np.testing.assert_allclose(np.abs(s), 1.0, atol=1e-12)

    def test_rejects_comb_allocation(self, small):
        g, alloc = small
        with pytest.raises(ValueError):
            synth_diagonal([TargetState(1, 1)], g, alloc)


class TestSynthComb:
    def test_phase_slopes(self, small):
        g, alloc = small
        D = synth_comb([TargetState(40, 5)], g, alloc).samples
        # compare on the unit circle to sidestep phase wrapping
        assert D[1, 0] / D[0, 0] == pytest.approx(np.exp(-1j * range_phase_step(40, g)))
        assert D[0, 1] / D[0, 0] == pytest.approx(np.exp(1j * doppler_phase_step(5, g)))

    def test_table2_slopes(self, grid):
        assert -range_phase_step(40, grid) == pytest.approx(-1.40743, abs=5e-6)

    def test_no_targets(self, small):
        g, alloc = small
        D = synth_comb([], g, alloc).samples
        assert D.shape == (120, 120) and not D.any()

    def test_constant_magnitude(self, small):
        g, alloc = small
        D = synth_comb([TargetState(33.3, 12.0)], g, alloc).samples
        np.testing.assert_allclose(np.abs(D), 1.0, atol=1e-12)

    @given(st.floats(1, 80), st.floats(-40, 40))
    def test_rank_one(self, small, r, v):
        g, alloc = small
        D = synth_comb([TargetState(r, v)], g, alloc).samples
        np.testing.assert_allclose(D * D[0, 0], np.outer(D[:, 0], D[0, :]), atol=1e-9)


class TestNoise:
    def test_disabled_is_zero(self):
        assert not NoiseSpec().sample(8).any()

    def test_reproducible(self):
        spec = NoiseSpec(enabled=True, snr_db=10, seed=42)
        np.testing.assert_array_equal(spec.sample(64, 3), spec.sample(64, 3))
        assert not np.array_equal(spec.sample(64, 3), spec.sample(64, 4))

    def test_power(self):
        x = NoiseSpec(enabled=True, snr_db=10, seed=1).sample(200_000)
        assert np.mean(np.abs(x) ** 2) == pytest.approx(0.1, rel=0.02)

    def test_frame_noise_added(self, grid, diag):
        spec = NoiseSpec(enabled=True, snr_db=20, seed=7)
        clean = synth_diagonal([TargetState(40, 5)], grid, diag).samples
        noisy = synth_diagonal([TargetState(40, 5)], grid, diag, spec, frame_index=2).samples
        np.testing.assert_allclose(noisy - clean, spec.sample(480, 2), atol=1e-12)
