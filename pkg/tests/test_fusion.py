import math
from dataclasses import replace

import pytest

from ofdmjcas.echo import CONSTANT_ACCELERATION, MotionModel, TargetState
from ofdmjcas.errors import NoValidEstimateError, PredictionInfeasibleError
from ofdmjcas.estimator import PeakSet, decode_pair, pair_from_peaks
from ofdmjcas.fusion import (BASE_AMP_GATE, BASE_BIN_GATE, UNRESOLVED, Hypothesis, Measurement,
                             hypotheses_from_pair, infeasible_filter, predict, resolve, score)
from ofdmjcas.scenario import TruthTarget, run_track, truth_label

CV = MotionModel()
CA = MotionModel(CONSTANT_ACCELERATION)
NO_SLACK = MotionModel(a_max=0.0)


def peaks(*positions, level=0.0):
    return PeakSet(bins=tuple(round(p) for p in positions), magnitudes=(1.0,) * len(positions),
                   positions=tuple(positions), levels_db=(level,) * len(positions))


class TestPredict:
    def test_estimate_b_constant_v(self, grid):
        img = predict(Hypothesis("B", TargetState(10, 20), 10), 0.12, CV, grid)
        assert img.state.range == pytest.approx(7.6)
        assert img.amplitude_db == pytest.approx(4.77, abs=5e-3)

    def test_estimate_a_bins(self, grid):
        img = predict(Hypothesis("A", TargetState(40, 5), 40), 0.03, CV, grid)
        assert img.state.range == pytest.approx(39.85)
        low, high = img.peak_bins
        assert low == pytest.approx(79.1, abs=0.05) and high == pytest.approx(135.1, abs=0.05)
        assert 79 - 1 <= round(low) <= 81 and 133 <= round(high) <= 134 + 1

    def test_identical_at_origin(self, grid):
        a, b = hypotheses_from_pair(pair_from_peaks(81, 134, grid))
        pa, pb = predict(a, 0.0, CV, grid), predict(b, 0.0, CV, grid)
        assert pa.peak_bins == pytest.approx(pb.peak_bins, abs=1e-9)
        assert pa.peak_bins == pytest.approx((81, 134), abs=1e-9)

    def test_low_bin_when_velocity_dominates(self, grid):
        img = predict(Hypothesis("B", TargetState(10, 20), 10), 0.0, CV, grid)
        b_r, b_v = 10 / grid.range_bin, 20 / grid.velocity_bin
        assert img.peak_bins == pytest.approx((b_v - b_r, b_v + b_r))

    def test_gates(self, grid):
        h = Hypothesis("A", TargetState(40, 5), 40)
        assert predict(h, 0.0, CV, grid).bin_gate == BASE_BIN_GATE
        assert predict(h, 0.0, CV, grid).amp_gate == BASE_AMP_GATE
        g = predict(h, 0.12, CV, grid)
        expected = BASE_BIN_GATE + 0.5 * 5.4 * 0.12 ** 2 / grid.range_bin \
            + 5.4 * 0.12 / grid.velocity_bin
        assert g.bin_gate == pytest.approx(expected)
        assert g.amp_gate > BASE_AMP_GATE
        assert predict(h, 0.12, CA, grid).bin_gate == BASE_BIN_GATE
        assert predict(h, 0.12, NO_SLACK, grid).bin_gate == BASE_BIN_GATE

    def test_infeasible(self, grid):
        with pytest.raises(PredictionInfeasibleError):
            predict(Hypothesis("B", TargetState(1.0, 20), 1.0), 0.06, CV, grid)

    def test_negative_time(self, grid):
        with pytest.raises(ValueError):
            predict(Hypothesis("A", TargetState(1.0, 1.0), 1.0), -0.01, CV, grid)


class TestScore:
    @pytest.fixture
    def pred(self, grid):
        img = predict(Hypothesis("A", TargetState(40, 5), 40), 0.03, CV, grid)
        return replace(img, peak_bins=(79.1, 135.1), amplitude_db=0.0)

    def test_perfect_match(self, pred):
        assert score((79.1, 135.1), 0.0, pred) == 0.0

    def test_published_bins(self, pred):
        assert score((81, 134), 0.0, pred) == pytest.approx(4.82)

    def test_amplitude_only(self, pred):
        assert score((79.1, 135.1), 1.0, pred) == pytest.approx(1.0)
        assert score((79.1, 135.1), 1.0, pred, amp_weight=3.0) == pytest.approx(3.0)

    def test_order_insensitive(self, pred):
        assert score((134, 81), 0.0, pred) == score((81, 134), 0.0, pred)

    def test_merged_peak(self, pred):
        assert score((100.0,), 0.0, pred) == pytest.approx(20.9 ** 2 + 35.1 ** 2)

    def test_gated_dead_zone(self, pred):
        g = replace(pred, bin_gate=2.0, amp_gate=0.5)
        assert score((81, 134), 0.4, g, gated=True) == 0.0
        assert score((82.1, 135.1), 1.5, g, gated=True) == pytest.approx(1.0 + 1.0)

    def test_needs_peaks(self, pred):
        with pytest.raises(ValueError):
            score((), 0.0, pred)


class TestInfeasibleFilter:
    def test_steady_object(self, grid):
        pair = infeasible_filter(decode_pair(107.52, 0.0, grid, merged=True))
        assert pair.valid_a and not pair.valid_b
        assert pair.resolved.range == pytest.approx(40.0, abs=0.01)
        assert pair.resolved.velocity == 0

    def test_both_feasible(self, grid):
        pair = pair_from_peaks(81, 134, grid)
        assert infeasible_filter(pair) == pair

    def test_both_infeasible(self, grid):
        with pytest.raises(NoValidEstimateError):
            infeasible_filter(decode_pair(0.0, 0.0, grid))


class TestResolve:
    def test_needs_two_frames(self, grid):
        with pytest.raises(ValueError):
            resolve([Measurement(0.0, peaks(81, 134))], pair_from_peaks(81, 134, grid), grid)

    def test_time_order(self, grid):
        track = [Measurement(0.03, peaks(81, 134)), Measurement(0.0, peaks(81, 134))]
        with pytest.raises(ValueError):
            resolve(track, pair_from_peaks(81, 134, grid), grid)

    def test_steady_object_one_frame(self, grid):
        run = run_track(TruthTarget(TargetState(40, 0)), grid)
        assert run.verdict.chosen == "A"
        assert run.verdict.frames_used == 1 and run.verdict.via_feasibility

    @pytest.mark.parametrize("r,v,a,kind", [
        (40, 5, 0.0, "constant_velocity"),
        (10, 20, 0.0, "constant_velocity"),
        (40, 5, 5.4, CONSTANT_ACCELERATION),
        (10, 20, 5.4, CONSTANT_ACCELERATION),
    ])
    def test_fig6_scenarios(self, grid, r, v, a, kind):
        truth = TruthTarget(TargetState(r, v, a), MotionModel(kind))
        run = run_track(truth, grid, tracker_model=CV)
        assert run.verdict.chosen == truth_label(truth.state, grid)
        assert run.verdict.frames_used <= 4
        assert len(run.verdict.per_frame) == 2 * run.verdict.frames_used

    def test_true_hypothesis_cost_small(self, grid):
        run = run_track(TruthTarget(TargetState(40, 5)), grid, tracker_model=CV)
        v = run.verdict
        assert v.scores["A"] <= 2 * v.frames_used
        assert v.scores["B"] >= 2 * max(v.scores["A"], 1.0)

    def test_empty_frames_unresolved(self, grid):
        track = [Measurement(0.0, peaks(81, 134)), Measurement(0.03, PeakSet())]
        verdict = resolve(track, pair_from_peaks(81, 134, grid), grid)
        assert verdict.chosen == UNRESOLVED and verdict.frames_used == 0

    def test_margin_not_met(self, grid):
        track = [Measurement(0.0, peaks(81, 134)), Measurement(0.06, peaks(70, 140))]
        pair = pair_from_peaks(81, 134, grid)
        loose = resolve(track, pair, grid, NO_SLACK)
        assert loose.chosen != UNRESOLVED
        strict = resolve(track, pair, grid, NO_SLACK, min_margin=1e9)
        assert strict.chosen == UNRESOLVED

    def test_max_frames(self, grid):
        run = run_track(TruthTarget(TargetState(40, 5)), grid, tracker_model=CV, max_frames=2)
        assert run.verdict.frames_used == 2

    def test_infeasible_hypothesis_scores_inf(self, grid):
        # B reading of these peaks closes in at ~21 m/s from ~0.5 m
        pair = decode_pair(120.0, 1.5, grid)
        assert pair.estimate_b.range < 1.0
        track = [Measurement(0.0, peaks(118.5, 121.5)), Measurement(0.03, peaks(118.5, 121.5))]
        verdict = resolve(track, pair, grid)
        assert math.isinf(verdict.scores["B"]) and verdict.chosen == "A"
        assert verdict.as_dict()["scores"]["B"] is None
