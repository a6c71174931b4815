"""Multi-frame resolution of the diagonal range-velocity ambiguity.

Both members of a candidate pair are extrapolated to later frame times
and the predicted radar images (peak bins and relative peak level) are
compared with what is actually measured. The member whose predictions keep
matching is kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

from .echo import CONSTANT_VELOCITY, MotionModel, TargetState, propagate, relative_amplitude_db
from .errors import NoValidEstimateError, PredictionInfeasibleError, TargetPassedAntennaError
from .estimator import CandidatePair, PeakSet
from .sysconfig import DerivedGrid

UNRESOLVED = "unresolved"

DEFAULT_MIN_FEASIBLE_RANGE = 0.5
DEFAULT_MIN_MARGIN = 2.0
DEFAULT_MAX_FRAMES = 4
DEFAULT_AMP_WEIGHT = 1.0
# residual gates covering leakage/refinement error before any kinematic widening
BASE_BIN_GATE = 1.0
BASE_AMP_GATE = 0.5


@dataclass(frozen=True)
class Hypothesis:
    label: str
    state: TargetState
    reference_range: float


@dataclass(frozen=True)
class PredictedImage:
    time: float
    peak_bins: tuple[float, float]
    amplitude_db: float
    bin_gate: float
    amp_gate: float
    state: TargetState | None = None


@dataclass(frozen=True)
class Measurement:
    """Peaks observed in one diagonal frame at ``time``."""

    time: float
    peaks: PeakSet
    amplitude_db: float | None = None

    @property
    def level_db(self) -> float:
        return self.peaks.amplitude_db if self.amplitude_db is None else self.amplitude_db


@dataclass(frozen=True)
class FrameScore:
    frame: int
    time: float
    label: str
    predicted_low: float
    predicted_high: float
    predicted_amp_db: float
    measured_low: float
    measured_high: float
    measured_amp_db: float
    cost: float


@dataclass(frozen=True)
class TrackVerdict:
    chosen: str
    scores: dict
    frames_used: int
    per_frame: tuple[FrameScore, ...] = field(default=(), repr=False)
    via_feasibility: bool = False

    def as_dict(self) -> dict:
        return {
            "chosen": self.chosen,
            "scores": {k: (None if math.isinf(v) else v) for k, v in self.scores.items()},
            "frames_used": self.frames_used,
            "via_feasibility": self.via_feasibility,
        }


def hypotheses_from_pair(pair: CandidatePair) -> list[Hypothesis]:
    """One hypothesis per valid member with a positive range."""
    out = []
    for label, est, valid in pair.members():
        if valid and est.range > 0:
            out.append(Hypothesis(label, TargetState(est.range, est.velocity), est.range))
    return out


def _gates(t: float, model: MotionModel, grid: DerivedGrid, state: TargetState):
    bin_gate, amp_gate = BASE_BIN_GATE, BASE_AMP_GATE
    if model.kind == CONSTANT_VELOCITY and model.a_max > 0:
        dr = 0.5 * model.a_max * t * t
        dv = model.a_max * t
        bin_gate += dr / grid.range_bin + dv / grid.velocity_bin
        if state.range > dr:
            amp_gate += 40 * math.log10(state.range / (state.range - dr))
    return bin_gate, amp_gate


def predict(h: Hypothesis, t: float, model: MotionModel, grid: DerivedGrid) -> PredictedImage:
    """Radar image ``h`` implies at ``t`` seconds after its origin frame."""
    if t < 0:
        raise ValueError("prediction time must be non-negative")
    try:
        state = propagate(h.state, t, model)
    except TargetPassedAntennaError as exc:
        raise PredictionInfeasibleError(f"hypothesis {h.label}: {exc}") from exc
    b_r = state.range / grid.range_bin
    b_v = state.velocity / grid.velocity_bin
    bin_gate, amp_gate = _gates(t, model, grid, state)
    return PredictedImage(
        time=t,
        peak_bins=(abs(b_r - b_v), b_r + b_v),
        amplitude_db=relative_amplitude_db(state.range, h.reference_range),
        bin_gate=bin_gate,
        amp_gate=amp_gate,
        state=state,
    )


def score(measured_bins: Sequence[float], measured_amp_db: float, predicted: PredictedImage,
          amp_weight: float = DEFAULT_AMP_WEIGHT, gated: bool = False) -> float:
    """Squared bin and amplitude mismatch between a measurement and a prediction.

    A single merged measured peak is compared against both predicted bins.
    With ``gated`` the residuals inside the prediction's gates count as zero.
    """
    if len(measured_bins) == 2:
        m_low, m_high = sorted(measured_bins)
    elif len(measured_bins) == 1:
        m_low = m_high = measured_bins[0]
    else:
        raise ValueError("measurement needs one or two peaks")
    p_low, p_high = predicted.peak_bins
    d_low, d_high = m_low - p_low, m_high - p_high
    d_amp = measured_amp_db - predicted.amplitude_db
    if gated:
        d_low = max(0.0, abs(d_low) - predicted.bin_gate)
        d_high = max(0.0, abs(d_high) - predicted.bin_gate)
        d_amp = max(0.0, abs(d_amp) - predicted.amp_gate)
    return d_low ** 2 + d_high ** 2 + amp_weight * d_amp ** 2


def infeasible_filter(pair: CandidatePair,
                      min_feasible_range: float = DEFAULT_MIN_FEASIBLE_RANGE) -> CandidatePair:
    """Invalidate members closer to the antenna than ``min_feasible_range``."""
    valid_a = pair.valid_a and pair.estimate_a.range >= min_feasible_range
    valid_b = pair.valid_b and pair.estimate_b.range >= min_feasible_range
    if not (valid_a or valid_b):
        raise NoValidEstimateError("both candidate estimates are kinematically infeasible")
    return replace(pair, valid_a=valid_a, valid_b=valid_b)


def resolve(track: Sequence[Measurement], pair: CandidatePair, grid: DerivedGrid,
            model: MotionModel = MotionModel(), *, max_frames: int = DEFAULT_MAX_FRAMES,
            min_margin: float = DEFAULT_MIN_MARGIN, amp_weight: float = DEFAULT_AMP_WEIGHT,
            min_feasible_range: float = DEFAULT_MIN_FEASIBLE_RANGE) -> TrackVerdict:
    """Pick the member of ``pair`` that the later frames of ``track`` support.

    ``track[0]`` is the frame ``pair`` was decoded from; times are taken
    relative to it and must increase strictly.
    """
    if len(track) < 2:
        raise ValueError("resolve needs the origin frame plus at least one later frame")
    times = [m.time for m in track]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ValueError("track frames must be in strictly increasing time order")

    pair = infeasible_filter(pair, min_feasible_range)
    if pair.resolved is not None:
        label = "A" if pair.valid_a else "B"
        return TrackVerdict(label, {"A": 0.0 if pair.valid_a else math.inf,
                                    "B": 0.0 if pair.valid_b else math.inf},
                            frames_used=1, via_feasibility=True)

    hyps = hypotheses_from_pair(pair)
    t0 = track[0].time
    ref_level = track[0].level_db
    totals = {h.label: 0.0 for h in hyps}
    rows = []
    used = 0
    for i, meas in enumerate(track[1:max_frames + 1], start=1):
        if len(meas.peaks) == 0 or math.isnan(meas.level_db):
            continue
        used += 1
        bins = meas.peaks.positions
        lo, hi = min(bins), max(bins)
        rel_amp = meas.level_db - ref_level
        for h in hyps:
            try:
                pred = predict(h, meas.time - t0, model, grid)
            except PredictionInfeasibleError:
                totals[h.label] = math.inf
                rows.append(FrameScore(i, meas.time, h.label, math.nan, math.nan, math.nan,
                                       lo, hi, rel_amp, math.inf))
                continue
            cost = score(bins, rel_amp, pred, amp_weight, gated=True)
            totals[h.label] += cost
            rows.append(FrameScore(i, meas.time, h.label, *pred.peak_bins, pred.amplitude_db,
                                   lo, hi, rel_amp, cost))

    chosen = UNRESOLVED
    if used:
        ranked = sorted(totals.items(), key=lambda kv: kv[1])
        (best, c_best), (_, c_other) = ranked[0], ranked[1]
        if math.isfinite(c_best) and c_other > c_best and c_other >= min_margin * c_best:
            chosen = best
    return TrackVerdict(chosen, totals, used, tuple(rows))
