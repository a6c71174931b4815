"""Scenario runs: evolve ground truth, synthesize frames, estimate, fuse."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .echo import (MotionModel, NoiseSpec, NormalizedFrame, RadarLinkParams, TargetState,
                   propagate, received_power, synth_comb, synth_diagonal)
from .estimator import CandidatePair, estimate_diagonal, measure_diagonal
from .fusion import Measurement, TrackVerdict, resolve
from .grid import COMB, DEFAULT_SYMBOL_OFFSET, DIAGONAL, comb_allocation, diagonal_allocation
from .sysconfig import DerivedGrid

FRAME_PERIOD = 0.03
DEFAULT_FRAME_TIMES = tuple(round(i * FRAME_PERIOD, 10) for i in range(5))


@dataclass(frozen=True)
class TruthTarget:
    state: TargetState
    model: MotionModel = field(default_factory=MotionModel)


def truth_at(targets: Sequence[TruthTarget], t: float) -> list[TargetState]:
    return [propagate(tt.state, t, tt.model) for tt in targets]


def simulate_frames(targets: Sequence[TruthTarget], grid: DerivedGrid,
                    frame_times: Sequence[float] = DEFAULT_FRAME_TIMES, *,
                    kind: str = DIAGONAL, noise: NoiseSpec | None = None,
                    link: RadarLinkParams | None = None,
                    symbol_offset: int = DEFAULT_SYMBOL_OFFSET) -> list[NormalizedFrame]:
    """One frame per time; amplitudes are relative to the strongest target at the first time."""
    link = link or RadarLinkParams(carrier_frequency=grid.carrier_frequency,
                                   speed_of_light=grid.c)
    t_first = frame_times[0]
    ref_power = max(received_power(link, s) for s in truth_at(targets, t_first))
    if kind == DIAGONAL:
        alloc, synth = diagonal_allocation(grid, symbol_offset), synth_diagonal
    elif kind == COMB:
        alloc, synth = comb_allocation(grid, symbol_offset), synth_comb
    else:
        raise ValueError(f"unknown allocation kind {kind!r}")
    frames = []
    for i, t in enumerate(frame_times):
        states = truth_at(targets, t)
        frames.append(synth(states, grid, alloc, noise, link=link, reference_power=ref_power,
                            timestamp=t, frame_index=i))
    return frames


@dataclass
class TrackRun:
    frames: list[NormalizedFrame]
    measurements: list[Measurement]
    pair: CandidatePair
    verdict: TrackVerdict


def run_track(truth: TruthTarget, grid: DerivedGrid,
              frame_times: Sequence[float] = DEFAULT_FRAME_TIMES, *,
              tracker_model: MotionModel | None = None, noise: NoiseSpec | None = None,
              link: RadarLinkParams | None = None, refine: bool = True,
              **resolve_kwargs) -> TrackRun:
    """Simulate a single target, decode the first frame and resolve the pair."""
    frames = simulate_frames([truth], grid, frame_times, noise=noise, link=link)
    pair = estimate_diagonal(frames[0], grid, refine=refine)
    meas = [Measurement(f.timestamp, measure_diagonal(f, refine=refine)) for f in frames]
    model = tracker_model or MotionModel(a_max=truth.model.a_max)
    verdict = resolve(meas, pair, grid, model, **resolve_kwargs)
    return TrackRun(frames, meas, pair, verdict)


def truth_label(truth: TargetState, grid: DerivedGrid) -> str:
    """Pair member consistent with ``truth``: A when range owns the higher frequency."""
    return "A" if truth.range / grid.range_bin >= truth.velocity / grid.velocity_bin else "B"
