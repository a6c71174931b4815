"""Point-target kinematics and normalized (user-data-free) echo synthesis.

The frames produced here are what a receiver holds after dividing received
modulation symbols by the transmitted ones: one complex value per sensing
cell, carrying only the target-induced phase rotation and amplitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import DomainError, TargetPassedAntennaError
from .grid import COMB, DIAGONAL, SensingAllocation
from .sysconfig import DerivedGrid

CONSTANT_VELOCITY = "constant_velocity"
CONSTANT_ACCELERATION = "constant_acceleration"

# Synthesis models for diagonal frames. "cosine" yields the dual-peak
# spectrum; "exponential" is the literal product of complex exponentials,
# kept as a diagnostic that collapses to a single peak.
COSINE = "cosine"
EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class TargetState:
    """Kinematic state of a point target.

    ``velocity`` is radial and positive when approaching, so range shrinks
    over time. ``acceleration`` adds to the closing speed.
    """

    range: float
    velocity: float
    acceleration: float = 0.0
    rcs: float = 1.0

    def __post_init__(self):
        if not self.range > 0:
            raise DomainError(f"target range must be positive, got {self.range}")


@dataclass(frozen=True)
class MotionModel:
    kind: str = CONSTANT_VELOCITY
    a_max: float = 5.4

    def __post_init__(self):
        if self.kind not in (CONSTANT_VELOCITY, CONSTANT_ACCELERATION):
            raise ValueError(f"unknown motion model {self.kind!r}")
        if self.a_max < 0:
            raise ValueError("a_max must be non-negative")


@dataclass(frozen=True)
class RadarLinkParams:
    tx_power: float = 1.0
    tx_gain: float = 1.0
    rx_gain: float = 1.0
    carrier_frequency: float = 28e9
    speed_of_light: float = 3.0e8

    def __post_init__(self):
        for name in ("tx_power", "tx_gain", "rx_gain", "carrier_frequency", "speed_of_light"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")

    @property
    def wavelength(self) -> float:
        return self.speed_of_light / self.carrier_frequency


@dataclass(frozen=True)
class NoiseSpec:
    """Complex white Gaussian noise, SNR per sample relative to unit amplitude."""

    enabled: bool = False
    snr_db: float = 30.0
    seed: int = 0

    def generator(self, frame_index: int = 0) -> np.random.Generator:
        return np.random.default_rng([self.seed, frame_index])

    def sample(self, shape, frame_index: int = 0) -> np.ndarray:
        if not self.enabled:
            return np.zeros(shape, dtype=complex)
        rng = self.generator(frame_index)
        sigma = math.sqrt(10 ** (-self.snr_db / 10) / 2)
        return sigma * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


@dataclass(frozen=True, eq=False)
class NormalizedFrame:
    """Normalized modulation-symbol observations of one sensing block.

    ``samples`` is a length-N vector d(k) for diagonal frames and an
    N_f x N_t matrix D(m, n) for comb frames.
    """

    kind: str
    samples: np.ndarray
    grid: DerivedGrid
    timestamp: float = 0.0

    def rows(self):
        if self.kind == DIAGONAL:
            for k, z in enumerate(self.samples):
                yield {"k": k, "real": float(z.real), "imag": float(z.imag)}
        else:
            n_f, n_t = self.samples.shape
            for m in range(n_f):
                for n in range(n_t):
                    z = self.samples[m, n]
                    yield {"m": m, "n": n, "real": float(z.real), "imag": float(z.imag)}


def propagate(state: TargetState, dt: float, model: MotionModel) -> TargetState:
    if dt < 0:
        raise DomainError("dt must be non-negative")
    if model.kind == CONSTANT_VELOCITY:
        new_range = state.range - state.velocity * dt
        new_velocity = state.velocity
    else:
        a = state.acceleration
        new_range = state.range - (state.velocity * dt + 0.5 * a * dt * dt)
        new_velocity = state.velocity + a * dt
    if new_range <= 0:
        raise TargetPassedAntennaError(
            f"range {new_range:.6g} m after {dt:g} s: target has passed the antenna")
    return replace(state, range=new_range, velocity=new_velocity)


def relative_amplitude_db(range_m: float, reference_range: float) -> float:
    """Peak amplitude change in dB relative to ``reference_range`` (R^-4 power law)."""
    if range_m <= 0 or reference_range <= 0:
        raise DomainError("ranges must be positive")
    return 40.0 * math.log10(reference_range / range_m)


def received_power(link: RadarLinkParams, state: TargetState) -> float:
    """Received echo power, P_Tx G_Tx G_Rx sigma lambda^2 / ((4 pi)^3 R^4 fc^2).

    Evaluated exactly in this form, including both lambda^2 and fc^-2.
    """
    if state.range <= 0:
        raise DomainError("range must be positive")
    lam = link.wavelength
    num = link.tx_power * link.tx_gain * link.rx_gain * state.rcs * lam ** 2
    return num / ((4 * math.pi) ** 3 * state.range ** 4 * link.carrier_frequency ** 2)


def range_phase_step(range_m: float, grid: DerivedGrid) -> float:
    """Phase advance per sensing-subcarrier step, 4 pi C_f R / c."""
    return 4 * math.pi * grid.comb_freq_spacing * range_m / grid.c


def doppler_phase_step(velocity: float, grid: DerivedGrid) -> float:
    """Phase advance per sensing-symbol step, 4 pi C_t fc v / c."""
    return 4 * math.pi * grid.comb_time_spacing * grid.carrier_frequency * velocity / grid.c


def target_amplitudes(targets: Sequence[TargetState], link: RadarLinkParams | None = None,
                      reference_power: float | None = None) -> np.ndarray:
    """Linear echo amplitudes, normalized so ``reference_power`` maps to 1.

    Without a reference the strongest of ``targets`` gets amplitude 1.
    """
    if not targets:
        return np.zeros(0)
    link = link or RadarLinkParams()
    powers = np.array([received_power(link, t) for t in targets])
    ref = reference_power if reference_power is not None else powers.max()
    if ref <= 0:
        return np.zeros(len(targets))
    return np.sqrt(powers / ref)


def synth_diagonal(targets: Sequence[TargetState], grid: DerivedGrid, alloc: SensingAllocation,
                   noise: NoiseSpec | None = None, *, link: RadarLinkParams | None = None,
                   reference_power: float | None = None, timestamp: float = 0.0,
                   frame_index: int = 0, model: str = COSINE) -> NormalizedFrame:
    if alloc.kind != DIAGONAL:
        raise ValueError("synth_diagonal needs a diagonal allocation")
    k = alloc.diag_order.astype(float)
    alphas = target_amplitudes(targets, link, reference_power)
    d = np.zeros(len(k), dtype=complex)
    for alpha, t in zip(alphas, targets):
        th_r = range_phase_step(t.range, grid)
        th_v = doppler_phase_step(t.velocity, grid)
        if model == COSINE:
            d += alpha * np.cos(th_r * k) * np.cos(th_v * k)
        elif model == EXPONENTIAL:
            d += alpha * np.exp(-1j * th_r * k) * np.exp(1j * th_v * k)
        else:
            raise ValueError(f"unknown synthesis model {model!r}")
    d += (noise or NoiseSpec()).sample(d.shape, frame_index)
    return NormalizedFrame(DIAGONAL, d, grid, timestamp)


def synth_comb(targets: Sequence[TargetState], grid: DerivedGrid, alloc: SensingAllocation,
               noise: NoiseSpec | None = None, *, link: RadarLinkParams | None = None,
               reference_power: float | None = None, timestamp: float = 0.0,
               frame_index: int = 0) -> NormalizedFrame:
    if alloc.kind != COMB:
        raise ValueError("synth_comb needs a comb allocation")
    n_f = int(alloc.freq_order.max()) + 1
    n_t = int(alloc.time_order.max()) + 1
    m = np.arange(n_f)
    n = np.arange(n_t)
    alphas = target_amplitudes(targets, link, reference_power)
    D = np.zeros((n_f, n_t), dtype=complex)
    for alpha, t in zip(alphas, targets):
        y_r = np.exp(-1j * range_phase_step(t.range, grid) * m)
        y_d = np.exp(1j * doppler_phase_step(t.velocity, grid) * n)
        D += alpha * np.outer(y_r, y_d)
    D += (noise or NoiseSpec()).sample(D.shape, frame_index)
    return NormalizedFrame(COMB, D, grid, timestamp)
