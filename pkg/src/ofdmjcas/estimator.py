"""Range-velocity estimation from normalized frames.

Two paths: the comb frame goes through the 2D periodogram and yields one
estimate; the diagonal frame goes through a single DFT whose two peaks
decode into a pair of mutually ambiguous estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import transforms
from .echo import NormalizedFrame
from .errors import DomainError, NoTargetError
from .grid import COMB, DIAGONAL
from .sysconfig import DerivedGrid

DEFAULT_REL_THRESHOLD = 0.25
_DB_FLOOR = 1e-300


@dataclass(frozen=True)
class PeakSet:
    """Detected spectral peaks, sorted by bin.

    ``positions`` holds the refined fractional bins (equal to ``bins`` when
    refinement is off) and ``levels_db`` the matching peak levels.
    """

    bins: tuple[int, ...] = ()
    magnitudes: tuple[float, ...] = ()
    positions: tuple[float, ...] = ()
    levels_db: tuple[float, ...] = ()
    refined: bool = False

    def __len__(self):
        return len(self.bins)

    @property
    def amplitude_db(self) -> float:
        """Mean peak level in dB; NaN for an empty set."""
        if not self.levels_db:
            return math.nan
        return float(np.mean(self.levels_db))


@dataclass(frozen=True)
class RangeVelocityEstimate:
    range: float
    velocity: float
    amplitude_db: float = 0.0

    def as_dict(self) -> dict:
        return {"range_m": self.range, "velocity_mps": self.velocity,
                "amplitude_db": self.amplitude_db}


@dataclass(frozen=True)
class CandidatePair:
    """The two readings of one diagonal spectrum.

    ``estimate_a`` maps the high spectral frequency to range and the low
    one to velocity; ``estimate_b`` swaps the roles. ``valid_a``/``valid_b``
    are cleared by the fusion stage's feasibility filter.
    """

    estimate_a: RangeVelocityEstimate
    estimate_b: RangeVelocityEstimate
    f_high: float
    f_low: float
    merged: bool = False
    peaks: PeakSet = PeakSet()
    valid_a: bool = True
    valid_b: bool = True

    @property
    def resolved(self) -> RangeVelocityEstimate | None:
        """The surviving estimate when exactly one member is valid."""
        if self.valid_a and not self.valid_b:
            return self.estimate_a
        if self.valid_b and not self.valid_a:
            return self.estimate_b
        return None

    def members(self):
        return (("A", self.estimate_a, self.valid_a), ("B", self.estimate_b, self.valid_b))


def _refine_position(mag: np.ndarray, i: int) -> float:
    # 3-point parabola through the dB levels around bin i (circular neighbours)
    n = len(mag)
    if n < 3:
        return float(i)
    ym, y0, yp = 20 * np.log10(np.maximum(mag[[(i - 1) % n, i, (i + 1) % n]], _DB_FLOOR))
    den = ym - 2 * y0 + yp
    if den >= 0:
        return float(i)
    offset = 0.5 * (ym - yp) / den
    return i + min(0.5, max(-0.5, offset))


def _corrected_level_db(mag: np.ndarray, i: int) -> float:
    """Peak level with the rectangular-window scalloping loss removed.

    For a tone a fraction d past bin i the stronger neighbour/peak magnitude
    ratio is d / (1 - d), and the peak bin sees sin(pi d) / (pi d) of the
    true amplitude.
    """
    n = len(mag)
    peak = mag[i]
    if n < 3 or peak <= 0:
        return 20 * math.log10(max(peak, _DB_FLOOR))
    nb = max(mag[(i - 1) % n], mag[(i + 1) % n])
    ratio = min(nb / peak, 1.0)
    d = ratio / (1 + ratio)
    gain = math.sin(math.pi * d) / (math.pi * d) if d > 0 else 1.0
    return 20 * math.log10(peak / gain)


def detect_peaks(spectrum, search_range: tuple[int, int] | None = None, max_peaks: int = 2,
                 rel_threshold: float = DEFAULT_REL_THRESHOLD, refine: bool = True) -> PeakSet:
    """Local maxima of ``|spectrum|`` inside the half-open ``search_range``.

    Only maxima reaching ``rel_threshold`` times the largest magnitude in the
    search range are kept; the ``max_peaks`` strongest survive, equal
    magnitudes going to the lower bin. Neighbours wrap around circularly.
    """
    mag = np.abs(np.asarray(spectrum))
    n = mag.size
    if n == 0:
        raise DomainError("empty spectrum")
    if not 0 < rel_threshold <= 1:
        raise DomainError("rel_threshold must lie in (0, 1]")
    lo, hi = search_range if search_range is not None else (0, n)
    lo, hi = max(lo, 0), min(hi, n)
    if hi <= lo:
        return PeakSet()
    window = mag[lo:hi]
    top = window.max()
    if top <= 0:
        return PeakSet()

    idx = np.arange(lo, hi)
    left = mag[(idx - 1) % n]
    right = mag[(idx + 1) % n]
    # strict on the left, non-strict on the right: a flat top reports its first bin
    is_max = (window > left) & (window >= right) & (window >= rel_threshold * top)
    if n == 1:
        is_max = window > 0
    cands = idx[is_max]
    order = sorted(cands, key=lambda b: (-mag[b], b))[:max_peaks]
    chosen = sorted(int(b) for b in order)

    if refine:
        positions = tuple(_refine_position(mag, b) for b in chosen)
        levels = tuple(_corrected_level_db(mag, b) for b in chosen)
    else:
        positions = tuple(float(b) for b in chosen)
        levels = tuple(20 * math.log10(mag[b]) for b in chosen)
    return PeakSet(
        bins=tuple(chosen),
        magnitudes=tuple(float(mag[b]) for b in chosen),
        positions=positions,
        levels_db=levels,
        refined=refine,
    )


def estimate_2d(frame: NormalizedFrame, grid: DerivedGrid,
                algorithm: str = transforms.DIRECT) -> RangeVelocityEstimate:
    """Global periodogram maximum converted with the sensing-spacing bin sizes."""
    if frame.kind != COMB:
        raise ValueError("estimate_2d needs a comb frame")
    image = transforms.periodogram_2d(frame.samples, algorithm=algorithm)
    peak = image.max()
    if not peak > 0:
        raise NoTargetError("periodogram is identically zero")
    p, q = np.unravel_index(int(np.argmax(image)), image.shape)
    return RangeVelocityEstimate(
        range=int(p) * grid.range_bin,
        velocity=int(q) * grid.velocity_bin,
        amplitude_db=10 * math.log10(peak),
    )


def decode_pair(f_high: float, f_low: float, grid: DerivedGrid, *, merged: bool = False,
                peaks: PeakSet = PeakSet(), amplitude_db: float = 0.0) -> CandidatePair:
    """Map (f_high, f_low) to both range/velocity assignments."""
    a = RangeVelocityEstimate(f_high * grid.range_bin, f_low * grid.velocity_bin, amplitude_db)
    b = RangeVelocityEstimate(f_low * grid.range_bin, f_high * grid.velocity_bin, amplitude_db)
    return CandidatePair(a, b, f_high=f_high, f_low=f_low, merged=merged, peaks=peaks)


def pair_from_peaks(l1: float, l2: float, grid: DerivedGrid, **kwargs) -> CandidatePair:
    lo, hi = sorted((l1, l2))
    return decode_pair((lo + hi) / 2, (hi - lo) / 2, grid, **kwargs)


def swap_pair(pair: CandidatePair) -> CandidatePair:
    """Exchange the roles of the two spectral frequencies."""
    return replace(pair, estimate_a=pair.estimate_b, estimate_b=pair.estimate_a,
                   valid_a=pair.valid_b, valid_b=pair.valid_a)


def diagonal_spectrum(frame: NormalizedFrame, algorithm: str = transforms.DIRECT) -> np.ndarray:
    if frame.kind != DIAGONAL:
        raise ValueError("expected a diagonal frame")
    return transforms.dft(frame.samples, algorithm=algorithm)


def measure_diagonal(frame: NormalizedFrame, *, refine: bool = True,
                     rel_threshold: float = DEFAULT_REL_THRESHOLD, max_peaks: int = 2,
                     algorithm: str = transforms.DIRECT) -> PeakSet:
    """Peaks of a diagonal frame's DFT in bins [0, N/2]; mirrors are ignored."""
    spec = diagonal_spectrum(frame, algorithm)
    return detect_peaks(spec, (0, spec.size // 2 + 1), max_peaks=max_peaks,
                        rel_threshold=rel_threshold, refine=refine)


def estimate_diagonal(frame: NormalizedFrame, grid: DerivedGrid, *, refine: bool = True,
                      rel_threshold: float = DEFAULT_REL_THRESHOLD,
                      algorithm: str = transforms.DIRECT) -> CandidatePair:
    peaks = measure_diagonal(frame, refine=refine, rel_threshold=rel_threshold,
                             algorithm=algorithm)
    if len(peaks) == 0:
        raise NoTargetError("no spectral peak above threshold")
    if len(peaks) == 1:
        return decode_pair(peaks.positions[0], 0.0, grid, merged=True, peaks=peaks,
                           amplitude_db=peaks.amplitude_db)
    return pair_from_peaks(*peaks.positions, grid, peaks=peaks,
                           amplitude_db=peaks.amplitude_db)


def spectrum_export(frame: NormalizedFrame, algorithm: str = transforms.DIRECT) -> list[dict]:
    """Radar-image rows normalized so the strongest bin is 1.0 (0 dB)."""
    if frame.samples.size == 0:
        return []
    if frame.kind == DIAGONAL:
        mag = np.abs(diagonal_spectrum(frame, algorithm))
    else:
        mag = np.sqrt(transforms.periodogram_2d(frame.samples, algorithm=algorithm))
    top = mag.max()
    if not top > 0:
        return []
    norm = mag / top
    with np.errstate(divide="ignore"):
        db = 20 * np.log10(norm)
    if frame.kind == DIAGONAL:
        return [{"bin": i, "magnitude": float(norm[i]), "magnitude_db": float(db[i])}
                for i in range(norm.size)]
    return [{"p": int(p), "q": int(q), "magnitude": float(norm[p, q]),
             "magnitude_db": float(db[p, q])}
            for p in range(norm.shape[0]) for q in range(norm.shape[1])]
