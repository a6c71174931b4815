"""DFT/IDFT primitives, the staged 2D periodogram and multiplication accounting.

Conventions: the forward DFT is sum_n x(n) exp(-j 2 pi n q / N) with no
scaling; the inverse carries the 1/N factor. ``direct`` paths evaluate the
O(N^2) sums and are the reference; ``fast`` paths go through numpy.fft.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, UnsupportedSizeError

DIRECT = "direct"
FAST = "fast"

PIPELINES = ("2d_direct", "diagonal_direct", "2d_fast", "diagonal_fast")


@lru_cache(maxsize=16)
def _dft_matrix(n: int) -> np.ndarray:
    # reduce n*q mod N before scaling so large products keep full precision
    idx = np.outer(np.arange(n), np.arange(n)) % n
    w = np.exp(-2j * np.pi * idx / n)
    w.setflags(write=False)
    return w


def _as_vector(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.ndim != 1:
        raise DomainError("expected a 1-D sequence")
    if x.size == 0:
        raise DomainError("transform of an empty sequence")
    return x


def dft(x, algorithm: str = DIRECT) -> np.ndarray:
    x = _as_vector(x)
    if algorithm == FAST:
        return np.fft.fft(x)
    if algorithm != DIRECT:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return _dft_matrix(x.size) @ x


def idft(x, algorithm: str = DIRECT) -> np.ndarray:
    x = _as_vector(x)
    if algorithm == FAST:
        return np.fft.ifft(x)
    if algorithm != DIRECT:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    return np.conj(_dft_matrix(x.size)) @ x / x.size


def periodogram_2d(D, algorithm: str = DIRECT, stats: dict | None = None) -> np.ndarray:
    """Range-Doppler periodogram of an N_f x N_t matrix.

    Row-by-row DFTs of length N_t run first; the column-by-column IDFTs of
    length N_f need the whole intermediate matrix. Its size in bytes is
    written to ``stats["intermediate_bytes"]`` when a dict is passed.
    Result index [p, q] is delay bin p, Doppler bin q.
    """
    D = np.asarray(D, dtype=complex)
    if D.ndim != 2 or D.size == 0:
        raise DomainError("periodogram_2d needs a non-empty 2-D matrix")
    n_f, n_t = D.shape
    if algorithm == FAST:
        rows = np.fft.fft(D, axis=1)
        image = np.fft.ifft(rows, axis=0)
    elif algorithm == DIRECT:
        rows = D @ _dft_matrix(n_t)
        image = np.conj(_dft_matrix(n_f)) @ rows / n_f
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if stats is not None:
        stats["intermediate_bytes"] = rows.nbytes
    return np.abs(image) ** 2


@dataclass(frozen=True)
class OpCounter:
    complex_multiplications: int
    transform_invocations: int
    algorithm: str


def _is_pow2(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def count_ops(pipeline: str, n: int) -> OpCounter:
    """Closed-form complex-multiplication count for one range-velocity estimate.

    The 2D pipelines run n row DFTs plus n column IDFTs; the diagonal one a
    single length-n DFT. Fast counts assume radix-2, (n/2) log2 n each.
    """
    if pipeline not in PIPELINES:
        raise ValueError(f"unknown pipeline {pipeline!r}")
    if n < 1:
        raise DomainError("n must be >= 1")
    invocations = 2 * n if pipeline.startswith("2d") else 1
    if pipeline.endswith("direct"):
        return OpCounter(invocations * n * n, invocations, DIRECT)
    if not _is_pow2(n):
        raise UnsupportedSizeError(f"radix-2 count needs a power-of-two size, got {n}")
    per = (n // 2) * int(math.log2(n))
    return OpCounter(invocations * per, invocations, FAST)


# --- instrumented reference transforms (small sizes, pure Python) -----------

class _Tally:
    def __init__(self):
        self.mults = 0
        self.calls = 0


def _dft_counted(x, tally: _Tally, inverse=False):
    n = len(x)
    sign = 1 if inverse else -1
    tally.calls += 1
    out = []
    for q in range(n):
        acc = 0j
        for k in range(n):
            acc += x[k] * cmath.exp(sign * 2j * math.pi * ((k * q) % n) / n)
            tally.mults += 1
        out.append(acc / n if inverse else acc)
    return out


def _fft_counted(x, tally: _Tally, inverse=False, _top=True):
    # recursive radix-2 decimation in time; one twiddle product per butterfly
    n = len(x)
    if _top:
        tally.calls += 1
    if n == 1:
        return list(x)
    even = _fft_counted(x[0::2], tally, inverse, False)
    odd = _fft_counted(x[1::2], tally, inverse, False)
    sign = 1 if inverse else -1
    out = [0j] * n
    for k in range(n // 2):
        t = cmath.exp(sign * 2j * math.pi * k / n) * odd[k]
        tally.mults += 1
        out[k] = even[k] + t
        out[k + n // 2] = even[k] - t
    if inverse and _top:
        out = [v / n for v in out]
    return out


def count_ops_instrumented(pipeline: str, n: int, seed: int = 0) -> OpCounter:
    """Run ``pipeline`` on random data with per-multiplication counting.

    Debug cross-check of :func:`count_ops`; limited to n <= 64.
    """
    if n > 64:
        raise UnsupportedSizeError("instrumented counting is limited to n <= 64")
    fast = pipeline.endswith("fast")
    if fast and not _is_pow2(n):
        raise UnsupportedSizeError(f"radix-2 needs a power-of-two size, got {n}")
    transform = _fft_counted if fast else _dft_counted
    rng = np.random.default_rng(seed)
    tally = _Tally()
    if pipeline.startswith("2d"):
        D = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))).tolist()
        rows = [transform(row, tally) for row in D]
        for q in range(n):
            transform([rows[m][q] for m in range(n)], tally, inverse=True)
    elif pipeline.startswith("diagonal"):
        transform((rng.standard_normal(n) + 1j * rng.standard_normal(n)).tolist(), tally)
    else:
        raise ValueError(f"unknown pipeline {pipeline!r}")
    return OpCounter(tally.mults, tally.calls, FAST if fast else DIRECT)
