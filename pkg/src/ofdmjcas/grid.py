"""Comb and diagonal sensing-signal allocations on the resource grid."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConfigurationError
from .sysconfig import DerivedGrid

COMB = "comb"
DIAGONAL = "diagonal"

DEFAULT_SYMBOL_OFFSET = 2


@dataclass(frozen=True, eq=False)
class SensingAllocation:
    """Ordered set of (subcarrier, symbol) cells carrying sensing signals.

    For a comb, ``freq_order`` and ``time_order`` give the (m, n) index of
    every cell, ordered row-major in (m, n). For a diagonal, ``diag_order``
    holds k. Arrays are read-only.
    """

    kind: str
    subcarriers: np.ndarray
    symbols: np.ndarray
    freq_order: np.ndarray | None = None
    time_order: np.ndarray | None = None
    diag_order: np.ndarray | None = None

    def __post_init__(self):
        for arr in (self.subcarriers, self.symbols, self.freq_order,
                    self.time_order, self.diag_order):
            if arr is not None:
                arr.setflags(write=False)

    def __len__(self):
        return len(self.subcarriers)

    @property
    def cells(self) -> np.ndarray:
        """(L, 2) array of (subcarrier, symbol) pairs."""
        return np.column_stack([self.subcarriers, self.symbols])

    @property
    def n_freq(self) -> int:
        return len(np.unique(self.subcarriers))

    @property
    def n_time(self) -> int:
        return len(np.unique(self.symbols))

    def rows(self):
        """Yield plain-integer export rows; the leading columns depend on kind."""
        if self.kind == DIAGONAL:
            for k, sc, sym in zip(self.diag_order, self.subcarriers, self.symbols):
                yield {"k": int(k), "subcarrier": int(sc), "symbol": int(sym)}
        else:
            for m, n, sc, sym in zip(self.freq_order, self.time_order,
                                     self.subcarriers, self.symbols):
                yield {"m": int(m), "n": int(n), "subcarrier": int(sc), "symbol": int(sym)}


def comb_symbol_positions(grid: DerivedGrid, first_symbol: int = DEFAULT_SYMBOL_OFFSET) -> np.ndarray:
    """Global indices of the sensing symbols: two per slot, ``comb_factor`` apart."""
    p = grid.params
    k = p.comb_factor
    if p.symbols_per_slot != 2 * k:
        raise ConfigurationError(
            f"two sensing symbols spaced {k} apart need {2 * k} symbols per slot, "
            f"got {p.symbols_per_slot}", field="symbols_per_slot")
    if not 0 <= first_symbol < k:
        raise ConfigurationError(f"must lie in [0, {k})", field="symbol_offset")
    slot_starts = np.arange(p.slots_per_block) * p.symbols_per_slot
    per_slot = np.array([first_symbol, first_symbol + k])
    return (slot_starts[:, None] + per_slot[None, :]).ravel()


def comb_allocation(grid: DerivedGrid, first_symbol: int = DEFAULT_SYMBOL_OFFSET) -> SensingAllocation:
    symbols = comb_symbol_positions(grid, first_symbol)
    n_f = grid.n_sensing
    n_t = len(symbols)
    m, n = np.meshgrid(np.arange(n_f), np.arange(n_t), indexing="ij")
    m = m.ravel()
    n = n.ravel()
    return SensingAllocation(
        kind=COMB,
        subcarriers=m * grid.comb_factor,
        symbols=symbols[n],
        freq_order=m,
        time_order=n,
    )


def diagonal_allocation(grid: DerivedGrid, symbol_offset: int = DEFAULT_SYMBOL_OFFSET) -> SensingAllocation:
    k = np.arange(grid.n_sensing)
    step = grid.comb_factor
    symbols = k * step + symbol_offset
    if symbol_offset < 0 or symbols[-1] >= grid.n_symbols:
        raise ConfigurationError(
            f"diagonal runs past the last symbol ({grid.n_symbols - 1})",
            field="symbol_offset")
    return SensingAllocation(
        kind=DIAGONAL,
        subcarriers=k * step,
        symbols=symbols,
        diag_order=k,
    )


def overhead(alloc: SensingAllocation, grid: DerivedGrid) -> Fraction:
    """Share of resource elements spent on sensing, as an exact fraction."""
    return Fraction(len(alloc), grid.n_subcarriers * grid.n_symbols)
