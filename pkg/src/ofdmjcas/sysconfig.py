"""OFDM numerology, derived grid quantities and sensing-performance formulas."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigurationError

SPEED_OF_LIGHT = 3.0e8


@dataclass(frozen=True)
class SensingKpis:
    """Targets a sensing configuration has to meet."""

    range_resolution_max: float
    velocity_resolution_max: float
    detection_range_min: float
    detection_velocity_min: float

    def __post_init__(self):
        for name in ("range_resolution_max", "velocity_resolution_max",
                     "detection_range_min", "detection_velocity_min"):
            if not getattr(self, name) > 0:
                raise ConfigurationError("must be strictly positive", field=name)


@dataclass(frozen=True)
class SystemParams:
    """OFDM numerology of one sensing block.

    ``comb_factor`` is the spacing, in subcarriers and in symbol positions,
    between neighbouring sensing signals. ``n_subcarriers`` may be given
    explicitly when the nominal ``bandwidth`` is not an exact multiple of
    the subcarrier spacing (400 MHz at 120 kHz carries 3360 subcarriers);
    otherwise it is bandwidth / subcarrier_spacing.
    """

    carrier_frequency: float
    bandwidth: float
    subcarrier_spacing: float
    slot_duration: float
    slots_per_block: int
    comb_factor: int
    symbols_per_slot: int = 14
    speed_of_light: float = SPEED_OF_LIGHT
    n_subcarriers: int | None = None

    @classmethod
    def table2(cls, **overrides) -> "SystemParams":
        """28 GHz / 400 MHz / 120 kHz numerology used throughout the examples."""
        values = dict(
            carrier_frequency=28e9,
            bandwidth=400e6,
            subcarrier_spacing=120e3,
            slot_duration=0.125e-3,
            slots_per_block=240,
            comb_factor=7,
            n_subcarriers=3360,
        )
        values.update(overrides)
        return cls(**values)

    @property
    def wavelength(self) -> float:
        return self.speed_of_light / self.carrier_frequency


@dataclass(frozen=True)
class DerivedGrid:
    params: SystemParams = field(repr=False)
    n_subcarriers: int
    symbol_duration: float
    n_symbols: int
    block_duration: float
    comb_freq_spacing: float
    comb_time_spacing: float
    n_sensing: int
    range_bin: float
    velocity_bin: float

    @property
    def c(self) -> float:
        return self.params.speed_of_light

    @property
    def carrier_frequency(self) -> float:
        return self.params.carrier_frequency

    @property
    def comb_factor(self) -> int:
        return self.params.comb_factor


@dataclass(frozen=True)
class KpiCheck:
    name: str
    target: float
    achieved: float
    passed: bool
    # "max" means achieved must not exceed target, "min" the opposite
    sense: str


@dataclass(frozen=True)
class KpiReport:
    checks: tuple[KpiCheck, ...]
    effective_max_velocity: float

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "all_passed": self.all_passed,
            "checks": [
                {"name": c.name, "target": c.target, "achieved": c.achieved,
                 "sense": c.sense, "pass": c.passed}
                for c in self.checks
            ],
            "advisory": {"max_velocity_effective": self.effective_max_velocity},
        }


def _integer_ratio(num: float, den: float, field_name: str) -> int:
    ratio = num / den
    n = round(ratio)
    if n < 1 or abs(ratio - n) > 1e-9 * max(1.0, abs(ratio)):
        raise ConfigurationError(
            f"{num:g} is not an integer multiple of {den:g}", field=field_name)
    return int(n)


def derive_grid(params: SystemParams) -> DerivedGrid:
    """Compute every secondary grid quantity from the numerology."""
    for name in ("carrier_frequency", "bandwidth", "subcarrier_spacing",
                 "slot_duration", "speed_of_light"):
        if not getattr(params, name) > 0:
            raise ConfigurationError("must be strictly positive", field=name)
    for name in ("slots_per_block", "symbols_per_slot", "comb_factor"):
        value = getattr(params, name)
        if int(value) != value or value < 1:
            raise ConfigurationError("must be an integer >= 1", field=name)

    if params.n_subcarriers is None:
        n_sc = _integer_ratio(params.bandwidth, params.subcarrier_spacing, "bandwidth")
    else:
        n_sc = params.n_subcarriers
        if int(n_sc) != n_sc or n_sc < 1:
            raise ConfigurationError("must be an integer >= 1", field="n_subcarriers")
        n_sc = int(n_sc)
    k = params.comb_factor
    if n_sc % k:
        raise ConfigurationError(
            f"{n_sc} subcarriers not divisible by comb factor {k}", field="comb_factor")
    n = n_sc // k

    c = params.speed_of_light
    t_sym = params.slot_duration / params.symbols_per_slot
    c_f = k * params.subcarrier_spacing
    c_t = k * t_sym
    return DerivedGrid(
        params=params,
        n_subcarriers=n_sc,
        symbol_duration=t_sym,
        n_symbols=params.slots_per_block * params.symbols_per_slot,
        block_duration=n * c_t,
        comb_freq_spacing=c_f,
        comb_time_spacing=c_t,
        n_sensing=n,
        range_bin=c / (2 * c_f * n),
        velocity_bin=c / (2 * params.carrier_frequency * c_t * n),
    )


def range_resolution(grid: DerivedGrid) -> float:
    """c / 2B. The comb spans the whole band, so the comb factor drops out."""
    return grid.c / (2 * grid.params.bandwidth)


def max_range(grid: DerivedGrid) -> float:
    p = grid.params
    return grid.c * grid.n_sensing / (2 * p.subcarrier_spacing * grid.n_subcarriers)


def velocity_resolution(grid: DerivedGrid) -> float:
    return grid.c / (2 * grid.carrier_frequency * grid.block_duration)


@dataclass(frozen=True)
class MaxVelocity:
    nominal: float
    effective: float


def max_velocity(grid: DerivedGrid) -> MaxVelocity:
    """Maximum unambiguous velocity in two readings.

    ``nominal`` is c*df*N / (2*fc*N_sym), which implicitly takes the symbol
    duration as 1/df (no cyclic prefix). ``effective`` is the alias limit of
    the actual sensing-symbol spacing, c / (2*fc*C_t).
    """
    p = grid.params
    nominal = grid.c * p.subcarrier_spacing * grid.n_sensing / (
        2 * p.carrier_frequency * grid.n_symbols)
    effective = grid.c / (2 * p.carrier_frequency * grid.comb_time_spacing)
    return MaxVelocity(nominal=nominal, effective=effective)


def check_kpis(grid: DerivedGrid, kpis: SensingKpis) -> KpiReport:
    vmax = max_velocity(grid)
    rows = [
        ("range_resolution", kpis.range_resolution_max, range_resolution(grid), "max"),
        ("velocity_resolution", kpis.velocity_resolution_max, velocity_resolution(grid), "max"),
        ("max_range", kpis.detection_range_min, max_range(grid), "min"),
        ("max_velocity", kpis.detection_velocity_min, vmax.nominal, "min"),
    ]
    checks = tuple(
        KpiCheck(name, target, achieved,
                 achieved <= target if sense == "max" else achieved >= target, sense)
        for name, target, achieved, sense in rows
    )
    return KpiReport(checks=checks, effective_max_velocity=vmax.effective)
