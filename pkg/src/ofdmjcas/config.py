"""Scenario configuration files.

Plain INI-style text read with :mod:`configparser`::

    [system]
    carrier_frequency = 28e9
    bandwidth = 400e6
    subcarrier_spacing = 120e3
    n_subcarriers = 3360        ; optional, else bandwidth / subcarrier_spacing
    slot_duration = 0.125e-3
    slots_per_block = 240
    symbols_per_slot = 14       ; optional
    comb_factor = 7
    speed_of_light = 3e8        ; optional

    [kpis]                      ; optional section
    range_resolution_max = 0.4
    velocity_resolution_max = 0.2
    detection_range_min = 150
    detection_velocity_min = 90

    [scenario]                  ; optional section
    allocation = diagonal       ; or comb
    frame_times = 0, 0.03, 0.06, 0.09, 0.12
    symbol_offset = 2

    [target.0]                  ; one section per target
    range = 40
    velocity = 5
    acceleration = 0
    rcs = 1
    model = constant_velocity   ; or constant_acceleration
    a_max = 5.4

    [noise]                     ; optional, off by default
    enabled = false
    snr_db = 30
    seed = 0

    [link]                      ; optional radar-equation parameters
    tx_power = 1
    tx_gain = 1
    rx_gain = 1

    [tracker]                   ; optional fusion settings
    a_max = 5.4
    max_frames = 4
    min_margin = 2
    amp_weight = 1
    min_feasible_range = 0.5
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from pathlib import Path

from .echo import (CONSTANT_VELOCITY, MotionModel, NoiseSpec, RadarLinkParams, TargetState)
from .errors import ConfigurationError, DomainError
from .fusion import (DEFAULT_AMP_WEIGHT, DEFAULT_MAX_FRAMES, DEFAULT_MIN_FEASIBLE_RANGE,
                     DEFAULT_MIN_MARGIN)
from .grid import COMB, DEFAULT_SYMBOL_OFFSET, DIAGONAL
from .scenario import DEFAULT_FRAME_TIMES, TruthTarget
from .sysconfig import SensingKpis, SystemParams

_TARGET_SECTION = re.compile(r"^target\.(\d+)$")

_SYSTEM_FLOATS = ("carrier_frequency", "bandwidth", "subcarrier_spacing", "slot_duration",
                  "speed_of_light")
_SYSTEM_INTS = ("slots_per_block", "symbols_per_slot", "comb_factor", "n_subcarriers")
_KPI_FIELDS = ("range_resolution_max", "velocity_resolution_max", "detection_range_min",
               "detection_velocity_min")


@dataclass(frozen=True)
class TrackerSettings:
    a_max: float = 5.4
    max_frames: int = DEFAULT_MAX_FRAMES
    min_margin: float = DEFAULT_MIN_MARGIN
    amp_weight: float = DEFAULT_AMP_WEIGHT
    min_feasible_range: float = DEFAULT_MIN_FEASIBLE_RANGE


@dataclass(frozen=True)
class ScenarioConfig:
    system: SystemParams
    kpis: SensingKpis | None = None
    targets: tuple[TruthTarget, ...] = ()
    frame_times: tuple[float, ...] = DEFAULT_FRAME_TIMES
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    allocation: str = DIAGONAL
    symbol_offset: int = DEFAULT_SYMBOL_OFFSET
    link: RadarLinkParams | None = None
    tracker: TrackerSettings = field(default_factory=TrackerSettings)


class _Reader:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
        try:
            self.cp.read_string(text)
        except configparser.Error as exc:
            raise ConfigurationError(str(exc).splitlines()[0],
                                     line=getattr(exc, "lineno", None)) from exc

    def line_of(self, section: str, key: str) -> int | None:
        current = None
        key_re = re.compile(rf"^\s*{re.escape(key)}\s*[=:]", re.IGNORECASE)
        for no, line in enumerate(self.lines, start=1):
            stripped = line.strip()
            if stripped.startswith("[") and stripped.endswith("]"):
                current = stripped[1:-1].strip()
            elif current == section and key_re.match(line):
                return no
        return None

    def error(self, section, key, message):
        return ConfigurationError(message, field=f"{section}.{key}",
                                  line=self.line_of(section, key))

    def _get(self, section, key, conv, default):
        if not self.cp.has_option(section, key):
            if default is _REQUIRED:
                raise ConfigurationError("missing required field", field=f"{section}.{key}")
            return default
        raw = self.cp.get(section, key)
        try:
            return conv(raw)
        except ValueError:
            raise self.error(section, key, f"cannot parse {raw!r}") from None

    def float(self, section, key, default=None):
        return self._get(section, key, float, default)

    def int(self, section, key, default=None):
        return self._get(section, key, _parse_int, default)

    def bool(self, section, key, default=False):
        return self._get(section, key, _parse_bool, default)

    def str(self, section, key, default=None):
        return self._get(section, key, str.strip, default)

    def float_list(self, section, key, default=None):
        return self._get(section, key,
                         lambda s: tuple(float(x) for x in s.replace(",", " ").split()), default)


_REQUIRED = object()


def _parse_int(raw: str) -> int:
    value = float(raw)
    if not value.is_integer():
        raise ValueError(raw)
    return int(value)


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(raw)


def parse_config(text: str) -> ScenarioConfig:
    r = _Reader(text)
    if not r.cp.has_section("system"):
        raise ConfigurationError("missing [system] section")

    sys_kwargs = {}
    for key in _SYSTEM_FLOATS:
        value = r._get("system", key, float, _REQUIRED if key != "speed_of_light" else None)
        if value is not None:
            sys_kwargs[key] = value
    for key in _SYSTEM_INTS:
        required = key in ("slots_per_block", "comb_factor")
        value = r._get("system", key, _parse_int, _REQUIRED if required else None)
        if value is not None:
            sys_kwargs[key] = value
    system = SystemParams(**sys_kwargs)

    kpis = None
    if r.cp.has_section("kpis") and any(r.cp.has_option("kpis", k) for k in _KPI_FIELDS):
        values = {k: r._get("kpis", k, float, _REQUIRED) for k in _KPI_FIELDS}
        try:
            kpis = SensingKpis(**values)
        except ConfigurationError as exc:
            raise r.error("kpis", exc.field, "must be strictly positive") from None

    allocation = DIAGONAL
    frame_times = DEFAULT_FRAME_TIMES
    symbol_offset = DEFAULT_SYMBOL_OFFSET
    if r.cp.has_section("scenario"):
        allocation = r.str("scenario", "allocation", DIAGONAL)
        if allocation not in (DIAGONAL, COMB):
            raise r.error("scenario", "allocation", f"unknown allocation {allocation!r}")
        frame_times = r.float_list("scenario", "frame_times", DEFAULT_FRAME_TIMES)
        if not frame_times or any(b <= a for a, b in zip(frame_times, frame_times[1:])):
            raise r.error("scenario", "frame_times", "must be non-empty and strictly increasing")
        symbol_offset = r.int("scenario", "symbol_offset", DEFAULT_SYMBOL_OFFSET)

    targets = []
    sections = sorted((int(m.group(1)), s) for s in r.cp.sections()
                      if (m := _TARGET_SECTION.match(s)))
    for _, sec in sections:
        model_kind = r.str(sec, "model", CONSTANT_VELOCITY)
        try:
            model = MotionModel(model_kind, r.float(sec, "a_max", 5.4))
        except ValueError as exc:
            raise r.error(sec, "model", str(exc)) from None
        try:
            state = TargetState(
                range=r._get(sec, "range", float, _REQUIRED),
                velocity=r._get(sec, "velocity", float, _REQUIRED),
                acceleration=r.float(sec, "acceleration", 0.0),
                rcs=r.float(sec, "rcs", 1.0),
            )
        except DomainError as exc:
            raise r.error(sec, "range", str(exc)) from None
        targets.append(TruthTarget(state, model))

    noise = NoiseSpec()
    if r.cp.has_section("noise"):
        noise = NoiseSpec(
            enabled=r.bool("noise", "enabled", False),
            snr_db=r.float("noise", "snr_db", 30.0),
            seed=r.int("noise", "seed", 0),
        )

    link = None
    if r.cp.has_section("link"):
        try:
            link = RadarLinkParams(
                tx_power=r.float("link", "tx_power", 1.0),
                tx_gain=r.float("link", "tx_gain", 1.0),
                rx_gain=r.float("link", "rx_gain", 1.0),
                carrier_frequency=system.carrier_frequency,
                speed_of_light=system.speed_of_light,
            )
        except DomainError as exc:
            raise ConfigurationError(str(exc), field="link") from None

    tracker = TrackerSettings()
    if r.cp.has_section("tracker"):
        tracker = TrackerSettings(
            a_max=r.float("tracker", "a_max", tracker.a_max),
            max_frames=r.int("tracker", "max_frames", tracker.max_frames),
            min_margin=r.float("tracker", "min_margin", tracker.min_margin),
            amp_weight=r.float("tracker", "amp_weight", tracker.amp_weight),
            min_feasible_range=r.float("tracker", "min_feasible_range",
                                       tracker.min_feasible_range),
        )

    return ScenarioConfig(system=system, kpis=kpis, targets=tuple(targets),
                          frame_times=tuple(frame_times), noise=noise, allocation=allocation,
                          symbol_offset=symbol_offset, link=link, tracker=tracker)


def load_config(path) -> ScenarioConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))
