"""Command-line front end: ``ofdmjcas design|simulate|track|bench``.

Exit codes: 0 success, 2 configuration or usage error, 3 unresolved track
verdict, 4 I/O error, 1 any other failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import io, plotting, transforms
from .config import ScenarioConfig, load_config
from .echo import MotionModel, RadarLinkParams
from .errors import ConfigurationError, JcasError
from .estimator import estimate_2d, estimate_diagonal, measure_diagonal, spectrum_export
from .fusion import UNRESOLVED, Measurement, resolve
from .grid import COMB, DIAGONAL, comb_allocation, diagonal_allocation, overhead
from .scenario import simulate_frames, truth_label
from .sysconfig import (DerivedGrid, check_kpis, derive_grid, max_range, max_velocity,
                        range_resolution, velocity_resolution)

log = logging.getLogger("ofdmjcas")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_UNRESOLVED = 3
EXIT_IO = 4


class UsageError(Exception):
    pass


def _load(args) -> tuple[ScenarioConfig, DerivedGrid]:
    if not args.config:
        raise UsageError("--config is required")
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, noise=replace(cfg.noise, seed=args.seed))
    return cfg, derive_grid(cfg.system)


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _link(cfg: ScenarioConfig, grid: DerivedGrid) -> RadarLinkParams:
    return cfg.link or RadarLinkParams(carrier_frequency=grid.carrier_frequency,
                                       speed_of_light=grid.c)


def design_report(cfg: ScenarioConfig, grid: DerivedGrid) -> dict:
    vmax = max_velocity(grid)
    comb = None
    if grid.params.symbols_per_slot == 2 * grid.comb_factor:
        comb = overhead(comb_allocation(grid), grid)
    diag = overhead(diagonal_allocation(grid), grid)
    report = {
        "grid": {
            "n_subcarriers": grid.n_subcarriers,
            "n_symbols": grid.n_symbols,
            "n_sensing": grid.n_sensing,
            "symbol_duration_s": grid.symbol_duration,
            "block_duration_s": grid.block_duration,
            "comb_freq_spacing_hz": grid.comb_freq_spacing,
            "comb_time_spacing_s": grid.comb_time_spacing,
            "range_bin_m": grid.range_bin,
            "velocity_bin_mps": grid.velocity_bin,
        },
        "performance": {
            "range_resolution_m": range_resolution(grid),
            "max_range_m": max_range(grid),
            "velocity_resolution_mps": velocity_resolution(grid),
            "max_velocity_nominal_mps": vmax.nominal,
            "max_velocity_effective_mps": vmax.effective,
        },
        "overhead": {
            "comb": None if comb is None else float(comb),
            "diagonal": float(diag),
        },
    }
    if cfg.kpis is not None:
        report["kpis"] = check_kpis(grid, cfg.kpis).as_dict()
    return report


def _print_design(report: dict) -> None:
    g, p = report["grid"], report["performance"]
    print("Derived grid")
    print(f"  subcarriers N_c           {g['n_subcarriers']}")
    print(f"  symbols per block N_sym   {g['n_symbols']}")
    print(f"  sensing signals N         {g['n_sensing']}")
    print(f"  symbol duration           {g['symbol_duration_s'] * 1e6:.4f} us")
    print(f"  block duration            {g['block_duration_s'] * 1e3:.4f} ms")
    print(f"  range bin                 {g['range_bin_m']:.5f} m")
    print(f"  velocity bin              {g['velocity_bin_mps']:.5f} m/s")
    print("Sensing performance")
    print(f"  range resolution          {p['range_resolution_m']:.5f} m")
    print(f"  max range                 {p['max_range_m']:.3f} m")
    print(f"  velocity resolution       {p['velocity_resolution_mps']:.5f} m/s")
    print(f"  max velocity (nominal)    {p['max_velocity_nominal_mps']:.3f} m/s")
    print(f"  max velocity (effective)  {p['max_velocity_effective_mps']:.3f} m/s")
    o = report["overhead"]
    if o["comb"] is not None:
        print(f"  sensing overhead comb     {o['comb']:.6g}")
    print(f"  sensing overhead diagonal {o['diagonal']:.6g}")
    if "kpis" not in report:
        return
    print("KPI check")
    for c in report["kpis"]["checks"]:
        op = "<=" if c["sense"] == "max" else ">="
        verdict = "pass" if c["pass"] else "FAIL"
        print(f"  {c['name']:<22} {c['achieved']:>10.5g} {op} {c['target']:<10.5g} {verdict}")
    if report["kpis"]["all_passed"]:
        print("all KPIs satisfied")
    else:
        print("KPIs NOT satisfied")


def cmd_design(args) -> int:
    cfg, grid = _load(args)
    report = design_report(cfg, grid)
    if args.format == "json":
        sys.stdout.write(io.dumps(report))
    else:
        _print_design(report)
    if args.out:
        io.write_json(_out_dir(args) / "design.json", report)
    return EXIT_OK


def _pair_record(frame_index, t, pair) -> dict:
    cands = []
    for label, est, _ in pair.members():
        rec = est.as_dict()
        rec["candidate"] = label
        cands.append(rec)
    return {
        "frame": frame_index,
        "time_s": t,
        "f_high": pair.f_high,
        "f_low": pair.f_low,
        "merged": pair.merged,
        "peak_bins": list(pair.peaks.bins),
        "peak_positions": list(pair.peaks.positions),
        "estimates": cands,
    }


def cmd_simulate(args) -> int:
    cfg, grid = _load(args)
    if not cfg.targets:
        raise ConfigurationError("simulate needs at least one [target.N] section")
    out = _out_dir(args)
    frames = simulate_frames(cfg.targets, grid, cfg.frame_times, kind=cfg.allocation,
                             noise=cfg.noise, link=_link(cfg, grid),
                             symbol_offset=cfg.symbol_offset)
    if cfg.allocation == DIAGONAL:
        alloc = diagonal_allocation(grid, cfg.symbol_offset)
    else:
        alloc = comb_allocation(grid, cfg.symbol_offset)
    io.write_csv(out / "allocation.csv", f"allocation_{cfg.allocation}", alloc.rows())
    plotting.plot_allocation(alloc, out / "allocation.png", title=f"{cfg.allocation} allocation")

    records = []
    for i, frame in enumerate(frames):
        tag = f"{i:03d}"
        io.write_csv(out / f"frame_{tag}.csv", f"frame_{frame.kind}", frame.rows())
        rows = spectrum_export(frame)
        io.write_csv(out / f"spectrum_{tag}.csv", f"spectrum_{frame.kind}", rows)
        if frame.kind == DIAGONAL:
            pair = estimate_diagonal(frame, grid)
            records.append(_pair_record(i, frame.timestamp, pair))
            plotting.plot_spectrum(rows, out / f"spectrum_{tag}.png", peaks=pair.peaks.bins,
                                   title=f"Radar image, t = {frame.timestamp * 1e3:.0f} ms")
        else:
            est = estimate_2d(frame, grid)
            rec = est.as_dict()
            rec.update(frame=i, time_s=frame.timestamp, candidate="2d")
            records.append(rec)
            image = transforms.periodogram_2d(frame.samples)
            plotting.plot_range_doppler(image, out / f"spectrum_{tag}.png", grid.range_bin,
                                        grid.velocity_bin)
        log.info("frame %s written", tag)
    io.write_json(out / "estimates.json", {"allocation": cfg.allocation, "frames": records})
    print(f"{len(frames)} frame(s) written to {out}")
    return EXIT_OK


def cmd_track(args) -> int:
    cfg, grid = _load(args)
    if not cfg.targets:
        raise ConfigurationError("track needs at least one [target.N] section")
    if len(cfg.frame_times) < 2:
        raise UsageError("track needs at least two frame times")
    if cfg.allocation != DIAGONAL:
        raise ConfigurationError("track works on diagonal frames only", field="scenario.allocation")
    out = _out_dir(args)
    frames = simulate_frames(cfg.targets, grid, cfg.frame_times, noise=cfg.noise,
                             link=_link(cfg, grid), symbol_offset=cfg.symbol_offset)
    pair = estimate_diagonal(frames[0], grid)
    meas = [Measurement(f.timestamp, measure_diagonal(f)) for f in frames]
    tr = cfg.tracker
    verdict = resolve(meas, pair, grid, MotionModel(a_max=tr.a_max), max_frames=tr.max_frames,
                      min_margin=tr.min_margin, amp_weight=tr.amp_weight,
                      min_feasible_range=tr.min_feasible_range)

    doc = verdict.as_dict()
    doc["pair"] = _pair_record(0, frames[0].timestamp, pair)
    if verdict.chosen in ("A", "B"):
        est = pair.estimate_a if verdict.chosen == "A" else pair.estimate_b
        doc["estimate"] = est.as_dict()
    doc["truth_consistent"] = truth_label(cfg.targets[0].state, grid)
    io.write_json(out / "verdict.json", doc)
    io.write_csv(out / "scores.csv", "scores", (vars(s) for s in verdict.per_frame))
    if verdict.per_frame:
        plotting.plot_track(verdict.per_frame, out / "track.png")

    print(f"verdict: {verdict.chosen} after {verdict.frames_used} frame(s)")
    return EXIT_UNRESOLVED if verdict.chosen == UNRESOLVED else EXIT_OK


def _bench_once(pipeline: str, n: int, rng) -> int:
    if pipeline.startswith("2d"):
        D = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        algo = transforms.DIRECT if pipeline.endswith("direct") else transforms.FAST
        start = time.perf_counter_ns()
        transforms.periodogram_2d(D, algorithm=algo)
    else:
        d = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        algo = transforms.DIRECT if pipeline.endswith("direct") else transforms.FAST
        start = time.perf_counter_ns()
        transforms.dft(d, algorithm=algo)
    return time.perf_counter_ns() - start


def bench_rows(sizes, repeat: int = 3, seed: int = 0) -> list[dict]:
    """One row per (pipeline, size); fast pipelines only at power-of-two sizes."""
    rng = np.random.default_rng(seed)
    rows = []
    for n in sizes:
        for pipeline in transforms.PIPELINES:
            try:
                counter = transforms.count_ops(pipeline, n)
            except transforms.UnsupportedSizeError:
                continue
            _bench_once(pipeline, n, rng)  # warm the DFT-matrix cache
            wall = min(_bench_once(pipeline, n, rng) for _ in range(repeat))
            rows.append({"pipeline": pipeline, "N": n,
                         "complex_multiplications": counter.complex_multiplications,
                         "wall_time_ns": wall})
    return rows


def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(s) for s in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad --sizes value {text!r}") from None
    if not sizes or any(n < 1 for n in sizes):
        raise UsageError("sizes must be integers >= 1")
    return sizes


def cmd_bench(args) -> int:
    rows = bench_rows(_parse_sizes(args.sizes), repeat=args.repeat,
                      seed=args.seed if args.seed is not None else 0)
    if args.format == "json":
        sys.stdout.write(io.dumps(rows))
    else:
        cols = io.COLUMNS["bench"]
        print(",".join(cols))
        for r in rows:
            print(",".join(str(r[c]) for c in cols))
    if args.out:
        io.write_csv(_out_dir(args) / "bench.csv", "bench", rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ofdmjcas", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_required=False):
        p.add_argument("--config", type=Path, help="scenario configuration file")
        p.add_argument("--out", required=out_required, help="output directory")
        p.add_argument("--seed", type=int, help="override the noise seed")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("design", help="derive the grid and check KPIs")
    common(p)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("simulate", help="synthesize frames, spectra and estimates")
    common(p, out_required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("track", help="resolve the diagonal ambiguity over several frames")
    common(p, out_required=True)
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("bench", help="multiplication counts and wall time per pipeline")
    common(p)
    p.add_argument("--sizes", default="16,64,480,512")
    p.add_argument("--repeat", type=int, default=3)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ofdmjcas: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigurationError as exc:
        print(f"ofdmjcas: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"ofdmjcas: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except JcasError as exc:
        print(f"ofdmjcas: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
