"""Matplotlib figures written next to the CSV artifacts."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_STYLE = {
    "figure.figsize": (6.4, 4.0),
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.xmargin": 0,
    "font.size": 10,
}

# PNG without a Software tag keeps reruns byte-identical
_PNG_META = {"Software": None}


def _save(fig, path) -> Path:
    path = Path(path)
    fig.savefig(path, dpi=110, metadata=_PNG_META)
    plt.close(fig)
    return path


def plot_spectrum(rows, path, peaks=(), title="Radar image") -> Path:
    """Normalized magnitude (dB) against DFT bin, peaks marked."""
    bins = np.array([r["bin"] for r in rows])
    db = np.array([r["magnitude_db"] for r in rows])
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.plot(bins, np.maximum(db, -60.0), lw=0.9, color="#1f4e79")
        for b in peaks:
            ax.axvline(b, color="#c0392b", ls="--", lw=0.8)
        ax.set_xlabel("DFT bin index l")
        ax.set_ylabel("Normalized magnitude (dB)")
        ax.set_ylim(-60, 3)
        ax.set_title(title)
        fig.tight_layout()
        return _save(fig, path)


def plot_range_doppler(image, path, range_bin, velocity_bin, title="Range-Doppler periodogram") -> Path:
    image = np.asarray(image, dtype=float)
    db = 10 * np.log10(np.maximum(image / image.max(), 1e-6))
    n_f, n_t = image.shape
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        mesh = ax.imshow(db, origin="lower", aspect="auto", cmap="viridis", vmin=-60, vmax=0,
                         extent=(0, n_t * velocity_bin, 0, n_f * range_bin))
        fig.colorbar(mesh, ax=ax, label="dB")
        ax.set_xlabel("Velocity (m/s)")
        ax.set_ylabel("Range (m)")
        ax.set_title(title)
        fig.tight_layout()
        return _save(fig, path)


def plot_track(scores, path, title="Predicted vs measured peaks") -> Path:
    """Peak bins per frame: measured pair and both hypotheses' predictions."""
    colors = {"A": "#2e86c1", "B": "#e67e22"}
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        seen = set()
        for s in scores:
            t_ms = s.time * 1e3
            if s.frame not in seen:
                seen.add(s.frame)
                ax.plot([s.measured_low, s.measured_high], [t_ms, t_ms], "ks", ms=5,
                        label="measured" if len(seen) == 1 else None)
            if np.isfinite(s.predicted_low):
                ax.plot([s.predicted_low, s.predicted_high], [t_ms, t_ms], "o", mfc="none",
                        color=colors.get(s.label, "gray"), ms=8,
                        label=f"predicted {s.label}" if s.frame == min(seen) else None)
        ax.set_xlabel("DFT bin index l")
        ax.set_ylabel("Frame time (ms)")
        ax.set_title(title)
        ax.legend(loc="best", fontsize=8)
        fig.tight_layout()
        return _save(fig, path)


def plot_allocation(alloc, path, title="Sensing allocation", max_points=20000) -> Path:
    cells = alloc.cells
    if len(cells) > max_points:
        cells = cells[:: len(cells) // max_points + 1]
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        ax.scatter(cells[:, 1], cells[:, 0], s=1.5, color="#1f4e79")
        ax.set_xlabel("OFDM symbol index")
        ax.set_ylabel("Subcarrier index")
        ax.set_title(title)
        fig.tight_layout()
        return _save(fig, path)
