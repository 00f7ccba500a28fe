"""Render the standard figure set from a simulation CSV.

Reads only the CSV contract emitted by the ``mccontrol`` harness:

    t,z1,...,zn,zhat1,...,zhatn,s,sfn,bound_lo,bound_hi,xi,v,u,G

and produces, per scenario, the error/estimate time series, the constrained
manifold value against its flexible bounds, phase portraits, and the applied
input against the normalised drive it has to cancel.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

PANELS = ("timeseries", "bounds", "phase", "input")

# scenarios whose constrained quantity is the lateral manifold value (sfn);
# the others constrain the full manifold value (s)
LATERAL_PRESETS = {"finite", "finiteSat"}


class ColumnError(ValueError):
    """The CSV does not carry the expected column layout."""


@dataclass(frozen=True)
class FigureSpec:
    preset: str
    csv_path: str
    out_dir: str
    panels: tuple[str, ...] = PANELS

    def __post_init__(self) -> None:
        unknown = set(self.panels) - set(PANELS)
        if unknown:
            raise ValueError(f"unknown panels: {sorted(unknown)}")


def read_columns(path: str | Path) -> dict[str, np.ndarray]:
    """Load the CSV into named arrays, validating the schema."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ColumnError(f"{path}: empty file")
    header = rows[0]
    order = sum(1 for name in header if name.startswith("z") and name[1:].isdigit())
    expected = (
        ["t"]
        + [f"z{i}" for i in range(1, order + 1)]
        + [f"zhat{i}" for i in range(1, order + 1)]
        + ["s", "sfn", "bound_lo", "bound_hi", "xi", "v", "u", "G"]
    )
    missing = [name for name in expected if name not in header]
    if missing or len(header) != len(expected):
        raise ColumnError(f"{path}: missing or unexpected columns (missing: {missing})")
    data = np.array([[float(v) for v in row] for row in rows[1:]])
    if data.ndim != 2 or data.shape[0] < 3:
        raise ColumnError(f"{path}: need at least 3 data rows")
    return {name: data[:, i] for i, name in enumerate(header)}


def order_of(cols: dict[str, np.ndarray]) -> int:
    return sum(1 for name in cols if name.startswith("z") and name[1:].isdigit())


def normalised_drive(cols: dict[str, np.ndarray]) -> np.ndarray:
    """The input the plant would need with no error motion: u - dz_n/G.

    dz_n comes from central differences of the last error column on the
    decimated grid, one-sided at the endpoints.
    """
    n = order_of(cols)
    zn = cols[f"z{n}"]
    t = cols["t"]
    dzn = np.gradient(zn, t)
    return cols["u"] - dzn / cols["G"]


def drive_parity(cols: dict[str, np.ndarray], window: float = 2.0) -> float:
    """Mean |u - (-F/G)| over the trailing window."""
    t = cols["t"]
    mask = t >= t[-1] - window
    gap = np.abs(cols["u"] - normalised_drive(cols))
    return float(np.mean(gap[mask]))


def _save(fig, out_dir: Path, stem: str) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for ext in ("png", "svg"):
        path = out_dir / f"{stem}.{ext}"
        fig.savefig(path, dpi=130 if ext == "png" else None, bbox_inches="tight")
        written.append(path)
    plt.close(fig)
    return written


def _panel_timeseries(cols, spec, out_dir) -> list[Path]:
    n = order_of(cols)
    t = cols["t"]
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    for i in range(1, n + 1):
        ax.plot(t, cols[f"z{i}"], label=f"$z_{i}$", lw=1.2)
    for i in range(1, n + 1):
        ax.plot(t, cols[f"zhat{i}"], "--", label=rf"$\hat{{z}}_{i}$", lw=0.9)
    ax.set_xlabel("t [s]")
    ax.set_ylabel("tracking errors")
    ax.legend(ncol=2, fontsize=8)
    ax.grid(alpha=0.3)
    ax.set_title(f"{spec.preset}: errors and estimates")
    return _save(fig, out_dir, f"{spec.preset}_timeseries")


def _panel_bounds(cols, spec, out_dir) -> list[Path]:
    t = cols["t"]
    lateral = spec.preset in LATERAL_PRESETS
    quantity = cols["sfn"] if lateral else cols["s"]
    label = "$s_{fn}$" if lateral else "$s$"
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.plot(t, quantity, label=label, lw=1.2)
    ax.plot(t, cols["bound_hi"], "r--", label="upper bound", lw=1.0)
    ax.plot(t, cols["bound_lo"], "r--", label="lower bound", lw=1.0)
    ax.set_xlabel("t [s]")
    ax.set_ylabel("manifold value")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    ax.set_title(f"{spec.preset}: constrained value vs flexible bounds")
    return _save(fig, out_dir, f"{spec.preset}_bounds")


def _panel_phase(cols, spec, out_dir) -> list[Path]:
    fig, ax = plt.subplots(figsize=(4.2, 4.0))
    ax.plot(cols["z1"], cols["z2"], lw=1.0)
    ax.plot(cols["z1"][0], cols["z2"][0], "ko", ms=4)
    ax.set_xlabel("$z_1$")
    ax.set_ylabel("$z_2$")
    ax.grid(alpha=0.3)
    ax.set_title(f"{spec.preset}: phase portrait")
    written = _save(fig, out_dir, f"{spec.preset}_phase")
    if order_of(cols) >= 3:
        fig, ax = plt.subplots(figsize=(4.2, 4.0))
        ax.plot(cols["z2"], cols["z3"], lw=1.0)
        ax.plot(cols["z2"][0], cols["z3"][0], "ko", ms=4)
        ax.set_xlabel("$z_2$")
        ax.set_ylabel("$z_3$")
        ax.grid(alpha=0.3)
        ax.set_title(f"{spec.preset}: derivative-plane portrait")
        written += _save(fig, out_dir, f"{spec.preset}_phase_deriv")
    return written


def _panel_input(cols, spec, out_dir) -> list[Path]:
    t = cols["t"]
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.plot(t, cols["u"], label="$u$", lw=1.2)
    ax.plot(t, normalised_drive(cols), "--", label="$-F/G$", lw=1.0)
    ax.set_xlabel("t [s]")
    ax.set_ylabel("input")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    ax.set_title(f"{spec.preset}: applied input vs normalised drive")
    return _save(fig, out_dir, f"{spec.preset}_input")


_RENDERERS = {
    "timeseries": _panel_timeseries,
    "bounds": _panel_bounds,
    "phase": _panel_phase,
    "input": _panel_input,
}


def render(spec: FigureSpec) -> list[Path]:
    """Render the requested panels; returns every file written."""
    cols = read_columns(spec.csv_path)
    out_dir = Path(spec.out_dir)
    written: list[Path] = []
    for panel in spec.panels:
        written += _RENDERERS[panel](cols, spec, out_dir)
    return written
