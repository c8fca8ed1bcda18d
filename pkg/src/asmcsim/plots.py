"""Render the standard report figures from a trace to SVG files."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .engine import Trace
from .traceio import provenance_line

# Cap on points per plotted line; dense chattering traces are strided down.
MAX_PLOT_POINTS = 20000


def _stride(n: int) -> int:
    return max(1, n // MAX_PLOT_POINTS)


def _finish(fig, path: Path, meta: dict) -> None:
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    _inject_provenance(path, meta)


def _inject_provenance(path: Path, meta: dict) -> None:
    """Insert the provenance comment right after the XML declaration."""
    comment = f"<!-- {provenance_line(meta).lstrip('# ')} -->\n"
    text = path.read_text()
    first_break = text.find("\n") + 1
    if text.startswith("<?xml"):
        text = text[:first_break] + comment + text[first_break:]
    else:
        text = comment + text
    path.write_text(text)


def save_tracking(trace: Trace, path, meta: dict) -> None:
    t = trace.t
    k = _stride(len(t))
    fig, axes = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    for i, ax in enumerate(axes):
        ax.plot(t[::k], np.degrees(trace.qd[::k, i]), "k--", label="desired")
        ax.plot(t[::k], np.degrees(trace.q[::k, i]), label="actual")
        ax.set_ylabel(f"q{i + 1} (deg)")
        ax.grid(True, alpha=0.4)
        ax.legend(loc="upper right")
    axes[1].set_xlabel("time (s)")
    _finish(fig, Path(path), meta)


def save_error(trace: Trace, path, meta: dict) -> None:
    t = trace.t
    k = _stride(len(t))
    fig, ax = plt.subplots(figsize=(8, 4))
    for i in range(2):
        ax.plot(t[::k], np.degrees(trace.dq[::k, i]), label=f"link {i + 1}")
    ax.set_xlabel("time (s)")
    ax.set_ylabel("tracking error (deg)")
    ax.grid(True, alpha=0.4)
    ax.legend()
    _finish(fig, Path(path), meta)


def save_torque(trace: Trace, path, meta: dict) -> None:
    t = trace.t
    k = _stride(len(t))
    fig, axes = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    for i, ax in enumerate(axes):
        ax.plot(t[::k], trace.tau[::k, i], lw=0.5)
        ax.set_ylabel(f"tau{i + 1} (Nm)")
        ax.grid(True, alpha=0.4)
    axes[1].set_xlabel("time (s)")
    _finish(fig, Path(path), meta)


def save_disturbance(trace: Trace, path, meta: dict) -> None:
    t = trace.t
    k = _stride(len(t))
    fig, axes = plt.subplots(3, 2, figsize=(10, 7), sharex=True)
    rows = (
        ("vibration", trace.tau_v),
        ("payload", trace.tau_l),
        ("combined", trace.tau_v + trace.tau_l),
    )
    for r, (label, series) in enumerate(rows):
        for i in range(2):
            ax = axes[r, i]
            ax.plot(t[::k], series[::k, i], lw=0.5)
            ax.set_ylabel(f"{label} {i + 1} (Nm)")
            ax.grid(True, alpha=0.4)
    for i in range(2):
        axes[2, i].set_xlabel("time (s)")
    _finish(fig, Path(path), meta)


def save_all(trace: Trace, outdir, meta: dict) -> list[Path]:
    outdir = Path(outdir)
    jobs = (
        ("tracking.svg", save_tracking),
        ("error.svg", save_error),
        ("torque.svg", save_torque),
        ("disturbance.svg", save_disturbance),
    )
    written = []
    for name, fn in jobs:
        path = outdir / name
        fn(trace, path, meta)
        written.append(path)
    return written
