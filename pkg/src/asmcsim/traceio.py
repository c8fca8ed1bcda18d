"""Reading and writing the delimited trace and summary files.

The CSV schema is fixed: one header row, angles in degrees, torques in Nm,
time in seconds, floats at full round-trip precision.  Every emitted file
starts with a provenance comment recording tool version, seed, RNG name and
config digest.
"""

import io
from pathlib import Path

import numpy as np

from .engine import Trace
from .metrics import MetricsSummary, format_summary, summarize, summary_kv

CSV_COLUMNS = (
    "t,q1,q2,qd1,qd2,dq1,dq2,eta1,eta2,tau1,tau2,"
    "tv1,tv2,tl1,tl2,phi1,phi2,phi3,V"
)


class TraceFormatError(Exception):
    """The trace file does not follow the documented CSV schema."""


def provenance_line(meta: dict) -> str:
    return (
        f"# asmcsim={meta['version']} seed={meta['seed']} "
        f"rng={meta['rng']} config={meta['config']}"
    )


def trace_matrix(trace: Trace) -> np.ndarray:
    """Trace columns in CSV order with angles converted to degrees."""
    deg = np.degrees
    return np.column_stack(
        [
            trace.t,
            deg(trace.q),
            deg(trace.qd),
            deg(trace.dq),
            deg(trace.eta),
            trace.tau,
            trace.tau_v,
            trace.tau_l,
            trace.phi_hat,
            trace.lyapunov,
        ]
    )


def write_trace_csv(path, trace: Trace) -> None:
    matrix = trace_matrix(trace)
    buf = io.StringIO()
    buf.write(provenance_line(trace.meta) + "\n")
    buf.write(CSV_COLUMNS + "\n")
    for row in matrix:
        buf.write(",".join(map(repr, row.tolist())) + "\n")
    Path(path).write_text(buf.getvalue())


def read_trace_csv(path) -> tuple[dict, np.ndarray]:
    """Parse a trace file; returns (header metadata, data matrix in CSV order)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise TraceFormatError(f"cannot read trace: {exc}") from exc

    meta: dict = {}
    header = None
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            for token in line.lstrip("# ").split():
                if "=" in token:
                    key, value = token.split("=", 1)
                    meta[key] = value
            continue
        if header is None:
            header = line
            if header != CSV_COLUMNS:
                raise TraceFormatError(
                    f"line {lineno}: unexpected header; want '{CSV_COLUMNS}'"
                )
            continue
        parts = line.split(",")
        if len(parts) != len(CSV_COLUMNS.split(",")):
            raise TraceFormatError(f"line {lineno}: expected 19 columns, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise TraceFormatError(f"line {lineno}: {exc}") from exc

    if header is None or not rows:
        raise TraceFormatError("trace file contains no data rows")
    return meta, np.array(rows)


def summarize_trace(trace: Trace) -> MetricsSummary:
    return summarize(trace.t, np.degrees(trace.dq), trace.tau)


def summarize_matrix(matrix: np.ndarray) -> MetricsSummary:
    """Summary from a parsed CSV matrix (columns in CSV order)."""
    return summarize(matrix[:, 0], matrix[:, 5:7], matrix[:, 9:11])


def write_summary(path, ms: MetricsSummary, meta: dict) -> None:
    Path(path).write_text(provenance_line(meta) + "\n" + format_summary(ms) + "\n")


def write_summary_kv(path, ms: MetricsSummary, meta: dict) -> None:
    Path(path).write_text(provenance_line(meta) + "\n" + summary_kv(ms) + "\n")
