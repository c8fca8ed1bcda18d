"""Statistical indices over simulation traces.

Tracking accuracy is reported as the maximum absolute error and the RMS of
the error; control effort as the RMS torque.  Settling time and the dominant
switching frequency of the torque use definitions chosen for this tool (the
usual textbook ones leave both under-specified):

* settling time is measured on the torque's deviation from its 1-second
  trailing moving average, with the band set to 5% of the torque RMS;
* the switching frequency is the zero-crossing count of the per-window
  mean-removed signal, halved and divided by the window length, maximized
  over 50%-overlapping windows.
"""

from dataclasses import dataclass

import numpy as np

SETTLING_AVG_WINDOW = 1.0
SETTLING_BAND_FRACTION = 0.05
OSCILLATION_WINDOW = 1.0


def max_abs(series) -> float:
    arr = np.asarray(series, dtype=float)
    if arr.size == 0:
        raise ValueError("max_abs of an empty series")
    return float(np.max(np.abs(arr)))


def rms(series) -> float:
    arr = np.asarray(series, dtype=float)
    if arr.size == 0:
        raise ValueError("rms of an empty series")
    return float(np.sqrt(np.mean(arr * arr)))


def settling_time(series, t, band: float) -> float:
    """Earliest instant after which |series| never leaves the band.

    Returns the final time if the series is still outside the band at the end.
    """
    if band <= 0.0:
        raise ValueError("settling band must be positive")
    arr = np.abs(np.asarray(series, dtype=float))
    t = np.asarray(t, dtype=float)
    if arr.size == 0:
        raise ValueError("settling_time of an empty series")
    outside = np.flatnonzero(arr > band)
    if outside.size == 0:
        return float(t[0])
    last = outside[-1]
    if last == arr.size - 1:
        return float(t[-1])
    return float(t[last + 1])


def trailing_mean(series, window_samples: int) -> np.ndarray:
    """Causal moving average; shorter windows at the start of the series."""
    arr = np.asarray(series, dtype=float)
    c = np.concatenate([[0.0], np.cumsum(arr)])
    idx = np.arange(1, arr.size + 1)
    start = np.maximum(idx - window_samples, 0)
    return (c[idx] - c[start]) / (idx - start)


def max_oscillation_freq(series, dt: float, window: float = OSCILLATION_WINDOW) -> float:
    """Largest zero-crossing frequency (Hz) over sliding windows.

    A full oscillation crosses zero twice, so the estimate is half the
    crossing count per window duration.  Bounded by the Nyquist rate.
    """
    if window < 10.0 * dt:
        raise ValueError("oscillation window must span at least 10 samples")
    arr = np.asarray(series, dtype=float)
    n = arr.size
    w = min(n, int(round(window / dt)))
    if w < 2:
        return 0.0
    stride = max(1, w // 2)
    best = 0.0
    for start in range(0, n - w + 1, stride):
        chunk = arr[start : start + w]
        centered = chunk - chunk.mean()
        crossings = int(np.count_nonzero(np.diff(np.signbit(centered))))
        best = max(best, crossings / (2.0 * w * dt))
    return best


@dataclass(frozen=True)
class MetricsSummary:
    """Per-link indices; angles in degrees, torques in Nm, times in seconds."""

    dq_max: tuple[float, float]
    dq_rms: tuple[float, float]
    tau_rms: tuple[float, float]
    settling_time: tuple[float, float]
    max_oscillation: tuple[float, float]

    FIELDS = (
        ("dq_max", "deg"),
        ("dq_rms", "deg"),
        ("tau_rms", "Nm"),
        ("settling_time", "s"),
        ("max_oscillation", "Hz"),
    )


def summarize(t, dq_deg, tau) -> MetricsSummary:
    """Compute the summary from time axis, error (deg, n x 2) and torque (Nm, n x 2)."""
    t = np.asarray(t, dtype=float)
    dq_deg = np.asarray(dq_deg, dtype=float).reshape(-1, 2)
    tau = np.asarray(tau, dtype=float).reshape(-1, 2)
    if t.size == 0:
        raise ValueError("cannot summarize an empty trace")

    dt = float(t[1] - t[0]) if t.size > 1 else 0.0
    dq_max = tuple(max_abs(dq_deg[:, i]) for i in range(2))
    dq_rms = tuple(rms(dq_deg[:, i]) for i in range(2))
    tau_rms = tuple(rms(tau[:, i]) for i in range(2))

    settle = []
    freq = []
    for i in range(2):
        if dt > 0.0 and t.size > 2:
            w = max(2, int(round(SETTLING_AVG_WINDOW / dt)))
            deviation = tau[:, i] - trailing_mean(tau[:, i], w)
            band = SETTLING_BAND_FRACTION * tau_rms[i]
            settle.append(settling_time(deviation, t, band) if band > 0.0 else float(t[0]))
            freq.append(max_oscillation_freq(tau[:, i], dt, max(OSCILLATION_WINDOW, 10.0 * dt)))
        else:
            settle.append(float(t[-1]))
            freq.append(0.0)

    return MetricsSummary(
        dq_max=dq_max,
        dq_rms=dq_rms,
        tau_rms=tau_rms,
        settling_time=tuple(settle),
        max_oscillation=tuple(freq),
    )


def format_summary(ms: MetricsSummary) -> str:
    """Aligned text table, one row per index."""
    lines = [f"{'metric':<16}{'link1':>14}{'link2':>14}  unit"]
    for name, unit in MetricsSummary.FIELDS:
        a, b = getattr(ms, name)
        lines.append(f"{name:<16}{a:>14.6f}{b:>14.6f}  {unit}")
    return "\n".join(lines)


def summary_kv(ms: MetricsSummary) -> str:
    """Flat key=value rendering, one metric component per line."""
    lines = []
    for name, _ in MetricsSummary.FIELDS:
        values = getattr(ms, name)
        for i, v in enumerate(values, start=1):
            lines.append(f"{name}_{i}={v!r}")
    return "\n".join(lines)
