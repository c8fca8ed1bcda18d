"""Seeded disturbance torque generators: vibration and payload variation.

The vibration torque is a sample-and-hold Gaussian stream, clipped so that the
vibration plus the worst payload step stays inside the published combined
envelope.  The payload torque is a piecewise-constant schedule with half-open
segments [t_start, t_end).
"""

from dataclasses import dataclass
from math import floor

import numpy as np

RNG_NAME = "pcg64"

# Combined vibration + payload envelope, per joint.
COMBINED_LO = (-0.2873, -0.3518)
COMBINED_HI = (0.9446, 1.1108)

# Default clip window for the vibration alone: combined envelope minus the
# largest payload step per joint, so the sum stays bounded in every segment.
DEFAULT_CLIP_LO = (-0.2873, -0.3518)
DEFAULT_CLIP_HI = (0.2946, 0.3608)


@dataclass(frozen=True)
class VibrationConfig:
    mean: tuple[float, float] = (0.0, 0.0)
    variance: tuple[float, float] = (0.01, 0.015)
    sample_period: float = 0.01
    clip_lo: tuple[float, float] = DEFAULT_CLIP_LO
    clip_hi: tuple[float, float] = DEFAULT_CLIP_HI
    seed: int = 0

    def __post_init__(self):
        if any(v < 0.0 for v in self.variance):
            raise ValueError("vibration variance entries must be non-negative")
        if not self.sample_period > 0.0:
            raise ValueError("vibration sample_period must be positive")
        if any(lo > hi for lo, hi in zip(self.clip_lo, self.clip_hi)):
            raise ValueError("vibration clip_lo must not exceed clip_hi")


@dataclass(frozen=True)
class PayloadSegment:
    t_start: float
    t_end: float
    torque: tuple[float, float]

    def __post_init__(self):
        if not self.t_end > self.t_start:
            raise ValueError("payload segment must have t_end > t_start")
        if not all(np.isfinite(self.torque)):
            raise ValueError("payload segment torque must be finite")


@dataclass(frozen=True)
class PayloadProfile:
    """Ordered non-overlapping segments; zero torque outside all of them."""

    segments: tuple[PayloadSegment, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(self.segments, key=lambda s: s.t_start))
        for a, b in zip(ordered, ordered[1:]):
            if a.t_end > b.t_start:
                raise ValueError(
                    f"payload segments overlap at t={b.t_start:g}"
                )
        object.__setattr__(self, "segments", ordered)

    def extrema(self) -> tuple[np.ndarray, np.ndarray]:
        """Componentwise (min, max) payload torque over all time."""
        values = [np.zeros(2)] + [np.asarray(s.torque, dtype=float) for s in self.segments]
        stacked = np.stack(values)
        return stacked.min(axis=0), stacked.max(axis=0)


def default_payload_profile() -> PayloadProfile:
    return PayloadProfile(
        (
            PayloadSegment(4.0, 8.0, (0.65, 0.75)),
            PayloadSegment(8.0, 10.0, (0.15, 0.25)),
        )
    )


def payload_torque(profile: PayloadProfile, t: float) -> np.ndarray:
    """Piecewise-constant payload torque; segment boundaries belong to the later segment."""
    for seg in profile.segments:
        if seg.t_start <= t < seg.t_end:
            return np.array(seg.torque)
    return np.zeros(2)


def sample_index(t: float, period: float) -> int:
    """Hold-interval index for time t, robust to accumulated float error."""
    return int(floor(t / period + 1e-9))


class VibrationGenerator:
    """Clipped sample-and-hold Gaussian torque stream.

    The k-th held value is drawn from the seeded stream's draws 2k and 2k+1,
    so two generators with equal seeds produce bit-identical streams no matter
    in what order they are queried.
    """

    def __init__(self, cfg: VibrationConfig):
        self.cfg = cfg
        self._rng = np.random.default_rng(cfg.seed)
        self._std = np.sqrt(np.asarray(cfg.variance, dtype=float))
        self._mean = np.asarray(cfg.mean, dtype=float)
        self._lo = np.asarray(cfg.clip_lo, dtype=float)
        self._hi = np.asarray(cfg.clip_hi, dtype=float)
        self._raw = np.empty((0, 2))
        self._held = np.empty((0, 2))

    def _extend(self, n: int) -> None:
        have = self._raw.shape[0]
        if n <= have:
            return
        grow = max(n - have, have, 256)
        fresh = self._mean + self._std * self._rng.standard_normal((grow, 2))
        self._raw = np.concatenate([self._raw, fresh])
        self._held = np.clip(self._raw, self._lo, self._hi)

    def raw_samples(self, n: int) -> np.ndarray:
        """First n unclipped draws (for distribution checks)."""
        self._extend(n)
        return self._raw[:n]

    def sample(self, k: int) -> np.ndarray:
        """Clipped held value for interval [k*period, (k+1)*period)."""
        self._extend(k + 1)
        return self._held[k]

    def torque(self, t: float) -> np.ndarray:
        return self.sample(sample_index(t, self.cfg.sample_period))


def vibration_torque(cfg: VibrationConfig, gen: VibrationGenerator, t: float) -> np.ndarray:
    """Vibration torque at time t from a generator seeded with cfg.seed."""
    if gen.cfg is not cfg and gen.cfg != cfg:
        raise ValueError("generator was built from a different vibration config")
    return gen.torque(t)


@dataclass(frozen=True)
class BoundsReport:
    ok: bool
    worst_excess: float = 0.0
    component: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def combined_bounds_check(samples, lo=COMBINED_LO, hi=COMBINED_HI) -> BoundsReport:
    """Check every combined disturbance sample against the published envelope.

    `samples` is an (n, 2) array of vibration + payload torque values.
    Returns the largest componentwise exceedance and which joint produced it.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        raise ValueError("combined_bounds_check needs a non-empty trace")
    arr = arr.reshape(-1, 2)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    excess = np.maximum(arr - hi, lo - arr)
    worst_flat = int(np.argmax(excess))
    worst = float(excess.flat[worst_flat])
    if worst <= 0.0:
        return BoundsReport(ok=True)
    return BoundsReport(ok=False, worst_excess=worst, component=worst_flat % 2 + 1)
