"""Analytic reference trajectory with exact first and second derivatives.

Link 1 follows a decaying sine, link 2 a decaying cosine:

    qd1(t) = A1 sin(w1 t) exp(-a t)
    qd2(t) = A2 cos(w2 t) exp(-a t)

Amplitudes are configured in degrees and converted once; everything returned
here is in radians.
"""

from dataclasses import dataclass
from math import cos, exp, radians, sin

import numpy as np


@dataclass(frozen=True)
class TrajectoryParams:
    amp_deg: tuple[float, float] = (114.95, 85.94)
    freq: tuple[float, float] = (1.5, 2.0)
    decay: float = 0.03

    def __post_init__(self):
        if self.decay < 0.0:
            raise ValueError("trajectory decay must be non-negative")
        if any(f <= 0.0 for f in self.freq):
            raise ValueError("trajectory freq entries must be positive")

    @property
    def amp_rad(self) -> tuple[float, float]:
        return (radians(self.amp_deg[0]), radians(self.amp_deg[1]))


@dataclass(frozen=True)
class DesiredState:
    """Desired position (rad), velocity (rad/s) and acceleration (rad/s^2)."""

    qd: np.ndarray
    qd_dot: np.ndarray
    qd_ddot: np.ndarray


def desired(params: TrajectoryParams, t: float) -> DesiredState:
    """Evaluate the reference and its exact derivatives at time t >= 0."""
    a1, a2 = params.amp_rad
    w1, w2 = params.freq
    d = params.decay
    env = exp(-d * t)
    s1, c1 = sin(w1 * t), cos(w1 * t)
    s2, c2 = sin(w2 * t), cos(w2 * t)

    f1 = a1 * env * s1
    f1d = a1 * env * (w1 * c1 - d * s1)
    f1dd = a1 * env * ((d * d - w1 * w1) * s1 - 2.0 * d * w1 * c1)

    f2 = a2 * env * c2
    f2d = a2 * env * (-w2 * s2 - d * c2)
    f2dd = a2 * env * ((d * d - w2 * w2) * c2 + 2.0 * d * w2 * s2)

    return DesiredState(
        qd=np.array([f1, f2]),
        qd_dot=np.array([f1d, f2d]),
        qd_ddot=np.array([f1dd, f2dd]),
    )
