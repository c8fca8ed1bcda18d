"""Adaptive sliding-mode control law and the PD + gravity comparison baseline.

The torque command is

    tau = Y(phi_hat) + K1 * eta + K2 * sgn(eta)

where eta is the filtered tracking error, Y the regressor of measurable
signals (it never reads the link masses), phi_hat the 3-vector estimate of
the unknown inertia groupings, and sgn the signum, optionally softened to a
saturation inside a boundary layer of width epsilon.  The estimate evolves as
d/dt phi_hat = Lambda Y^T eta.
"""

from dataclasses import dataclass
from math import cos, sin

import numpy as np

from .dynamics import RobotParams


@dataclass(frozen=True)
class GainSet:
    """Diagonal controller gains; kp/kd drive the PD baseline only."""

    k1: tuple[float, float] = (80.0, 60.0)
    k2: tuple[float, float] = (2.0, 1.5)
    sigma: tuple[float, float] = (5.0, 5.0)
    lam: tuple[float, float, float] = (1.0, 1.0, 1.0)
    epsilon: float = 0.0
    kp: tuple[float, float] = (400.0, 300.0)
    kd: tuple[float, float] = (80.0, 60.0)

    def __post_init__(self):
        for name in ("k1", "k2", "sigma", "lam", "kp", "kd"):
            if any(v <= 0.0 for v in getattr(self, name)):
                raise ValueError(f"gain {name} entries must be positive")
        if self.epsilon < 0.0:
            raise ValueError("gain epsilon must be non-negative")


def true_params(p: RobotParams) -> np.ndarray:
    """The plant's actual value of the estimated parameter vector."""
    return np.array(
        [(p.m1 + p.m2) * p.l1 * p.l1, p.m2 * p.l2 * p.l2, p.m2 * p.l1 * p.l2]
    )


def filtered_error(dq, dq_dot, sigma) -> np.ndarray:
    """eta = dq_dot + sigma * dq (componentwise, sigma diagonal)."""
    return np.asarray(dq_dot) + np.asarray(sigma) * np.asarray(dq)


def signum(eta, epsilon: float = 0.0) -> np.ndarray:
    """Componentwise sign of eta; linear saturation inside |eta| < epsilon."""
    eta = np.asarray(eta, dtype=float)
    if epsilon > 0.0:
        return np.clip(eta / epsilon, -1.0, 1.0)
    return np.sign(eta)


def regressor(q, qdot, qd_dot, qd_ddot, dq, dq_dot, sigma, l1, l2, g) -> np.ndarray:
    """2x3 regressor Y of measurable signals, linear in the unknown parameters.

    Columns multiply [ (m1+m2) l1^2, m2 l2^2, m2 l1 l2 ]; lengths and gravity
    are treated as known.
    """
    c1 = cos(q[0])
    c12 = cos(q[0] + q[1])
    c2 = cos(q[1])
    s2 = sin(q[1])
    b1, b2 = qd_ddot[0], qd_ddot[1]
    # reference velocity plus the proportional part of the filtered error
    w1 = qd_dot[0] + sigma[0] * dq[0]
    w2 = qd_dot[1] + sigma[1] * dq[1]
    esum = dq_dot[0] + dq_dot[1]
    bsum = b1 + b2
    return np.array(
        [
            [
                sigma[0] * dq_dot[0] + b1 + g * c1 / l1,
                sigma[0] * esum + bsum + g * c12 / l2,
                s2 * (-qdot[1] * w1 - (qdot[0] + qdot[1]) * w2)
                + c2 * (sigma[0] * (2.0 * dq_dot[0] + dq_dot[1]) + 2.0 * b1 + b2),
            ],
            [
                0.0,
                sigma[1] * esum + bsum + g * c12 / l2,
                s2 * qdot[0] * w1 + c2 * (sigma[1] * dq_dot[0] + b1),
            ],
        ]
    )


def control_torque(y, phi_hat, eta, gains: GainSet) -> np.ndarray:
    """Adaptive sliding-mode torque command."""
    k1 = np.asarray(gains.k1)
    k2 = np.asarray(gains.k2)
    return y @ phi_hat + k1 * eta + k2 * signum(eta, gains.epsilon)


def adaptation_rate(y, eta, lam) -> np.ndarray:
    """Time derivative of the parameter estimate: Lambda Y^T eta."""
    return np.asarray(lam) * (np.asarray(y).T @ np.asarray(eta))


def pd_torque(dq, dq_dot, kp, kd, gravity) -> np.ndarray:
    """PD feedback on the tracking error plus gravity compensation."""
    return np.asarray(kp) * np.asarray(dq) + np.asarray(kd) * np.asarray(dq_dot) + gravity
