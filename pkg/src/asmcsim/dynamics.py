"""Closed-form rigid-body dynamics of a planar two-link revolute manipulator.

The model is the point-mass form: each link's mass acts at its tip, so the
inertia terms reduce to combinations of m*l^2.  All angles are in radians,
torques in Nm.  The Coriolis matrix uses the Christoffel factorization, which
makes d/dt(M) - 2*Vm skew-symmetric.
"""

from dataclasses import dataclass
from math import cos, sin

import numpy as np

DEFAULT_GRAVITY = 9.807


class DegenerateInertiaError(RuntimeError):
    """Inertia matrix is numerically singular (misconfigured plant)."""


@dataclass(frozen=True)
class RobotParams:
    """Masses (kg), link lengths (m) and gravity (m/s^2) of the arm."""

    m1: float = 0.5
    m2: float = 0.4
    l1: float = 0.6
    l2: float = 0.5
    g: float = DEFAULT_GRAVITY

    def __post_init__(self):
        for name in ("m1", "m2", "l1", "l2", "g"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"robot parameter {name} must be positive")


@dataclass(frozen=True)
class PlantState:
    """Joint angles (rad) and velocities (rad/s) at one instant."""

    q: np.ndarray
    qdot: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q", np.asarray(self.q, dtype=float))
        object.__setattr__(self, "qdot", np.asarray(self.qdot, dtype=float))
        if self.q.shape != (2,) or self.qdot.shape != (2,):
            raise ValueError("plant state must hold two joints")
        if not (np.isfinite(self.q).all() and np.isfinite(self.qdot).all()):
            raise ValueError("plant state must be finite")


def mass_matrix(p: RobotParams, q) -> np.ndarray:
    """Symmetric positive-definite inertia matrix M(q)."""
    c2 = cos(q[1])
    a = (p.m1 + p.m2) * p.l1 * p.l1
    b = p.m2 * p.l2 * p.l2
    c = p.m2 * p.l1 * p.l2
    m12 = b + c * c2
    return np.array([[a + b + 2.0 * c * c2, m12], [m12, b]])


def coriolis_matrix(p: RobotParams, q, qdot) -> np.ndarray:
    """Coriolis-centripetal matrix Vm(q, qdot), Christoffel form."""
    h = p.m2 * p.l1 * p.l2 * sin(q[1])
    return np.array([[-h * qdot[1], -h * (qdot[0] + qdot[1])], [h * qdot[0], 0.0]])


def gravity_vector(p: RobotParams, q) -> np.ndarray:
    """Joint torques (Nm) due to gravity at configuration q."""
    g1 = (p.m1 + p.m2) * p.g * p.l1 * cos(q[0])
    g2 = p.m2 * p.g * p.l2 * cos(q[0] + q[1])
    return np.array([g1 + g2, g2])


def forward_dynamics(p: RobotParams, q, qdot, tau_net) -> np.ndarray:
    """Joint accelerations from net torque: solves M(q) qdd = tau_net - Vm qdot - G."""
    m = mass_matrix(p, q)
    rhs = tau_net - coriolis_matrix(p, q, qdot) @ qdot - gravity_vector(p, q)
    return solve_inertia(m, rhs)


def solve_inertia(m: np.ndarray, rhs) -> np.ndarray:
    """Solve the 2x2 inertia system in closed form."""
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det) < 1e-12:
        raise DegenerateInertiaError(f"inertia matrix determinant {det:g} below 1e-12")
    x0 = (m[1, 1] * rhs[0] - m[0, 1] * rhs[1]) / det
    x1 = (m[0, 0] * rhs[1] - m[1, 0] * rhs[0]) / det
    return np.array([x0, x1])
