"""Deterministic fixed-step closed-loop simulation of plant + controller.

One run integrates the 7-dimensional joint state (q, qdot, phi_hat) with the
classical 4th-order Runge-Kutta scheme.  The commanded torque and both
disturbance torques are computed at the start of each step and held constant
across it (zero-order hold); the adaptation rate is re-evaluated at every
stage so the estimate integrates at full order.  A diagnostic mode that
re-evaluates the control law at every stage is available for convergence
studies of smooth configurations.

Everything is deterministic given the config, including the disturbance
stream: runs with equal configs produce bit-identical traces.
"""

import hashlib
import logging
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .controller import (
    GainSet,
    adaptation_rate,
    control_torque,
    filtered_error,
    pd_torque,
    regressor,
    true_params,
)
from .disturbances import (
    RNG_NAME,
    PayloadProfile,
    VibrationConfig,
    VibrationGenerator,
    default_payload_profile,
    payload_torque,
)
from .dynamics import (
    RobotParams,
    coriolis_matrix,
    forward_dynamics,
    gravity_vector,
    mass_matrix,
)
from .trajectory import TrajectoryParams, desired

log = logging.getLogger(__name__)

CONTROLLER_KINDS = ("asmc", "pd")
_KIND_ALIASES = {
    "asmc": "asmc",
    "adaptive-smc": "asmc",
    "pd": "pd",
    "pd-baseline": "pd",
}

DIVERGENCE_LIMIT = 1e6


class DivergenceError(RuntimeError):
    """A state component left the sane range; the closed loop blew up."""


def canonical_controller_kind(name: str) -> str:
    try:
        return _KIND_ALIASES[name.strip().lower()]
    except KeyError:
        raise ValueError(
            f"unknown controller kind {name!r}; expected one of {sorted(_KIND_ALIASES)}"
        ) from None


@dataclass(frozen=True)
class SimConfig:
    duration: float = 20.0
    step: float = 2.5e-4
    robot: RobotParams = field(default_factory=RobotParams)
    gains: GainSet = field(default_factory=GainSet)
    trajectory: TrajectoryParams = field(default_factory=TrajectoryParams)
    vibration: VibrationConfig = field(default_factory=VibrationConfig)
    payload: PayloadProfile = field(default_factory=default_payload_profile)
    q0_deg: tuple[float, float] | None = None
    qdot0_deg: tuple[float, float] = (0.0, 0.0)
    phi_hat0: tuple[float, float, float] = (0.0, 0.0, 0.0)
    controller: str = "asmc"
    log_decimation: int = 1
    hold_torque: bool = True

    def __post_init__(self):
        object.__setattr__(self, "controller", canonical_controller_kind(self.controller))
        if self.duration < 0.0:
            raise ValueError("duration must be non-negative")
        if not 0.0 < self.step <= self.vibration.sample_period:
            raise ValueError("step must be positive and at most the noise sample period")
        ratio = self.vibration.sample_period / self.step
        if abs(ratio - round(ratio)) > 1e-9:
            raise ValueError("noise sample_period must be an integer multiple of step")
        if self.log_decimation < 1:
            raise ValueError("log_decimation must be at least 1")

    def initial_state(self) -> np.ndarray:
        """Initial 7-vector [q, qdot, phi_hat]; q defaults to the reference start."""
        if self.q0_deg is None:
            q0 = desired(self.trajectory, 0.0).qd
        else:
            q0 = np.radians(self.q0_deg)
        qd0 = np.radians(self.qdot0_deg)
        return np.concatenate([q0, qd0, np.asarray(self.phi_hat0, dtype=float)])


def config_digest(cfg: SimConfig) -> str:
    """Stable hash of every value that influences the produced trace."""
    return hashlib.sha256(repr(cfg).encode()).hexdigest()[:16]


@dataclass
class Trace:
    """Column-oriented log of one run.  Angles in radians, torques in Nm."""

    t: np.ndarray
    q: np.ndarray
    qdot: np.ndarray
    qd: np.ndarray
    dq: np.ndarray
    eta: np.ndarray
    tau: np.ndarray
    tau_v: np.ndarray
    tau_l: np.ndarray
    phi_hat: np.ndarray
    lyapunov: np.ndarray
    config: SimConfig
    meta: dict

    def __len__(self) -> int:
        return self.t.shape[0]


def rk4_step(f, t: float, x: np.ndarray, h: float) -> np.ndarray:
    """One classical Runge-Kutta step of dx/dt = f(t, x)."""
    k1 = f(t, x)
    k2 = f(t + 0.5 * h, x + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, x + 0.5 * h * k2)
    k4 = f(t + h, x + h * k3)
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def lyapunov_value(eta, phi_tilde, m, lam) -> float:
    """Energy-like monitor: 0.5 eta' M eta + 0.5 phi_tilde' inv(Lambda) phi_tilde."""
    eta = np.asarray(eta, dtype=float)
    phi_tilde = np.asarray(phi_tilde, dtype=float)
    return 0.5 * float(eta @ (m @ eta)) + 0.5 * float(phi_tilde @ (phi_tilde / np.asarray(lam)))


def validate_switching_gain(cfg: SimConfig) -> np.ndarray:
    """Worst-case |combined disturbance| per joint; warns if k2 does not dominate it."""
    lo, hi = cfg.payload.extrema()
    worst = np.maximum(
        np.abs(np.asarray(cfg.vibration.clip_lo) + lo),
        np.asarray(cfg.vibration.clip_hi) + hi,
    )
    k2 = np.asarray(cfg.gains.k2)
    if np.any(k2 <= worst):
        log.warning(
            "switching gain k2=%s does not dominate the disturbance bound %s; "
            "the descent guarantee is void",
            k2.tolist(),
            np.round(worst, 4).tolist(),
        )
    return worst


def run(cfg: SimConfig) -> Trace:
    """Simulate the closed loop and return the decimated trace."""
    validate_switching_gain(cfg)

    h = cfg.step
    n_steps = int(round(cfg.duration / h)) if cfg.duration > 0.0 else 0
    decim = cfg.log_decimation
    n_rows = n_steps // decim + 1

    robot = cfg.robot
    gains = cfg.gains
    traj = cfg.trajectory
    sigma = np.asarray(gains.sigma)
    lam = np.asarray(gains.lam)
    l1, l2, g = robot.l1, robot.l2, robot.g
    phi_true = true_params(robot)
    adaptive = cfg.controller == "asmc"

    vib = VibrationGenerator(cfg.vibration)

    cols = {
        "t": np.empty(n_rows),
        "q": np.empty((n_rows, 2)),
        "qdot": np.empty((n_rows, 2)),
        "qd": np.empty((n_rows, 2)),
        "dq": np.empty((n_rows, 2)),
        "eta": np.empty((n_rows, 2)),
        "tau": np.empty((n_rows, 2)),
        "tau_v": np.empty((n_rows, 2)),
        "tau_l": np.empty((n_rows, 2)),
        "phi_hat": np.empty((n_rows, 3)),
        "lyapunov": np.empty(n_rows),
    }

    def command(t, x):
        """Torque and the error signals at state x, time t."""
        q, qdot, phi_hat = x[0:2], x[2:4], x[4:7]
        des = desired(traj, t)
        dq = des.qd - q
        dq_dot = des.qd_dot - qdot
        eta = filtered_error(dq, dq_dot, sigma)
        if adaptive:
            y = regressor(q, qdot, des.qd_dot, des.qd_ddot, dq, dq_dot, sigma, l1, l2, g)
            tau = control_torque(y, phi_hat, eta, gains)
        else:
            tau = pd_torque(dq, dq_dot, gains.kp, gains.kd, gravity_vector(robot, q))
        return tau, des, dq, dq_dot, eta

    def deriv_held(t, x, tau_net):
        """RHS with the torque held; adaptation re-evaluated per stage."""
        q, qdot = x[0:2], x[2:4]
        qddot = forward_dynamics(robot, q, qdot, tau_net)
        if adaptive:
            des = desired(traj, t)
            dq = des.qd - q
            dq_dot = des.qd_dot - qdot
            eta = filtered_error(dq, dq_dot, sigma)
            y = regressor(q, qdot, des.qd_dot, des.qd_ddot, dq, dq_dot, sigma, l1, l2, g)
            phi_dot = adaptation_rate(y, eta, lam)
        else:
            phi_dot = np.zeros(3)
        return np.concatenate([qdot, qddot, phi_dot])

    x = cfg.initial_state()
    row = 0
    for i in range(n_steps + 1):
        t = i * h
        tau, des, dq, dq_dot, eta = command(t, x)
        tau_v = vib.torque(t)
        tau_l = payload_torque(cfg.payload, t)

        if i % decim == 0:
            cols["t"][row] = t
            cols["q"][row] = x[0:2]
            cols["qdot"][row] = x[2:4]
            cols["qd"][row] = des.qd
            cols["dq"][row] = dq
            cols["eta"][row] = eta
            cols["tau"][row] = tau
            cols["tau_v"][row] = tau_v
            cols["tau_l"][row] = tau_l
            cols["phi_hat"][row] = x[4:7]
            cols["lyapunov"][row] = lyapunov_value(
                eta, phi_true - x[4:7], mass_matrix(robot, x[0:2]), lam
            )
            row += 1
        if i == n_steps:
            break

        if cfg.hold_torque:
            tau_net = tau - tau_v - tau_l
            x = rk4_step(lambda ts, xs: deriv_held(ts, xs, tau_net), t, x, h)
        else:
            x = rk4_step(
                lambda ts, xs: deriv_held(ts, xs, command(ts, xs)[0] - tau_v - tau_l),
                t,
                x,
                h,
            )

        if not np.all(np.abs(x) < DIVERGENCE_LIMIT):
            worst = int(np.argmax(np.abs(x)))
            raise DivergenceError(
                f"state component {worst} reached {x[worst]:.3g} at t={t + h:.4f} s"
            )

    meta = {
        "version": __version__,
        "seed": cfg.vibration.seed,
        "rng": RNG_NAME,
        "config": config_digest(cfg),
        "controller": cfg.controller,
    }
    return Trace(config=cfg, meta=meta, **cols)


def with_seed(cfg: SimConfig, seed: int) -> SimConfig:
    """Copy of cfg with the disturbance seed replaced."""
    return replace(cfg, vibration=replace(cfg.vibration, seed=seed))
