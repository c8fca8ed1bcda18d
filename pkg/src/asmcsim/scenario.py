"""Scenario file loading: INI sections mirroring the simulation config.

Angles in the file are in degrees.  Unknown sections or keys are an error so
typos cannot silently fall back; missing keys take the built-in defaults and
each applied default is echoed to the log.
"""

import configparser
import logging
from dataclasses import replace
from importlib import resources
from pathlib import Path

from .controller import GainSet
from .disturbances import PayloadProfile, PayloadSegment, VibrationConfig
from .dynamics import RobotParams
from .engine import SimConfig, canonical_controller_kind
from .trajectory import TrajectoryParams

log = logging.getLogger(__name__)


class ScenarioError(Exception):
    """The scenario file is malformed or holds invalid values."""


_SECTION_KEYS = {
    "robot": {"m1", "m2", "l1", "l2", "g"},
    "gains": {"k1", "k2", "sigma", "lambda", "epsilon", "kp", "kd"},
    "trajectory": {"amp_deg", "freq", "decay"},
    "vibration": {"mean", "variance", "sample_period", "clip_lo", "clip_hi", "seed"},
    "payload": {"t_start", "t_end", "torque"},
    "sim": {
        "duration",
        "step",
        "q0_deg",
        "qdot0_deg",
        "phi_hat0",
        "controller",
        "log_decimation",
    },
}


def default_scenario_path() -> Path:
    """The bundled scenario with every key at its built-in default."""
    return Path(resources.files("asmcsim") / "scenarios" / "paper_default.ini")


def _floats(raw: str, count: int, where: str) -> tuple[float, ...]:
    parts = [p.strip() for p in raw.replace(",", " ").split()]
    try:
        values = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ScenarioError(f"{where}: {exc}") from exc
    if len(values) != count:
        raise ScenarioError(f"{where}: expected {count} numbers, got {len(values)}")
    return values


class _Section:
    """One INI section with known-key checking and default echoing."""

    def __init__(self, name: str, items: dict, known: set):
        self.name = name
        self.items = items
        unknown = set(items) - known
        if unknown:
            raise ScenarioError(f"[{name}] unknown key '{sorted(unknown)[0]}'")

    def get(self, key, default, parse):
        if key not in self.items:
            log.info("scenario: [%s] %s defaults to %s", self.name, key, default)
            return default
        return parse(self.items[key], f"[{self.name}] {key}")

    def required(self, key, count):
        if key not in self.items:
            raise ScenarioError(f"[{self.name}] missing required key '{key}'")
        values = _floats(self.items[key], count, f"[{self.name}] {key}")
        return values if count > 1 else values[0]

    def floats(self, key, count, default):
        return self.get(key, default, lambda raw, where: _floats(raw, count, where))

    def scalar(self, key, default):
        return self.get(key, default, lambda raw, where: _floats(raw, 1, where)[0])

    def integer(self, key, default):
        def parse(raw, where):
            try:
                return int(raw)
            except ValueError as exc:
                raise ScenarioError(f"{where}: {exc}") from exc

        return self.get(key, default, parse)


def load_scenario(
    path,
    seed: int | None = None,
    controller: str | None = None,
    log_decimation: int | None = None,
) -> SimConfig:
    """Parse a scenario file into a SimConfig, applying CLI overrides."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario: {exc}") from exc
    except configparser.Error as exc:
        raise ScenarioError(f"scenario parse error: {exc}") from exc

    sections = {}
    payload_sections = []
    for name in parser.sections():
        items = dict(parser.items(name))
        if name.startswith("payload."):
            payload_sections.append(_Section(name, items, _SECTION_KEYS["payload"]))
        elif name in _SECTION_KEYS:
            sections[name] = _Section(name, items, _SECTION_KEYS[name])
        else:
            raise ScenarioError(f"unknown section [{name}]")

    empty = {name: _Section(name, {}, _SECTION_KEYS[name]) for name in _SECTION_KEYS}

    try:
        sec = sections.get("robot", empty["robot"])
        robot = RobotParams(
            m1=sec.scalar("m1", 0.5),
            m2=sec.scalar("m2", 0.4),
            l1=sec.scalar("l1", 0.6),
            l2=sec.scalar("l2", 0.5),
            g=sec.scalar("g", 9.807),
        )

        sec = sections.get("gains", empty["gains"])
        gains = GainSet(
            k1=sec.floats("k1", 2, (80.0, 60.0)),
            k2=sec.floats("k2", 2, (2.0, 1.5)),
            sigma=sec.floats("sigma", 2, (5.0, 5.0)),
            lam=sec.floats("lambda", 3, (1.0, 1.0, 1.0)),
            epsilon=sec.scalar("epsilon", 0.0),
            kp=sec.floats("kp", 2, (400.0, 300.0)),
            kd=sec.floats("kd", 2, (80.0, 60.0)),
        )

        sec = sections.get("trajectory", empty["trajectory"])
        traj = TrajectoryParams(
            amp_deg=sec.floats("amp_deg", 2, (114.95, 85.94)),
            freq=sec.floats("freq", 2, (1.5, 2.0)),
            decay=sec.scalar("decay", 0.03),
        )

        sec = sections.get("vibration", empty["vibration"])
        vibration = VibrationConfig(
            mean=sec.floats("mean", 2, (0.0, 0.0)),
            variance=sec.floats("variance", 2, (0.01, 0.015)),
            sample_period=sec.scalar("sample_period", 0.01),
            clip_lo=sec.floats("clip_lo", 2, (-0.2873, -0.3518)),
            clip_hi=sec.floats("clip_hi", 2, (0.2946, 0.3608)),
            seed=sec.integer("seed", 0),
        )
        if seed is not None:
            vibration = replace(vibration, seed=seed)

        if payload_sections:
            segments = tuple(
                PayloadSegment(
                    t_start=sec.required("t_start", 1),
                    t_end=sec.required("t_end", 1),
                    torque=sec.required("torque", 2),
                )
                for sec in payload_sections
            )
            payload = PayloadProfile(segments)
        else:
            log.info("scenario: payload defaults to the two built-in steps")
            payload = PayloadProfile(
                (
                    PayloadSegment(4.0, 8.0, (0.65, 0.75)),
                    PayloadSegment(8.0, 10.0, (0.15, 0.25)),
                )
            )

        sec = sections.get("sim", empty["sim"])
        phi0_raw = sec.items.get("phi_hat0", "").strip().lower()
        if phi0_raw == "true":
            from .controller import true_params

            phi_hat0 = tuple(true_params(robot))
            log.info("scenario: phi_hat0 set to the plant's true parameters")
        else:
            phi_hat0 = sec.floats("phi_hat0", 3, (0.0, 0.0, 0.0))

        q0_raw = sec.items.get("q0_deg")
        q0_deg = _floats(q0_raw, 2, "[sim] q0_deg") if q0_raw is not None else None
        if q0_raw is None:
            log.info("scenario: [sim] q0_deg defaults to the reference start")

        kind = sec.get("controller", "asmc", lambda raw, where: raw.strip())
        if controller is not None:
            kind = controller
        try:
            kind = canonical_controller_kind(kind)
        except ValueError as exc:
            raise ScenarioError(f"[sim] controller: {exc}") from exc

        cfg = SimConfig(
            duration=sec.scalar("duration", 20.0),
            step=sec.scalar("step", 2.5e-4),
            robot=robot,
            gains=gains,
            trajectory=traj,
            vibration=vibration,
            payload=payload,
            q0_deg=q0_deg,
            qdot0_deg=sec.floats("qdot0_deg", 2, (0.0, 0.0)),
            phi_hat0=phi_hat0,
            controller=kind,
            log_decimation=(
                log_decimation
                if log_decimation is not None
                else sec.integer("log_decimation", 1)
            ),
        )
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc
    return cfg
