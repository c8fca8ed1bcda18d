import os
import time

import pytest

from asmcsim.engine import SimConfig, run


@pytest.fixture(scope="session")
def default_run():
    """Full default scenario trace plus its wall-clock runtime in seconds."""
    cfg = SimConfig()
    t0 = time.perf_counter()
    trace = run(cfg)
    return trace, time.perf_counter() - t0


@pytest.fixture(scope="session")
def seed_sweep():
    """Both controllers over seeds 0..4 on the default scenario."""
    from asmcsim.cli import sweep

    jobs = min(4, os.cpu_count() or 1)
    return sweep(SimConfig(), seeds=[0, 1, 2, 3, 4], jobs=jobs)
