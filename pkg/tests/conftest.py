import time

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from cvcorr.random_states import SamplerSpec, random_state, scatter, stream

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []

SCATTER_SPEC = SamplerSpec(count=1000, seed=2016)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance():
    """Record one pass/fail line per criterion; printed in the terminal summary."""

    def record(tag, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] {tag}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert passed, line

    return record


@pytest.fixture(scope="session")
def scatter_run():
    """The 1000-state scatter, computed once per session: ``(records, seconds)``."""
    t0 = time.perf_counter()
    records = scatter(SCATTER_SPEC)
    return records, time.perf_counter() - t0


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def state_from_seed(seed, nu_max=5.0, squeeze_max=1.5):
    return random_state(stream(seed, 0), nu_max=nu_max, squeeze_max=squeeze_max)
