import time

import numpy as np
import pytest

from atm_bss import MixingParams, SourceSpec, TrainConfig, generate_sources, mix, train

REF_MIXING = MixingParams(0.1, 0.2, 2.0)


def reference_data(n=2000, seed=7, spec=SourceSpec(), params=REF_MIXING):
    s = generate_sources(n, spec, seed)
    return s, mix(s, params)


@pytest.fixture(scope="session")
def reference():
    """k=2, a=(0.1, 0.2), uniform(0.1, 1.0) sources, n=2000, seed=7."""
    return reference_data()


@pytest.fixture(scope="session")
def linear_data():
    return reference_data(params=MixingParams(0.2, 0.3, 1.0))


@pytest.fixture(scope="session")
def trained(reference):
    _, x = reference
    runs = {}
    for variant in ("corrected", "naive"):
        start = time.perf_counter()
        traj = train(x, TrainConfig(step_size=0.05, max_epochs=500, k=2.0, variant=variant))
        traj.elapsed = time.perf_counter() - start
        runs[variant] = traj
    return runs


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
