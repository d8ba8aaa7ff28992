import sys
import numpy as np
import pytest
from hypothesis import strategies as st

from fmgraph.sampling import GeneratorConfig, random_batch, random_measure


def measures_strategy(n_min: int = 2, n_max: int = 5):
    """Hypothesis strategy drawing seeded random capacities."""
    return st.builds(
        lambda n, seed: random_measure(GeneratorConfig(n, seed)),
        st.integers(n_min, n_max),
        st.integers(0, 2**32 - 1),
    )


@pytest.fixture
def batch():
    def make(n, count, seed=0):
        return random_batch(GeneratorConfig(n, seed, count))

    return make


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
