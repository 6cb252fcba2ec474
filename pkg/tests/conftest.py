import time
from functools import lru_cache

import numpy as np
import pytest

from charvar.sampling import sample_batch
from charvar.words import Presentation

SEED = 20240501
SAMPLING_SECONDS: dict[tuple, float] = {}


@lru_cache(maxsize=None)
def cached_batch(kind: str, size: int, n: int, samples: int, epsilon=None, seed: int = SEED):
    p = Presentation(kind, size)
    t0 = time.perf_counter()
    batch = sample_batch(p, n, samples, seed, epsilon=epsilon)
    SAMPLING_SECONDS[(kind, size, n, samples, epsilon, seed)] = time.perf_counter() - t0
    return batch


def surface_batch(genus, n, samples, epsilon, seed=SEED):
    """Prefix of a larger cached batch when one exists, so expensive draws are shared."""
    return cached_batch("surface", genus, n, samples, epsilon, seed)


@pytest.fixture(scope="session")
def g2n2_batch():
    return cached_batch("surface", 2, 2, 5000, 0.2).head(1000)


@pytest.fixture(scope="session")
def g2n2():
    return Presentation.surface(2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
