import numpy as np
import pytest

from marginkernel.dataset import Dataset, Geometry


def random_dataset(rng, n, d, sphere=False):
    x = rng.standard_normal((n, d))
    if sphere:
        x /= np.linalg.norm(x, axis=1, keepdims=True)
    y = rng.choice([-1.0, 1.0], size=n)
    if n >= 2:
        y[0], y[1] = 1.0, -1.0
    return Dataset(x, y, Geometry.SPHERE if sphere else Geometry.EUCLIDEAN)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, repeated at the end of the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
