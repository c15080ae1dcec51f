import math
import warnings

import numpy as np
import pytest

from fairgeom.examples import example_prior
from fairgeom.geometry import compute_w_matrices


@pytest.fixture
def prior():
    return example_prior()


@pytest.fixture
def w(prior):
    return compute_w_matrices(prior)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


@pytest.fixture(autouse=True)
def _quiet_epsilon_warnings():
    from fairgeom.errors import EpsilonOutOfRange

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EpsilonOutOfRange)
        yield


def loop_mi(p_ab):
    """Direct double sum, kept independent of the library path."""
    p_a = [sum(row) for row in p_ab]
    p_b = [sum(p_ab[i][j] for i in range(len(p_ab))) for j in range(len(p_ab[0]))]
    total = 0.0
    for i, row in enumerate(p_ab):
        for j, v in enumerate(row):
            if v > 0:
                total += v * math.log(v / (p_a[i] * p_b[j]))
    return total


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
