from __future__ import annotations

import numpy as np
import pytest

from opweak.sampling import ginibre, make_rng, sample_gue

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return make_rng(2024)


def random_hermitian(n, seed):
    return sample_gue(n, seed)


def random_complex(n, seed):
    return ginibre(n, seed)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def assert_close(a, b, tol):
    assert np.max(np.abs(np.asarray(a) - np.asarray(b)), initial=0.0) <= tol
