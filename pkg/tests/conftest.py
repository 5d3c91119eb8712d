import math

import numpy as np
import pytest

from qexponents import make_pair
from qexponents.finite_n import random_density

# criterion number -> (passed, detail); filled by the acceptance module
ACCEPTANCE = {}


def bloch(x, y, z):
    return 0.5 * np.array([[1 + z, x - 1j * y], [x + 1j * y, 1 - z]])


def rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def commuting_pair():
    return make_pair(np.diag([0.9, 0.1]), np.diag([0.5, 0.5]))


def noncommuting_pair():
    return make_pair(bloch(0.5, 0.2, 0.5), bloch(0.0, 0.0, -0.3))


def near_commuting_pair():
    u = rotation(0.05)
    return make_pair(u @ np.diag([0.8, 0.2]) @ u.T, np.diag([0.4, 0.6]))


def generic_pair(seed=7, dim=3):
    rng = np.random.default_rng(seed)
    return make_pair(random_density(rng, dim), random_density(rng, dim))


def pure_plus_pair():
    plus = np.full((2, 2), 0.5)
    return make_pair(plus, np.eye(2) / 2)


@pytest.fixture
def commuting():
    return commuting_pair()


@pytest.fixture
def noncommuting():
    return noncommuting_pair()


@pytest.fixture
def near_commuting():
    return near_commuting_pair()


@pytest.fixture
def generic():
    return generic_pair()


@pytest.fixture
def pure_plus():
    return pure_plus_pair()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
