import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from qexponents import (
    chernoff_bound,
    critical_s,
    hoeffding_bound,
    hoeffding_curve,
    make_pair,
    oh_bound,
    oh_curve,
    phi,
    phi_prime,
    relative_entropy,
    stein_exponent,
)
from qexponents.exponents import golden_max, hoeffding_optimum, legendre_residuals
from qexponents.finite_n import random_density


def brute_hoeffding(r, pair, points=100_001):
    s = np.linspace(0.0, 1.0 - 1e-6, points)
    return float(np.max((-s * r - phi(s, pair)) / (1.0 - s)))


def test_golden_max():
    x, v = golden_max(lambda t: -(t - 0.3) ** 2, 0.0, 1.0)
    assert abs(x - 0.3) < 1e-7 and v <= 0


def test_stein_is_relative_entropy(noncommuting):
    assert stein_exponent(noncommuting) == relative_entropy(noncommuting)


def test_chernoff_against_brute_force(generic):
    s = np.linspace(0, 1, 100_001)
    value, s_star = chernoff_bound(generic)
    assert math.isclose(value, float(np.max(-phi(s, generic))), abs_tol=1e-9)
    assert 0 < s_star < 1


@pytest.mark.parametrize("r", [0.0, 0.01, 0.05, 0.1, 0.3])
def test_hoeffding_against_brute_force(r, generic, noncommuting):
    for pair in (generic, noncommuting):
        assert hoeffding_bound(r, pair) >= brute_hoeffding(r, pair) - 1e-12
        assert math.isclose(hoeffding_bound(r, pair), brute_hoeffding(r, pair), abs_tol=1e-8)


def test_hoeffding_zero_beyond_relative_entropy(noncommuting):
    d = relative_entropy(noncommuting)
    assert abs(hoeffding_bound(1.01 * d, noncommuting)) < 1e-14
    assert hoeffding_bound(0.0, noncommuting) > 0


def test_hoeffding_pure_state_diverges(pure_plus):
    opt = hoeffding_optimum(0.1, pure_plus)
    assert opt.diverges and opt.value == math.inf
    # rates above log 2 give a finite (zero) bound
    assert abs(hoeffding_bound(1.0, pure_plus)) < 1e-14


def test_negative_rate_rejected(noncommuting):
    with pytest.raises(ValueError):
        hoeffding_bound(-0.1, noncommuting)


def test_critical_s_round_trip(generic):
    # the rate whose optimiser is s0 is (s0 - 1) phi'(s0) - phi(s0)
    for s0 in (0.2, 0.4, 0.7):
        r = (s0 - 1) * phi_prime(s0, generic) - phi(s0, generic)
        assert math.isclose(critical_s(r, generic), s0, abs_tol=1e-8)


def test_legendre_boundary_not_applicable(noncommuting):
    chk = legendre_residuals(10.0, noncommuting)
    assert not chk.applicable and abs(chk.bound) < 1e-14


def test_curves_monotone(generic):
    grid = np.linspace(0.0, 0.5, 26)
    hc = hoeffding_curve(grid, generic)
    oc = oh_curve(grid, generic)
    assert np.all(np.diff(hc.values) <= 1e-12)
    assert np.all(hc.values >= oc.values - 1e-9)
    assert len(list(hc.rows())) == 26
    with pytest.raises(ValueError):
        hoeffding_curve([0.2, 0.1], generic)


def test_classical_hoeffding_oracle(commuting):
    for r in (0.01, 0.1, 0.2):
        assert math.isclose(hoeffding_bound(r, commuting),
                            oracles.hoeffding_c(r, (0.9, 0.1), (0.5, 0.5)), abs_tol=1e-9)
        assert math.isclose(oh_bound(r, commuting), hoeffding_bound(r, commuting), abs_tol=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.floats(0.0, 0.4))
def test_dominance_property(seed, r):
    rng = np.random.default_rng(seed)
    pair = make_pair(random_density(rng, 2), random_density(rng, 2))
    assert hoeffding_bound(r, pair) >= oh_bound(r, pair) - 1e-9
    assert 0.0 <= chernoff_bound(pair)[0] <= relative_entropy(pair) + 1e-12
