import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import bloch
from qexponents import DegenerateSupportError, ValidationError, make_pair
from qexponents.finite_n import random_density
from qexponents.states import (
    phi,
    phi_prime,
    phi_second,
    phi_tilde,
    relative_entropy,
    trace_power_product,
)

S = np.linspace(0.0, 1.0, 11)


def test_density_validation():
    with pytest.raises(ValidationError, match="trace"):
        make_pair(np.eye(2), np.eye(2) / 2)
    with pytest.raises(ValidationError, match="negative"):
        make_pair(np.diag([1.2, -0.2]), np.eye(2) / 2)
    with pytest.raises(ValidationError):
        make_pair(np.eye(2) / 2, np.eye(3) / 3)


def test_classical_values(commuting):
    p, q = (0.9, 0.1), (0.5, 0.5)
    for s in S:
        assert math.isclose(phi(s, commuting), oracles.phi_c(s, p, q), abs_tol=1e-13)
        assert math.isclose(phi_tilde(s, commuting), oracles.phi_c(s, p, q), abs_tol=1e-13)
    assert math.isclose(relative_entropy(commuting), oracles.kl(p, q), rel_tol=1e-13)
    assert commuting.commuting and commuting.support_ok


def test_endpoints(noncommuting):
    assert abs(phi(0.0, noncommuting)) < 1e-14
    assert abs(phi(1.0, noncommuting)) < 1e-14
    assert math.isclose(-phi_prime(0.0, noncommuting), relative_entropy(noncommuting), rel_tol=1e-12)


def test_vectorised_matches_scalar(noncommuting):
    vec = phi(S, noncommuting)
    assert vec.shape == S.shape
    np.testing.assert_allclose(vec, [phi(float(s), noncommuting) for s in S], atol=1e-15)


def test_pure_state_closed_form(pure_plus):
    # rho = |+><+|, sigma = I/2: Tr rho sigma^s = 2^-s, D = log 2
    for s in S:
        assert math.isclose(phi(s, pure_plus), -s * math.log(2), abs_tol=1e-13)
    assert math.isclose(relative_entropy(pure_plus), math.log(2), rel_tol=1e-13)


def test_support_violation():
    pair = make_pair(np.eye(2) / 2, np.diag([1.0, 0.0]))
    assert not pair.support_ok
    assert relative_entropy(pair) == math.inf


def test_orthogonal_supports():
    pair = make_pair(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    with pytest.raises(DegenerateSupportError):
        phi(0.5, pair)


def test_s_range(noncommuting):
    for bad in (-0.1, 1.1, float("nan")):
        with pytest.raises(ValueError):
            phi(bad, noncommuting)


def test_derivatives_by_finite_differences(generic):
    h = 1e-5
    for s in (0.1, 0.3, 0.5, 0.8):
        fd1 = (phi(s + h, generic) - phi(s - h, generic)) / (2 * h)
        fd2 = (phi(s + h, generic) - 2 * phi(s, generic) + phi(s - h, generic)) / h ** 2
        assert math.isclose(phi_prime(s, generic), fd1, abs_tol=1e-8)
        assert math.isclose(phi_second(s, generic), fd2, abs_tol=1e-4)


def test_identical_states():
    rho = bloch(0.3, 0.1, -0.2)
    pair = make_pair(rho, rho)
    assert relative_entropy(pair) == 0.0
    np.testing.assert_allclose(phi(S, pair), 0.0, atol=1e-14)


def test_trace_power_product_direct(noncommuting):
    def mpow(m, t):
        w, v = np.linalg.eigh(m)
        return (v * w ** t) @ v.conj().T
    for s in (0.2, 0.7):
        ref = np.trace(mpow(noncommuting.rho, 1 - s) @ mpow(noncommuting.sigma, s)).real
        assert math.isclose(trace_power_product(s, noncommuting), ref, rel_tol=1e-13)


def test_swapped(noncommuting):
    sw = noncommuting.swapped()
    for s in (0.2, 0.6):
        assert math.isclose(phi(s, sw), phi(1 - s, noncommuting), abs_tol=1e-14)


def _random_pair(seed, d, rank=None):
    rng = np.random.default_rng(seed)
    return make_pair(random_density(rng, d, rank), random_density(rng, d))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.integers(2, 4))
def test_phi_convex_and_nonpositive(seed, d):
    pair = _random_pair(seed, d)
    vals = phi(S, pair)
    assert np.all(vals <= 1e-12)
    assert np.all(np.diff(vals, 2) >= -1e-12)
    assert phi_second(0.5, pair) >= -1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.integers(2, 4), st.floats(0.0, 1.0))
def test_phi_tilde_dominates_phi(seed, d, s):
    pair = _random_pair(seed, d)
    assert phi_tilde(s, pair) >= phi(s, pair) - 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.integers(2, 4))
def test_relative_entropy_nonnegative_and_unitarily_invariant(seed, d):
    rng = np.random.default_rng(seed)
    pair = make_pair(random_density(rng, d), random_density(rng, d))
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    u, _ = np.linalg.qr(g)
    rot = make_pair(u @ pair.rho @ u.conj().T, u @ pair.sigma @ u.conj().T)
    assert relative_entropy(pair) >= 0
    assert math.isclose(relative_entropy(pair), relative_entropy(rot), rel_tol=1e-9, abs_tol=1e-12)
    assert math.isclose(phi(0.4, pair), phi(0.4, rot), abs_tol=1e-11)
