import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import bloch
from qexponents import DimensionGuardError, ValidationError
from qexponents.channel import (
    block_operators,
    channel_exponent,
    finite_blocklength_check,
    holevo_quantity,
    input_distribution,
    make_channel,
    optimize_input,
    phi_p,
    sigma_p,
)
from qexponents.finite_n import random_density

F = 0.1
W = np.array([[1 - F, F], [F, 1 - F]])


def bsc(w=W):
    return make_channel([np.diag(row) for row in w])


def orthogonal():
    return make_channel([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])


def random_channel(seed, k=3, d=2):
    rng = np.random.default_rng(seed)
    return make_channel([random_density(rng, d) for _ in range(k)]), rng.dirichlet(np.ones(k))


def test_validation():
    with pytest.raises(ValidationError):
        make_channel([np.eye(2) / 2, np.eye(3) / 3])
    with pytest.raises(ValidationError):
        make_channel([])
    with pytest.raises(ValidationError):
        input_distribution([0.5, 0.6], 2)
    with pytest.raises(ValidationError):
        input_distribution([1.2, -0.2], 2)
    with pytest.raises(ValueError):
        channel_exponent(-0.1, bsc(), [0.5, 0.5])


def test_sigma_p():
    rho = bloch(0.1, 0.2, 0.3)
    np.testing.assert_allclose(sigma_p(make_channel([rho]), [1.0]), rho)
    np.testing.assert_allclose(sigma_p(orthogonal(), [0.5, 0.5]), np.eye(2) / 2)
    ch, p = random_channel(1)
    assert np.trace(sigma_p(ch, p)).real == pytest.approx(1.0, abs=1e-12)


def test_block_operators():
    rho = bloch(0.1, 0.2, 0.3)
    r, s = block_operators(make_channel([rho]), [1.0])
    np.testing.assert_allclose(r, rho)
    np.testing.assert_allclose(s, rho)
    p = [0.3, 0.7]
    r, s = block_operators(bsc(), p)
    q = np.array(p) @ W
    np.testing.assert_allclose(np.diag(r).real, [0.3 * 0.9, 0.3 * 0.1, 0.7 * 0.1, 0.7 * 0.9])
    np.testing.assert_allclose(np.diag(s).real, [0.3 * q[0], 0.3 * q[1], 0.7 * q[0], 0.7 * q[1]])
    assert np.count_nonzero(r - np.diag(np.diag(r))) == 0


def test_phi_p_closed_forms():
    s = np.linspace(0, 1, 11)
    rho = bloch(0.1, 0.2, 0.3)
    np.testing.assert_allclose(phi_p(s, make_channel([rho, rho]), [0.4, 0.6]), 0.0, atol=1e-14)
    np.testing.assert_allclose(phi_p(s, orthogonal(), [0.5, 0.5]), -s * math.log(2), atol=1e-14)
    for p in ([0.5, 0.5], [0.2, 0.8]):
        q = np.array(p) @ W
        ref = [math.log(sum(p[x] * W[x, y] ** (1 - t) * q[y] ** t for x in range(2) for y in range(2)))
               for t in s]
        np.testing.assert_allclose(phi_p(s, bsc(), p), ref, atol=1e-13)


def test_exponent_trivial_cases():
    rho = bloch(0.1, 0.2, 0.3)
    assert channel_exponent(0.2, make_channel([rho, rho]), [0.5, 0.5]) == 0.0
    for a in np.linspace(0, 0.5, 6):
        assert channel_exponent(a, orthogonal(), [0.5, 0.5]) == pytest.approx(math.log(2) - a, abs=1e-9)


def test_exponent_bsc_oracle():
    chi = oracles.mutual_information(W, [0.5, 0.5])
    a = 0.5 * chi
    assert channel_exponent(a, bsc(), [0.5, 0.5]) == pytest.approx(
        oracles.channel_exponent_c(a, W, [0.5, 0.5]), abs=1e-6)


def test_exponent_convex_nonincreasing_and_vanishing():
    ch, p = random_channel(5)
    chi = holevo_quantity(ch, p)
    grid = np.linspace(0, 1.5 * chi, 31)
    vals = np.array([channel_exponent(a, ch, p) for a in grid])
    assert np.all(np.diff(vals) <= 1e-12)
    assert np.all(np.diff(vals, 2) >= -1e-8)
    assert all(v <= 1e-9 for a, v in zip(grid, vals) if a >= chi + 1e-6)
    assert vals[grid < 0.9 * chi].min() > 0


def test_holevo_quantity():
    rho = bloch(0.1, 0.2, 0.3)
    assert holevo_quantity(make_channel([rho, rho]), [0.5, 0.5]) == pytest.approx(0.0, abs=1e-14)
    assert holevo_quantity(orthogonal(), [0.5, 0.5]) == pytest.approx(math.log(2), abs=1e-13)
    ch, p = random_channel(2)
    h = 1e-6
    fd = -(phi_p(h, ch, p) - phi_p(0.0, ch, p)) / h
    assert holevo_quantity(ch, p) == pytest.approx(fd, abs=1e-5)


def test_optimize_input():
    rho = bloch(0.2, 0.0, 0.1)
    single = optimize_input(0.1, make_channel([rho]))
    assert list(single.p) == [1.0]
    # letters related by a reflection that maps the channel onto itself
    sym = make_channel([bloch(0.3, 0.0, 0.6), bloch(0.3, 0.0, -0.6)])
    res = optimize_input(0.05, sym)
    np.testing.assert_allclose(res.p, [0.5, 0.5], atol=1e-3)
    assert res.heuristic
    # asymmetric classical channel against a 1-D brute force over the simplex
    w = np.array([[0.95, 0.05], [0.3, 0.7]])
    a = 0.05
    grid = np.linspace(0, 1, 2001)
    brute = max(oracles.channel_exponent_c(a, w, (x, 1 - x)) for x in grid[::20])
    res = optimize_input(a, bsc(w))
    assert res.exponent >= brute - 1e-4
    assert res.exponent == pytest.approx(channel_exponent(a, bsc(w), res.p), abs=1e-12)
    with pytest.raises(ValidationError):
        optimize_input(0.1, make_channel([np.eye(2) / 2] * 9))


def _classical_blocklength(n, a, w, p):
    p = np.asarray(p)
    q = p @ w
    miss = fa = 0.0
    for seq in itertools.product(range(2), range(2), repeat=n):
        r = math.prod(p[seq[2 * i]] * w[seq[2 * i], seq[2 * i + 1]] for i in range(n))
        s = math.prod(p[seq[2 * i]] * q[seq[2 * i + 1]] for i in range(n))
        accept = math.exp(n * a) * s < r
        miss += 0.0 if accept else r
        fa += math.exp(n * a) * s if accept else 0.0
    return miss, fa


def test_blocklength_classical_oracle():
    n, a, s, p = 3, 0.1, 0.3, [0.4, 0.6]
    c = finite_blocklength_check(n, a, s, bsc(), p)
    miss, fa = _classical_blocklength(n, a, W, p)
    assert c.miss == pytest.approx(miss, abs=1e-9)
    assert c.false_accept == pytest.approx(fa, abs=1e-9)
    assert c.ok


def test_blocklength_pure_letters_and_identical():
    plus = np.full((2, 2), 0.5)
    ch = make_channel([np.diag([1.0, 0.0]), plus])
    c = finite_blocklength_check(2, 0.1, 0.5, ch, [0.5, 0.5])
    assert min(c.slacks) >= -1e-9 and c.combined_slack >= -1e-9
    rho = bloch(0.1, 0.2, 0.3)
    same = finite_blocklength_check(2, 0.2, 0.4, make_channel([rho, rho]), [0.5, 0.5])
    assert same.ok and same.exponent == 0.0
    with pytest.raises(DimensionGuardError):
        finite_blocklength_check(7, 0.1, 0.5, ch, [0.5, 0.5])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.integers(1, 3), st.floats(0.0, 0.6), st.floats(0.05, 0.95))
def test_blocklength_property(seed, n, a, s):
    ch, p = random_channel(seed, k=2)
    assert finite_blocklength_check(n, a, s, ch, p).ok


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.floats(0.0, 1.0))
def test_block_form_property(seed, s):
    ch, p = random_channel(seed)
    r, sp = block_operators(ch, p)

    def power(m, t):
        w, v = np.linalg.eigh(m)
        keep = w > 1e-14
        return (v[:, keep] * w[keep] ** t) @ v[:, keep].conj().T
    ref = math.log(np.trace(power(r, 1 - s) @ power(sp, s)).real)
    assert phi_p(s, ch, p) == pytest.approx(ref, abs=1e-10)
    assert phi_p(s, ch, p) <= 1e-14
