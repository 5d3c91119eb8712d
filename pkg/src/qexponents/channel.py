"""Classical-quantum channels and the random-coding exponent.

For a channel ``x -> rho_x`` and input distribution ``p`` the block states

    R   = diag(p_1 rho_1, ..., p_k rho_k)
    S_p = diag(p_1 sigma_p, ..., p_k sigma_p),   sigma_p = sum_x p_x rho_x

turn decoding into testing ``R^{(x)n}`` against ``S_p^{(x)n}`` with a size
``N = e^{na}`` penalty on the second-kind term. The exponent implemented is

    E_p(a) = max_{0<=s<=1} (-s a - phi_p(s)),
    phi_p(s) = log sum_x p_x Tr rho_x^(1-s) sigma_p^s.
"""

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np
from scipy.linalg import block_diag

from .exceptions import DegenerateSupportError, ValidationError
from .exponents import _nonneg, grid_maximize
from .finite_n import build_test, error_pair, BOUND_TOL
from .operators import check_dimension, eigendecompose, support_mask
from .states import HypothesisPair, density_matrix, relative_entropy, make_pair

PROB_TOL = 1e-12
MAX_OPTIMIZE_ALPHABET = 8


@dataclass(frozen=True, eq=False)
class CQChannel:
    """Signal states ``rho_x`` for the letters ``0..k-1``."""

    letters: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.letters) < 1:
            raise ValidationError("a channel needs at least one letter")
        states = tuple(density_matrix(x, f"letter {i}") for i, x in enumerate(self.letters))
        dims = {s.shape[0] for s in states}
        if len(dims) != 1:
            raise ValidationError(f"letters have mismatched dimensions {sorted(dims)}")
        object.__setattr__(self, "letters", states)
        object.__setattr__(self, "_eigs", tuple(eigendecompose(s) for s in states))

    @property
    def k(self):
        return len(self.letters)

    @property
    def dim(self):
        return self.letters[0].shape[0]


def make_channel(letters):
    return CQChannel(tuple(np.asarray(x, dtype=complex) for x in letters))


def input_distribution(p, k):
    """Validate a probability vector of length ``k``."""
    p = np.asarray(p, dtype=float)
    if p.shape != (k,):
        raise ValidationError(f"distribution has shape {p.shape}, expected ({k},)")
    if np.any(~np.isfinite(p)) or np.any(p < 0):
        raise ValidationError("distribution has negative or non-finite entries")
    if abs(p.sum() - 1.0) > PROB_TOL:
        raise ValidationError(f"distribution sums to {p.sum()!r}, expected 1")
    return p


def uniform(k):
    return np.full(k, 1.0 / k)


def sigma_p(channel, p):
    """Average output state ``sum_x p_x rho_x``."""
    p = input_distribution(p, channel.k)
    out = sum(px * rho for px, rho in zip(p, channel.letters))
    return 0.5 * (out + out.conj().T)


def block_operators(channel, p):
    """Block-diagonal ``(R, S_p)`` of dimension ``k * d``."""
    p = input_distribution(p, channel.k)
    avg = sigma_p(channel, p)
    r = block_diag(*[px * rho for px, rho in zip(p, channel.letters)])
    s = block_diag(*[px * avg for px in p])
    return r, s


def block_pair(channel, p):
    r, s = block_operators(channel, p)
    return make_pair(r, s)


def _letter_terms(channel, p):
    """Per-letter spectral terms for ``Tr rho_x^(1-s) sigma_p^s``."""
    avg_eig = eigendecompose(sigma_p(channel, p))
    bm = support_mask(avg_eig)
    b = avg_eig.eigenvalues[bm]
    wb = avg_eig.eigenvectors[:, bm]
    terms = []
    for px, eig in zip(p, channel._eigs):
        if px <= 0:
            continue
        am = support_mask(eig)
        q = np.abs(eig.eigenvectors[:, am].conj().T @ wb) ** 2
        terms.append((px, eig.eigenvalues[am], q))
    return b, terms


def _trace_sum(s, b, terms):
    s = np.atleast_1d(np.asarray(s, dtype=float))[:, None, None]
    total = np.zeros(s.shape[0])
    for px, a, q in terms:
        w = q[None] * a[None, :, None] ** (1.0 - s) * b[None, None, :] ** s
        total += px * w.sum(axis=(1, 2))
    return total


def phi_p(s, channel, p):
    """``log sum_x p_x Tr rho_x^(1-s) sigma_p^s`` (vectorised over ``s``)."""
    p = input_distribution(p, channel.k)
    s_arr = np.asarray(s, dtype=float)
    if np.any(~np.isfinite(s_arr)) or np.any(s_arr < 0) or np.any(s_arr > 1):
        raise ValueError(f"s must lie in [0, 1], got {s!r}")
    b, terms = _letter_terms(channel, p)
    tr = _trace_sum(s_arr.ravel(), b, terms)
    if np.any(tr <= 0):
        raise DegenerateSupportError("sum_x p_x Tr rho_x^(1-s) sigma_p^s vanished")
    out = np.log(tr).reshape(s_arr.shape)
    return out if out.ndim else float(out)


def holevo_quantity(channel, p):
    """``sum_x p_x D(rho_x || sigma_p)`` in nats."""
    p = input_distribution(p, channel.k)
    avg = sigma_p(channel, p)
    return float(sum(px * relative_entropy(HypothesisPair(rho, avg))
                     for px, rho in zip(p, channel.letters) if px > 0))


class ChannelExponent(NamedTuple):
    value: float
    s_star: float


def _check_rate(a):
    if not np.isfinite(a) or a < 0:
        raise ValueError(f"rate must be a finite number >= 0, got {a!r}")


def channel_exponent_opt(a, channel, p):
    _check_rate(a)
    p = input_distribution(p, channel.k)
    b, terms = _letter_terms(channel, p)

    def f(s):
        return -np.asarray(s) * a - np.log(_trace_sum(s, b, terms))

    s_star, value, _, _ = grid_maximize(f, 0.0, 1.0)
    return ChannelExponent(_nonneg(value), s_star)


def channel_exponent(a, channel, p):
    """Random-coding exponent ``E_p(a) = max_{0<=s<=1} (-s a - phi_p(s))``.

    Raises:
        ValueError: if ``a < 0``.
    """
    return channel_exponent_opt(a, channel, p).value


class InputOptimum(NamedTuple):
    p: np.ndarray
    exponent: float
    heuristic: bool = True


def _ascend(f, p, step0, min_step):
    best = f(p)
    k = len(p)
    step = step0
    while step >= min_step:
        improved = True
        while improved:
            improved = False
            for i, j in itertools.permutations(range(k), 2):
                delta = min(step, p[j])
                if delta <= 0:
                    continue
                cand = p.copy()
                cand[i] += delta
                cand[j] -= delta
                v = f(cand)
                if v > best + 1e-15:
                    p, best, improved = cand, v, True
        step /= 2.0
    return p, best


def optimize_input(a, channel, resolution=50, seed=42, random_starts=3, min_step=1e-6):
    """Heuristic maximisation of ``E_p(a)`` over the probability simplex.

    Multi-start coordinate ascent that moves probability mass between pairs
    of letters, starting on the simplex grid of spacing ``1/resolution`` and
    halving the step down to ``min_step``. Starts: uniform, every vertex and
    ``random_starts`` seeded grid points.

    Raises:
        ValidationError: for alphabets above 8 letters.
    """
    _check_rate(a)
    k = channel.k
    if k > MAX_OPTIMIZE_ALPHABET:
        raise ValidationError(f"alphabet size {k} exceeds the optimiser guard of {MAX_OPTIMIZE_ALPHABET}")
    if k == 1:
        return InputOptimum(np.ones(1), channel_exponent(a, channel, np.ones(1)))

    def f(p):
        p = np.clip(p, 0.0, None)
        return channel_exponent(a, channel, p / p.sum())

    rng = np.random.default_rng(seed)
    starts = [uniform(k)] + [np.eye(k)[i] for i in range(k)]
    for _ in range(random_starts):
        cuts = np.sort(rng.integers(0, resolution + 1, size=k - 1))
        counts = np.diff(np.concatenate(([0], cuts, [resolution])))
        starts.append(counts / resolution)

    best_p, best_v = None, -math.inf
    for start in starts:
        p, v = _ascend(f, np.asarray(start, dtype=float), 1.0 / resolution, min_step)
        if v > best_v + 1e-15:
            best_p, best_v = p, v
    best_p = np.clip(best_p, 0.0, None)
    return InputOptimum(best_p / best_p.sum(), best_v)


@dataclass
class BlocklengthCheck:
    """Both right-hand terms of the random-coding inequality at one ``(n, a, s)``."""

    n: int
    a: float
    s: float
    miss: float          # 1 - Tr R^{(x)n} T
    false_accept: float  # N Tr S_p^{(x)n} T, N = e^{na}
    bound: float         # e^{n(sa + phi_p(s))}
    exponent: float      # E_p(a)

    @property
    def term_first(self):
        return 2.0 * self.miss

    @property
    def term_second(self):
        return 4.0 * self.false_accept

    @property
    def total(self):
        return self.term_first + self.term_second

    @property
    def slacks(self):
        return (2.0 * self.bound - self.term_first, 4.0 * self.bound - self.term_second)

    @property
    def combined_slack(self):
        return 4.0 * self.bound - self.total

    @property
    def achieved_exponent(self):
        return -math.log(self.total) / self.n if self.total > 0 else math.inf

    @property
    def ok(self):
        tol = BOUND_TOL * max(1.0, self.bound)
        return min(*self.slacks, self.combined_slack) >= -tol


def finite_blocklength_check(n, a, s, channel, p, max_dim=None):
    """Evaluate the threshold test for ``R`` against ``N S_p`` on ``n`` copies.

    The test at parameter ``s`` is the same construction as
    :func:`qexponents.finite_n.build_test` with threshold ``-a``, so
    ``1 - Tr R T`` and ``N Tr S_p T`` are each at most ``e^{n(sa + phi_p(s))}``.

    Raises:
        DimensionGuardError: if ``(k d)^n`` exceeds the guard.
    """
    _check_rate(a)
    p = input_distribution(p, channel.k)
    check_dimension(channel.k * channel.dim, n, max_dim)
    pair = block_pair(channel, p)
    err = error_pair(build_test(n, -a, s, pair, max_dim), pair, max_dim)
    bound = math.exp(n * (s * a + phi_p(s, channel, p)))
    return BlocklengthCheck(
        n, a, s, err.alpha, math.exp(n * a) * err.beta, bound, channel_exponent(a, channel, p)
    )
