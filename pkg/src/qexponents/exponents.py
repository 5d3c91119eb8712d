"""Asymptotic error exponents from the phi family.

Every exponent here is a one-dimensional maximisation over ``s``. The
optimiser evaluates a 1001-point uniform grid and then refines the best
grid cell by golden-section search; for the Hoeffding-type objective the
interior optimiser is polished further by solving the stationarity
condition ``r = (s - 1) phi'(s) - phi(s)`` with a bracketing root finder.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import brentq

from .states import phi, phi_prime, phi_tilde, relative_entropy

GRID_POINTS = 1001
S_CAP = 1.0 - 1e-6
DIVERGENCE_CEILING = 1e3

#: Exponents at or below this level are roundoff and reported as exactly 0.
ROUNDOFF_FLOOR = 64 * np.finfo(float).eps

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _nonneg(x):
    # also maps -0.0 to 0.0
    return x if x > ROUNDOFF_FLOOR else 0.0


def golden_max(f, lo, hi, tol=1e-12, maxiter=200):
    """Maximise a scalar function on ``[lo, hi]`` by golden-section search."""
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def grid_maximize(f_vec, lo, hi, f_scalar=None, n_grid=GRID_POINTS):
    """Grid search plus golden-section refinement on the bracketing cell.

    ``f_vec`` maps an array of points to an array of values; ``f_scalar``
    (defaults to ``f_vec``) is used during refinement.

    Returns:
        tuple: ``(argmax, max, grid, values)``.
    """
    f_scalar = f_scalar or (lambda x: float(f_vec(np.array([x]))[0]))
    grid = np.linspace(lo, hi, n_grid)
    vals = np.asarray(f_vec(grid), dtype=float)
    k = int(np.argmax(vals))
    best_x, best_v = float(grid[k]), float(vals[k])
    left = grid[max(k - 1, 0)]
    right = grid[min(k + 1, n_grid - 1)]
    if right > left:
        x, v = golden_max(f_scalar, float(left), float(right))
        if v > best_v:
            best_x, best_v = x, v
    return best_x, best_v, grid, vals


class Optimum(NamedTuple):
    value: float
    s_star: float
    diverges: bool


@dataclass
class ExponentCurve:
    """Exponent values on an increasing parameter grid (nats per copy)."""

    grid: np.ndarray
    values: np.ndarray
    s_star: np.ndarray
    diverges: np.ndarray
    name: str = "hoeffding"

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        if self.grid.size > 1 and np.any(np.diff(self.grid) <= 0):
            raise ValueError("parameter grid must be strictly increasing")

    def rows(self):
        for r, v, s, d in zip(self.grid, self.values, self.s_star, self.diverges):
            yield {"r": float(r), "bound": float(v), "s_star": float(s), "flag": "diverges" if d else ""}


def stein_exponent(pair):
    """Stein exponent, which is the relative entropy ``D(rho||sigma)``."""
    return relative_entropy(pair)


def chernoff_bound(pair):
    """``max_{0<=s<=1} -phi(s)``; returns ``(value, s_star)``."""
    s, v, _, _ = grid_maximize(lambda x: -phi(x, pair), 0.0, 1.0)
    return _nonneg(v), s


def _check_rate(r):
    if not np.isfinite(r) or r < 0:
        raise ValueError(f"rate must be a finite number >= 0, got {r!r}")


def _hoeffding_objective(phi_fn, r):
    def f(s):
        s = np.asarray(s, dtype=float)
        return (-s * r - phi_fn(s)) / (1.0 - s)
    return f


def _tilde_vec(pair):
    return lambda s: phi_tilde(np.asarray(s), pair)


def _optimize_hoeffding(r, pair, phi_fn, polish=True):
    _check_rate(r)
    f = _hoeffding_objective(phi_fn, r)
    s_star, value, grid, vals = grid_maximize(f, 0.0, S_CAP, lambda x: float(f(x)))
    if value > DIVERGENCE_CEILING:
        slope = float(f(S_CAP) - f(S_CAP - 1e-7))
        if slope > 0:
            return Optimum(math.inf, S_CAP, True)
    if polish:
        s_star, value = _polish_stationary(r, pair, f, s_star, value, grid)
    return Optimum(_nonneg(value), s_star, False)


def _polish_stationary(r, pair, f, s_star, value, grid):
    step = grid[1] - grid[0]
    if not (2 * step < s_star < S_CAP - 2 * step):
        return s_star, value

    def g(s):
        return (s - 1.0) * phi_prime(s, pair) - phi(s, pair) - r

    lo, hi = s_star - 2 * step, s_star + 2 * step
    glo, ghi = g(lo), g(hi)
    if glo * ghi > 0:
        return s_star, value
    root = brentq(g, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    v = float(f(root))
    if v >= value - 1e-12:
        return root, v
    return s_star, value


def hoeffding_optimum(r, pair):
    """Maximiser and value of ``(-s r - phi(s)) / (1 - s)`` over ``s`` in ``[0, 1)``."""
    return _optimize_hoeffding(r, pair, lambda s: phi(s, pair))


def hoeffding_bound(r, pair):
    """Lower bound on the first-kind error exponent at second-kind rate ``r``.

    ``sup_{0<=s<1} (-s r - phi(s)) / (1 - s)``; ``math.inf`` when the
    objective exceeds the divergence ceiling and is still increasing at the
    cap ``s = 1 - 1e-6`` (pure ``rho``).

    Raises:
        ValueError: if ``r < 0``.
    """
    return hoeffding_optimum(r, pair).value


def oh_optimum(r, pair):
    return _optimize_hoeffding(r, pair, _tilde_vec(pair), polish=False)


def oh_bound(r, pair):
    """Same optimisation as :func:`hoeffding_bound` with ``phi_tilde`` in place of ``phi``."""
    return oh_optimum(r, pair).value


def critical_s(r, pair):
    """The maximising ``s_r`` of the Hoeffding objective."""
    return hoeffding_optimum(r, pair).s_star


class LegendreCheck(NamedTuple):
    r: float
    s_r: float
    bound: float
    residual_rate: Optional[float]
    residual_value: Optional[float]

    @property
    def applicable(self):
        return self.residual_rate is not None


def legendre_residuals(r, pair, s_r=None):
    """Residuals of the critical-point relations at the Hoeffding optimiser.

    ``|r - ((s_r - 1) phi'(s_r) - phi(s_r))|`` and
    ``|H(r) - (s_r phi'(s_r) - phi(s_r))|``. Both are ``None`` when the
    optimiser sits on the boundary of ``[0, 1)``.
    """
    opt = hoeffding_optimum(r, pair)
    if s_r is None:
        s_r = opt.s_star
    interior = (not opt.diverges) and (1e-6 < s_r < S_CAP - 1e-6)
    if not interior:
        return LegendreCheck(r, s_r, opt.value, None, None)
    d1 = phi_prime(s_r, pair)
    p = phi(s_r, pair)
    res_rate = abs(r - ((s_r - 1.0) * d1 - p))
    res_value = abs(opt.value - (s_r * d1 - p))
    return LegendreCheck(r, s_r, opt.value, res_rate, res_value)


def _curve(r_grid, pair, optimizer, name):
    r_grid = np.asarray(r_grid, dtype=float)
    opts = [optimizer(float(r), pair) for r in r_grid]
    return ExponentCurve(
        grid=r_grid,
        values=np.array([o.value for o in opts]),
        s_star=np.array([o.s_star for o in opts]),
        diverges=np.array([o.diverges for o in opts]),
        name=name,
    )


def hoeffding_curve(r_grid, pair):
    return _curve(r_grid, pair, hoeffding_optimum, "hoeffding")


def oh_curve(r_grid, pair):
    return _curve(r_grid, pair, oh_optimum, "tilde")
