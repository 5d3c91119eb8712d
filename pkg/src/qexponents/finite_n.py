"""Finite-n tests on tensor-power spaces and the trace inequalities behind them.

Threshold tests
---------------
For ``0 <= s <= 1/2`` the test is the strict negative part

    T = {(sigma^{(x)n} e^{-na})^(1-s) - (rho^{(x)n})^(1-s) < 0}

and for ``1/2 < t <= 1`` it is

    T = {(sigma^{(x)n} e^{-na})^t - (rho^{(x)n})^t <= 0},

which is exactly the acceptance region the two-operator trace inequality
controls once ``rho`` plays the role of ``X``. Both operators are raised to
the power per copy before the Kronecker product is formed.

Neyman-Pearson trade-off
------------------------
``np_tradeoff`` returns ``min {Tr sigma^{(x)n} T : Tr rho^{(x)n} (I - T) <= eps}``
using the family ``{rho^{(x)n} - lam sigma^{(x)n} > 0}``; ``lam`` is bisected
in log scale and the two bracketing projectors are mixed so the first-kind
error equals ``eps`` exactly.
"""

import math
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional

import numpy as np

from .exceptions import ValidationError
from .exponents import hoeffding_optimum, S_CAP
from .operators import (
    check_dimension,
    negative_part_projector,
    positive_part_projector,
    power_from_eig,
    real_trace_pairing,
    strict_positive_projector,
    tensor_power,
)
from .states import phi, phi_prime, relative_entropy, validate_psd

BOUND_TOL = 1e-9
PROJECTOR_TOL = 1e-8
LEMMA_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class TestOperator:
    """A test ``0 <= T <= I`` on the ``n``-fold space."""

    __test__ = False  # not a pytest class

    op: np.ndarray
    n: int
    kind: str = "projector"

    @property
    def dim(self):
        return self.op.shape[0]

    def complement(self):
        return TestOperator(np.eye(self.dim, dtype=complex) - self.op, self.n, self.kind)

    def idempotency_error(self):
        return float(np.max(np.abs(self.op @ self.op - self.op)))

    def check(self):
        lam = np.linalg.eigvalsh(self.op)
        if lam[0] < -1e-10 or lam[-1] > 1 + 1e-10:
            raise ValidationError(f"test eigenvalues leave [0, 1]: [{lam[0]:.3e}, {lam[-1]:.3e}]")
        if self.kind == "projector" and self.idempotency_error() > PROJECTOR_TOL:
            raise ValidationError("projector test is not idempotent")
        return self


class ErrorPair(NamedTuple):
    alpha: float
    beta: float


def _form(s):
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s must lie in [0, 1], got {s!r}")
    return ("s", 1.0 - s) if s <= 0.5 else ("t", s)


def build_test(n, a, s, pair, max_dim=None):
    """Threshold test at level ``a`` and parameter ``s`` (see module docstring).

    Raises:
        DimensionGuardError: if ``dim**n`` exceeds the guard.
    """
    check_dimension(pair.dim, n, max_dim)
    form, p = _form(s)
    sig = tensor_power(power_from_eig(pair.sigma_eig, p), n, max_dim)
    rho = tensor_power(power_from_eig(pair.rho_eig, p), n, max_dim)
    c = math.exp(-n * a * p) * sig - rho
    if form == "s":
        op = negative_part_projector(c)
    else:
        op = positive_part_projector(-c)
    return TestOperator(op, n, "projector")


def error_pair(test, pair, max_dim=None):
    """First- and second-kind error probabilities of ``test``."""
    rho_n, sigma_n = pair.tensor_powers(test.n, max_dim)
    if rho_n.shape != test.op.shape:
        raise ValidationError(
            f"test acts on dimension {test.dim}, states on {rho_n.shape[0]}"
        )
    comp = np.eye(test.dim, dtype=complex) - test.op
    alpha = real_trace_pairing(rho_n, comp)
    beta = real_trace_pairing(sigma_n, test.op)
    return ErrorPair(alpha, beta)


@dataclass
class BoundCheck:
    """Achieved errors and exponential bounds for both test forms.

    The s-form is evaluated at ``min(s, 1-s)`` and the t-form at
    ``max(s, 1-s)``, so every cell exercises all four bounds.
    """

    n: int
    a: float
    s: float
    s_param: float
    t_param: float
    errors_s: ErrorPair
    errors_t: ErrorPair
    beta_bound_s: float
    alpha_bound_s: float
    beta_bound_t: float
    alpha_bound_t: float

    @property
    def slacks(self):
        return (
            self.beta_bound_s - self.errors_s.beta,
            self.alpha_bound_s - self.errors_s.alpha,
            self.beta_bound_t - self.errors_t.beta,
            self.alpha_bound_t - self.errors_t.alpha,
        )

    @property
    def ok(self):
        return min(self.slacks) >= -BOUND_TOL


def _bounds(n, a, s, pair):
    ph = phi(s, pair)
    return math.exp(n * (1.0 - s) * a + n * ph), math.exp(-n * s * a + n * ph)


def verify_exponential_bounds(n, a, s, pair, max_dim=None):
    """Check ``Tr sigma T <= e^{n(1-s)a + n phi(s)}`` and ``Tr rho (I-T) <= e^{-nsa + n phi(s)}``."""
    s_low, t_high = min(s, 1.0 - s), max(s, 1.0 - s)
    err_s = error_pair(build_test(n, a, s_low, pair, max_dim), pair, max_dim)
    err_t = error_pair(build_test(n, a, t_high, pair, max_dim), pair, max_dim)
    bs, as_ = _bounds(n, a, s_low, pair)
    bt, at = _bounds(n, a, t_high, pair)
    return BoundCheck(n, a, s, s_low, t_high, err_s, err_t, bs, as_, bt, at)


class NPResult(NamedTuple):
    beta: float
    alpha: float
    threshold: float
    test: TestOperator


def _np_probe(rho_n, sigma_n, lam):
    proj = strict_positive_projector(rho_n - lam * sigma_n)
    alpha = real_trace_pairing(rho_n, np.eye(proj.shape[0]) - proj)
    beta = real_trace_pairing(sigma_n, proj)
    return proj, alpha, beta


def np_optimal_test(n, epsilon, pair, orientation="standard", max_dim=None, max_iter=200):
    """Optimal randomized test for the constant first-kind constraint ``epsilon``.

    Args:
        orientation: ``"standard"`` minimises ``Tr sigma T`` subject to
            ``Tr rho (I - T) <= epsilon``; ``"swapped"`` exchanges the roles
            of the two error kinds (``min Tr rho (I-T)`` s.t. ``Tr sigma T <= eps``).
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    if orientation == "swapped":
        res = np_optimal_test(n, epsilon, pair.swapped(), "standard", max_dim, max_iter)
        # acceptance of H0 for the swapped problem is the complement
        return NPResult(res.beta, res.alpha, res.threshold, res.test.complement())
    if orientation != "standard":
        raise ValueError(f"unknown orientation {orientation!r}")

    rho_n, sigma_n = pair.tensor_powers(n, max_dim)
    dim = rho_n.shape[0]
    a_eig = pair.rho_eig.eigenvalues
    b_eig = pair.sigma_eig.eigenvalues
    a_pos = a_eig[a_eig > 0]
    b_pos = b_eig[b_eig > 0]
    lo_x = n * math.log(a_pos.min() / b_pos.max()) - 1.0
    hi_x = n * math.log(a_pos.max() / b_pos.min()) + 1.0

    lower = (0.0,) + _np_probe(rho_n, sigma_n, 0.0)
    upper = (math.inf, np.zeros((dim, dim), dtype=complex), 1.0, 0.0)
    p_lo = (math.exp(lo_x),) + _np_probe(rho_n, sigma_n, math.exp(lo_x))
    p_hi = (math.exp(hi_x),) + _np_probe(rho_n, sigma_n, math.exp(hi_x))
    if p_lo[2] <= epsilon:
        lower = p_lo
    if p_hi[2] >= epsilon:
        upper = p_hi
    if lower is p_lo and upper is p_hi:
        for _ in range(max_iter):
            if hi_x - lo_x <= 1e-13 * max(1.0, abs(lo_x), abs(hi_x)):
                break
            mid = 0.5 * (lo_x + hi_x)
            probe = (math.exp(mid),) + _np_probe(rho_n, sigma_n, math.exp(mid))
            if probe[2] <= epsilon:
                lower, lo_x = probe, mid
            else:
                upper, hi_x = probe, mid

    lam_lo, t_lo, alpha_lo, beta_lo = lower
    lam_hi, t_hi, alpha_hi, beta_hi = upper
    if alpha_hi - alpha_lo > 0:
        q = min(max((alpha_hi - epsilon) / (alpha_hi - alpha_lo), 0.0), 1.0)
    else:
        q = 1.0
    op = q * t_lo + (1.0 - q) * t_hi
    beta = q * beta_lo + (1.0 - q) * beta_hi
    alpha = q * alpha_lo + (1.0 - q) * alpha_hi
    lam = lam_lo if math.isinf(lam_hi) else math.sqrt(lam_lo * lam_hi) if lam_lo > 0 else lam_hi
    return NPResult(max(beta, 0.0), alpha, lam, TestOperator(op, n, "randomized"))


def np_tradeoff(n, epsilon, pair, orientation="standard", max_dim=None):
    """Optimal second-kind error ``beta*_n(epsilon)``."""
    return np_optimal_test(n, epsilon, pair, orientation, max_dim).beta


def lemma1_gap(x, y, s):
    """``Tr X^s Y^(1-s) - Tr {X^(1-s) - Y^(1-s) >= 0} Y - Tr {X^(1-s) - Y^(1-s) < 0} X``."""
    if not 0.0 <= s <= 0.5:
        raise ValueError(f"s must lie in [0, 1/2], got {s!r}")
    x, ex = validate_psd(x, "X")
    y, ey = validate_psd(y, "Y")
    if x.shape != y.shape:
        raise ValidationError("X and Y have different dimensions")
    lhs = real_trace_pairing(power_from_eig(ex, s), power_from_eig(ey, 1.0 - s))
    diff = power_from_eig(ex, 1.0 - s) - power_from_eig(ey, 1.0 - s)
    pos = positive_part_projector(diff)
    neg = np.eye(x.shape[0]) - pos
    return lhs - real_trace_pairing(pos, y) - real_trace_pairing(neg, x)


def lemma1_tolerance(x, y):
    return LEMMA_TOL * (abs(np.trace(x).real) + abs(np.trace(y).real))


def audenaert_gap(a, b, t):
    """``Tr {A - B >= 0} B (A^t - B^t)`` for PSD ``A``, ``B`` and ``0 <= t <= 1``."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t!r}")
    a, ea = validate_psd(a, "A")
    b, eb = validate_psd(b, "B")
    if a.shape != b.shape:
        raise ValidationError("A and B have different dimensions")
    pos = positive_part_projector(a - b)
    return real_trace_pairing(pos @ b, power_from_eig(ea, t) - power_from_eig(eb, t))


def audenaert_tolerance(a, b, t):
    na = float(np.max(np.linalg.eigvalsh(a))) if np.any(a) else 0.0
    nb = float(np.max(np.linalg.eigvalsh(b))) if np.any(b) else 0.0
    return LEMMA_TOL * abs(np.trace(b).real) * (max(na, 0.0) ** t + max(nb, 0.0) ** t)


def random_psd(rng, dim, rank=None):
    """``G G^dagger`` with complex standard normal ``G`` of shape ``dim x rank``."""
    rank = dim if rank is None else rank
    g = (rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))) / math.sqrt(2.0)
    return g @ g.conj().T


def random_density(rng, dim, rank=None):
    m = random_psd(rng, dim, rank)
    return m / np.trace(m).real


class SuiteRow(NamedTuple):
    seed: int
    trial: int
    dim: int
    rank_1: int
    rank_2: int
    param: float
    gap: float
    tolerance: float

    @property
    def ok(self):
        return self.gap >= -self.tolerance


def run_lemma_suite(which, trials=1000, dims=(2, 3, 4, 5, 6), seed=42, deficient_rate=0.25):
    """Randomised check of one of the two trace inequalities.

    Args:
        which: ``"audenaert"`` (``t`` uniform in ``[0, 1]``) or ``"lemma1"``
            (``s`` uniform in ``[0, 1/2]``).
        trials: instances per dimension.
        deficient_rate: probability that each operator is drawn with
            truncated rank.
    """
    if which not in ("audenaert", "lemma1"):
        raise ValueError(f"unknown suite {which!r}")
    rng = np.random.default_rng(seed)
    rows = []
    for d in dims:
        for k in range(trials):
            ranks = []
            for _ in range(2):
                if d > 1 and rng.random() < deficient_rate:
                    ranks.append(int(rng.integers(1, d)))
                else:
                    ranks.append(d)
            m1 = random_psd(rng, d, ranks[0])
            m2 = random_psd(rng, d, ranks[1])
            if which == "audenaert":
                param = float(rng.uniform(0.0, 1.0))
                gap = audenaert_gap(m1, m2, param)
                tol = audenaert_tolerance(m1, m2, param)
            else:
                param = float(rng.uniform(0.0, 0.5))
                gap = lemma1_gap(m1, m2, param)
                tol = lemma1_tolerance(m1, m2)
            rows.append(SuiteRow(seed, k, d, ranks[0], ranks[1], param, gap, tol))
    return rows


class HoeffdingTest(NamedTuple):
    n: int
    r: float
    s_r: float
    a: float
    exponent: float
    alpha: float
    beta: float
    beta_limit: float
    alpha_limit: float

    @property
    def ok(self):
        return (
            self.beta <= self.beta_limit * (1.0 + BOUND_TOL)
            and self.alpha <= self.alpha_limit * (1.0 + BOUND_TOL)
        )


def hoeffding_test(n, r, pair, max_dim=None):
    """Build the achievability test at ``s_r`` with threshold ``a = phi'(s_r)``.

    Raises:
        ValueError: if the optimiser is not interior, where the critical-point
            relations do not hold.
    """
    opt = hoeffding_optimum(r, pair)
    if opt.diverges or not 0.0 < opt.s_star < S_CAP:
        raise ValueError(f"optimiser for r={r} is not interior (s_r={opt.s_star})")
    s_r = opt.s_star
    a = phi_prime(s_r, pair)
    err = error_pair(build_test(n, a, s_r, pair, max_dim), pair, max_dim)
    return HoeffdingTest(
        n, r, s_r, a, opt.value, err.alpha, err.beta,
        math.exp(-n * r), math.exp(-n * opt.value),
    )


@dataclass
class SteinStudy:
    """Convergence of ``-(1/n) log beta*_n(eps)`` towards ``D(rho||sigma)``."""

    epsilon: float
    relative_entropy: float
    n_values: List[int] = field(default_factory=list)
    beta_star: List[float] = field(default_factory=list)
    delta: Optional[float] = None
    a: Optional[float] = None
    s: Optional[float] = None
    alpha_exponent: Optional[float] = None
    beta_exponent: Optional[float] = None
    achievability: List[ErrorPair] = field(default_factory=list)

    @property
    def exponents(self):
        return [-math.log(b) / n if b > 0 else math.inf for n, b in zip(self.n_values, self.beta_star)]

    @property
    def small_s_ok(self):
        """Both exponent expressions of the small-``s`` argument are negative enough."""
        if self.s is None:
            return None
        d = self.relative_entropy
        return self.alpha_exponent < 0 and self.beta_exponent < -(d - self.delta) * (1.0 - self.s)


def stein_convergence(epsilon, n_max, pair, delta=None, n_min=1, max_dim=None):
    """Table of ``-(1/n) log beta*_n(epsilon)`` for ``n = n_min..n_max``.

    Also evaluates the threshold tests at ``a = -D + delta`` for a small
    ``s`` chosen by halving from 1/2 until ``-s a + phi(s) < 0`` and
    ``(1-s) a + phi(s) < -(D - delta)(1-s)``.
    """
    check_dimension(pair.dim, n_max, max_dim)
    d = relative_entropy(pair)
    study = SteinStudy(epsilon, d)
    for n in range(n_min, n_max + 1):
        study.n_values.append(n)
        study.beta_star.append(np_tradeoff(n, epsilon, pair, max_dim=max_dim))

    if 0.0 < d < math.inf:
        delta = d / 4.0 if delta is None else delta
        a = -d + delta
        s = 0.5
        for _ in range(60):
            ph = phi(s, pair)
            e_alpha = -s * a + ph
            e_beta = (1.0 - s) * a + ph
            if e_alpha < 0 and e_beta < -(d - delta) * (1.0 - s):
                break
            s /= 2.0
        study.delta, study.a, study.s = delta, a, s
        study.alpha_exponent, study.beta_exponent = e_alpha, e_beta
        for n in study.n_values:
            study.achievability.append(error_pair(build_test(n, a, s, pair, max_dim), pair, max_dim))
    return study
