"""Density matrices, hypothesis pairs and the divergence family.

All logarithms are natural. ``phi`` and its derivatives are evaluated from
the two spectral decompositions through the overlap matrix
``Q[i, j] = |<r_i|s_j>|^2`` so that

    Tr rho^(1-s) sigma^s = sum_ij Q[i, j] a_i^(1-s) b_j^s

which is exact and cheap to evaluate on whole grids of ``s``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateSupportError, ValidationError
from .operators import (
    EigenDecomposition,
    ZERO_CUTOFF,
    check_dimension,
    check_hermitian,
    check_psd_spectrum,
    eigendecompose,
    power_from_eig,
    real_trace_pairing,
    support_mask,
    tensor_power,
)

TRACE_TOL = 1e-10
PSD_FLOOR = 1e-10


def density_matrix(a, name="state"):
    """Validate a density operator and return it as a complex array.

    Raises:
        ValidationError: if ``a`` is not Hermitian, has an eigenvalue below
            ``-1e-10`` or trace off from 1 by more than ``1e-10``.
    """
    arr = check_hermitian(a)
    tr = np.trace(arr).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValidationError(f"{name}: trace is {tr!r}, expected 1")
    lam_min = float(np.linalg.eigvalsh(0.5 * (arr + arr.conj().T))[0])
    if lam_min < -PSD_FLOOR:
        raise ValidationError(f"{name}: smallest eigenvalue {lam_min:.3e} is negative")
    return 0.5 * (arr + arr.conj().T)


def _overlaps(eig_a, eig_b):
    m = eig_a.eigenvectors.conj().T @ eig_b.eigenvectors
    return np.abs(m) ** 2


@dataclass(frozen=True, eq=False)
class HypothesisPair:
    """Null hypothesis ``rho`` against alternative ``sigma`` with cached spectra."""

    rho: np.ndarray
    sigma: np.ndarray
    rho_eig: EigenDecomposition = field(init=False, repr=False)
    sigma_eig: EigenDecomposition = field(init=False, repr=False)
    support_ok: bool = field(init=False)

    def __post_init__(self):
        rho = density_matrix(self.rho, "rho")
        sigma = density_matrix(self.sigma, "sigma")
        if rho.shape != sigma.shape:
            raise ValidationError(
                f"rho and sigma have different dimensions {rho.shape[0]} and {sigma.shape[0]}"
            )
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "rho_eig", eigendecompose(rho))
        object.__setattr__(self, "sigma_eig", eigendecompose(sigma))
        # mass of rho outside supp(sigma)
        q = self._overlap
        leak = float(np.sum((self.rho_eig.eigenvalues.clip(min=0))[:, None] * q[:, ~self._sigma_mask]))
        object.__setattr__(self, "support_ok", leak <= ZERO_CUTOFF * self.dim)

    @property
    def dim(self):
        return self.rho.shape[0]

    @property
    def _rho_mask(self):
        return support_mask(self.rho_eig)

    @property
    def _sigma_mask(self):
        return support_mask(self.sigma_eig)

    @property
    def _overlap(self):
        cached = self.__dict__.get("_q")
        if cached is None:
            cached = _overlaps(self.rho_eig, self.sigma_eig)
            object.__setattr__(self, "_q", cached)
        return cached

    @property
    def rho_full_rank(self):
        return bool(np.all(self._rho_mask))

    @property
    def sigma_full_rank(self):
        return bool(np.all(self._sigma_mask))

    @property
    def commuting(self):
        return bool(np.allclose(self.rho @ self.sigma, self.sigma @ self.rho, atol=1e-12))

    def tensor_powers(self, n, max_dim=None):
        """Cached ``(rho^{(x)n}, sigma^{(x)n})``."""
        check_dimension(self.dim, n, max_dim)
        cache = self.__dict__.setdefault("_tensor_cache", {})
        if n not in cache:
            cache[n] = (tensor_power(self.rho, n, max_dim), tensor_power(self.sigma, n, max_dim))
        return cache[n]

    def swapped(self):
        return HypothesisPair(self.sigma, self.rho)

    def spectral_terms(self):
        """Supported eigenvalues ``a``, ``b`` and their overlap block ``Q``."""
        rm, sm = self._rho_mask, self._sigma_mask
        return (
            self.rho_eig.eigenvalues[rm],
            self.sigma_eig.eigenvalues[sm],
            self._overlap[np.ix_(rm, sm)],
        )


def make_pair(rho, sigma):
    return HypothesisPair(np.asarray(rho, dtype=complex), np.asarray(sigma, dtype=complex))


def _check_s(s):
    arr = np.asarray(s, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0) or np.any(arr > 1):
        raise ValueError(f"s must lie in [0, 1], got {s!r}")
    return arr


def relative_entropy(pair):
    """Quantum relative entropy ``D(rho||sigma)`` in nats.

    Returns ``math.inf`` when ``supp(rho)`` is not contained in
    ``supp(sigma)``; otherwise a value clipped at 0 from below.
    """
    if not pair.support_ok:
        return math.inf
    a, b, q = pair.spectral_terms()
    # Tr rho log rho - Tr rho log sigma, both on supports
    ent = float(np.sum(a * np.log(a)))
    cross = float(np.sum(a[:, None] * q * np.log(b)[None, :]))
    return max(ent - cross, 0.0)


def _phi_terms(pair, s):
    a, b, q = pair.spectral_terms()
    s = np.atleast_1d(s)[:, None, None]
    w = q[None, :, :] * a[None, :, None] ** (1.0 - s) * b[None, None, :] ** s
    return w, np.log(b)[None, None, :] - np.log(a)[None, :, None]


def trace_power_product(s, pair):
    """``Tr rho^(1-s) sigma^s`` for a scalar or an array of ``s`` values."""
    s_arr = _check_s(s)
    w, _ = _phi_terms(pair, s_arr.ravel())
    out = w.sum(axis=(1, 2)).reshape(s_arr.shape)
    return out if out.ndim else float(out)


def phi(s, pair):
    """``phi(s) = log Tr rho^(1-s) sigma^s`` (vectorised over ``s``).

    Raises:
        DegenerateSupportError: if the trace is not strictly positive.
    """
    tr = np.asarray(trace_power_product(s, pair))
    if np.any(tr <= 0):
        raise DegenerateSupportError(
            "Tr rho^(1-s) sigma^s vanished: supports of rho and sigma are orthogonal"
        )
    out = np.log(tr)
    return out if out.ndim else float(out)


def phi_prime(s, pair):
    """Analytic derivative of :func:`phi` in ``s``.

    ``phi'(s) = Tr[rho^(1-s) (log sigma) sigma^s - (log rho) rho^(1-s) sigma^s] / Tr[rho^(1-s) sigma^s]``
    with logarithms taken on the supports; at ``s = 0`` and ``s = 1`` this is
    the one-sided derivative.
    """
    s_arr = _check_s(s)
    w, logs = _phi_terms(pair, s_arr.ravel())
    tr = w.sum(axis=(1, 2))
    if np.any(tr <= 0):
        raise DegenerateSupportError("Tr rho^(1-s) sigma^s vanished")
    out = ((w * logs).sum(axis=(1, 2)) / tr).reshape(s_arr.shape)
    return out if out.ndim else float(out)


def phi_second(s, pair):
    s_arr = _check_s(s)
    w, logs = _phi_terms(pair, s_arr.ravel())
    tr = w.sum(axis=(1, 2))
    m1 = (w * logs).sum(axis=(1, 2)) / tr
    m2 = (w * logs ** 2).sum(axis=(1, 2)) / tr
    out = (m2 - m1 ** 2).reshape(s_arr.shape)
    return out if out.ndim else float(out)


def phi_tilde(s, pair):
    """``log Tr rho sigma^(s/2) rho^(-s) sigma^(s/2)``.

    ``rho^(-s)`` is the pseudo-inverse power on the support of ``rho``. For
    commuting full-rank pairs this coincides with :func:`phi`.
    """
    s_arr = _check_s(s)
    vals = []
    for sv in s_arr.ravel():
        half = power_from_eig(pair.sigma_eig, sv / 2.0)
        inv = power_from_eig(pair.rho_eig, -sv)
        tr = real_trace_pairing(pair.rho, half @ inv @ half)
        if tr <= 0:
            raise DegenerateSupportError("Tr rho sigma^(s/2) rho^(-s) sigma^(s/2) vanished")
        vals.append(math.log(tr))
    out = np.array(vals).reshape(s_arr.shape)
    return out if out.ndim else float(out)


def validate_psd(a, name="operator"):
    """Hermitian PSD check returning the decomposition for reuse."""
    arr = check_hermitian(a)
    eig = eigendecompose(arr)
    try:
        check_psd_spectrum(eig)
    except ValidationError as exc:
        raise type(exc)(f"{name}: {exc}") from None
    return arr, eig
