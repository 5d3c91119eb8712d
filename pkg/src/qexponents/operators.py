"""Dense Hermitian linear algebra.

Operators are plain complex ``numpy`` arrays. Everything here is a pure
function of its inputs: eigendecomposition, spectral functions restricted to
the support, sign projectors and tensor powers.
"""

from functools import reduce
from typing import NamedTuple

import numpy as np

from .exceptions import DimensionGuardError, NotHermitianError, NotPSDError, ValidationError
from .jacobi import jacobi_eigh

#: Largest tensor-power dimension built by default.
MAX_DIM = 4096

#: Relative tolerance for the Hermiticity check (times ``max|entry|``).
HERMITIAN_TOL = 1e-12

#: Eigenvalues with ``|lambda| <= ZERO_CUTOFF * dim * lambda_max`` count as zero.
ZERO_CUTOFF = 1e-12

#: Negative eigenvalues down to ``-PSD_TOL * ||A||`` are accepted as zero.
PSD_TOL = 1e-10

EIGENSOLVERS = ("lapack", "jacobi")
_default_solver = "lapack"


def set_eigensolver(name):
    """Select the backend used when :func:`eigendecompose` gets no ``method``."""
    global _default_solver
    if name not in EIGENSOLVERS:
        raise ValueError(f"unknown eigensolver {name!r}; choose from {EIGENSOLVERS}")
    _default_solver = name


def get_eigensolver():
    return _default_solver


class EigenDecomposition(NamedTuple):
    """Spectral data ``H = V diag(eigenvalues) V^dagger``, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self):
        return len(self.eigenvalues)

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_operator(a):
    """Return ``a`` as a square complex array, without a Hermiticity check."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValidationError(f"operator must be a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("operator has non-finite entries")
    return arr


def check_hermitian(a, tol=HERMITIAN_TOL):
    """Validate Hermiticity and return the operator as a complex array.

    Raises:
        NotHermitianError: naming the entry pair with the largest violation.
    """
    arr = as_operator(a)
    diff = np.abs(arr - arr.conj().T)
    scale = float(np.max(np.abs(arr)))
    worst = float(diff.max())
    if worst > tol * scale:
        i, j = np.unravel_index(int(np.argmax(diff)), diff.shape)
        raise NotHermitianError(
            f"operator is not Hermitian: entries ({i},{j}) and ({j},{i}) differ "
            f"from conjugate symmetry by {worst:.3e} (tolerance {tol * scale:.3e})"
        )
    return arr


def hermitian_part(a):
    arr = np.asarray(a, dtype=complex)
    return 0.5 * (arr + arr.conj().T)


def _canonical_phases(vecs):
    # make the first non-negligible component of every column real positive
    out = vecs.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        idx = int(np.argmax(np.abs(col) > 1e-8 * np.abs(col).max()))
        z = col[idx]
        if z != 0:
            out[:, k] = col * (abs(z) / z)
    return out


def eigendecompose(h, method=None):
    """Eigendecomposition of a Hermitian operator.

    Eigenvalues come back sorted descending and each eigenvector has its
    first significant component made real and positive, so identical input
    yields identical output.

    Args:
        h: Hermitian matrix.
        method: ``"lapack"`` (``numpy.linalg.eigh``) or ``"jacobi"``
            (cyclic Jacobi rotations). Defaults to the module setting.
    """
    arr = hermitian_part(check_hermitian(h))
    method = method or _default_solver
    if method == "lapack":
        w, v = np.linalg.eigh(arr)
    elif method == "jacobi":
        w, v = jacobi_eigh(arr)
    else:
        raise ValueError(f"unknown eigensolver {method!r}")
    order = np.argsort(-w, kind="stable")
    return EigenDecomposition(np.asarray(w[order], dtype=float), _canonical_phases(v[:, order]))


def zero_cutoff(eigenvalues):
    """Absolute threshold below which an eigenvalue is classified as zero."""
    lam = np.asarray(eigenvalues)
    if lam.size == 0:
        return 0.0
    return ZERO_CUTOFF * lam.size * float(np.max(np.abs(lam)))


def support_mask(eig):
    """Boolean mask of eigenvalues strictly above the zero cutoff."""
    return eig.eigenvalues > zero_cutoff(eig.eigenvalues)


def check_psd_spectrum(eig, tol=PSD_TOL):
    lam = eig.eigenvalues
    norm = float(np.max(np.abs(lam))) if lam.size else 0.0
    if lam.size and lam[-1] < -tol * norm:
        raise NotPSDError(
            f"operator is not positive semidefinite: smallest eigenvalue {lam[-1]:.3e}"
        )


def spectral_function(eig, f):
    """Apply ``f`` to the eigenvalues on the support; zero elsewhere."""
    mask = support_mask(eig)
    vals = np.zeros_like(eig.eigenvalues)
    vals[mask] = f(eig.eigenvalues[mask])
    v = eig.eigenvectors
    return hermitian_part((v * vals) @ v.conj().T)


def power_from_eig(eig, t):
    """``A^t`` from a cached decomposition of a PSD ``A`` (support convention)."""
    if t == 0:
        return spectral_function(eig, np.ones_like)
    return spectral_function(eig, lambda x: x ** t)


def fractional_power(a, t, eig=None):
    """Fractional power of a positive-semidefinite operator.

    Eigenvalues at or below the zero cutoff are mapped to 0 for every ``t``,
    so ``t = 0`` gives the support projector and ``t < 0`` the pseudo-inverse
    power.

    Raises:
        NotPSDError: if an eigenvalue is below ``-1e-10 * ||A||``.
        ValueError: if ``t`` is not finite.
    """
    if not np.isfinite(t):
        raise ValueError(f"power must be finite, got {t!r}")
    if eig is None:
        eig = eigendecompose(a)
    check_psd_spectrum(eig)
    return power_from_eig(eig, float(t))


def log_on_support(eig):
    return spectral_function(eig, np.log)


def support_projector(eig):
    return spectral_function(eig, np.ones_like)


def _sign_tolerance(eig):
    lam = eig.eigenvalues
    return ZERO_CUTOFF * lam.size * float(np.max(np.abs(lam)))


def _projector(vecs):
    return hermitian_part(vecs @ vecs.conj().T)


def negative_part_projector(c, eig=None):
    """Projector ``{C < 0}`` onto eigenvectors with eigenvalue below ``-tol``.

    ``tol = 1e-12 * dim * ||C||_2``; numerically zero eigenvalues are left to
    the complementary projector.
    """
    if eig is None:
        eig = eigendecompose(c)
    mask = eig.eigenvalues < -_sign_tolerance(eig)
    return _projector(eig.eigenvectors[:, mask])


def positive_part_projector(c, eig=None):
    """Projector ``{C >= 0}``, defined as ``I - {C < 0}`` so the two sum to ``I``."""
    if eig is None:
        eig = eigendecompose(c)
    return np.eye(eig.dim, dtype=complex) - negative_part_projector(c, eig)


def strict_positive_projector(c, eig=None):
    """Projector ``{C > 0}`` (eigenvalues above ``+tol``)."""
    if eig is None:
        eig = eigendecompose(c)
    mask = eig.eigenvalues > _sign_tolerance(eig)
    return _projector(eig.eigenvectors[:, mask])


def check_dimension(dim, n, max_dim=None):
    limit = MAX_DIM if max_dim is None else max_dim
    required = dim ** n
    if required > limit:
        raise DimensionGuardError(required, limit)
    return required


def tensor_power(a, n, max_dim=None):
    """``n``-fold Kronecker power of ``a``.

    Raises:
        DimensionGuardError: if ``dim**n`` exceeds ``max_dim`` (default 4096).
    """
    arr = as_operator(a)
    if int(n) != n or n < 1:
        raise ValueError(f"number of copies must be a positive integer, got {n!r}")
    check_dimension(arr.shape[0], int(n), max_dim)
    return reduce(np.kron, [arr] * int(n))


def trace_pairing(a, b):
    """``Tr[A B]`` as a complex number, without forming the product."""
    return complex(np.sum(np.asarray(a) * np.asarray(b).T))


def real_trace_pairing(a, b):
    return trace_pairing(a, b).real


def trace_norm(a):
    return float(np.sum(np.abs(np.linalg.eigvalsh(hermitian_part(a)))))


def spectral_norm(a):
    return float(np.max(np.abs(np.linalg.eigvalsh(hermitian_part(a)))))
