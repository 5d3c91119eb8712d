"""Cyclic Jacobi eigensolver for complex Hermitian matrices.

Each rotation first removes the phase of the pivot ``A[p, q]`` with a
diagonal unitary and then applies the classical real Jacobi rotation, so
the transformation stays unitary and the diagonal stays real.
"""

import numpy as np

OFF_DIAGONAL_TOL = 1e-13
MAX_SWEEPS = 100


def off_diagonal_norm(a):
    """Frobenius norm of the strictly off-diagonal part of ``a``."""
    total = np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2)
    return float(np.sqrt(max(total, 0.0)))


def jacobi_eigh(h, tol=OFF_DIAGONAL_TOL, max_sweeps=MAX_SWEEPS):
    """Diagonalise a Hermitian matrix by cyclic Jacobi sweeps.

    Iteration stops once the off-diagonal Frobenius norm is at most
    ``tol * ||h||_F``.

    Returns:
        tuple: ``(eigenvalues, eigenvectors)`` in the order produced by the
        sweeps (unsorted); columns of ``eigenvectors`` are orthonormal.
    """
    a = np.array(h, dtype=complex, copy=True)
    d = a.shape[0]
    v = np.eye(d, dtype=complex)
    scale = float(np.linalg.norm(a))
    if d == 1 or scale == 0.0:
        return np.real(np.diag(a)).copy(), v

    target = tol * scale
    for _ in range(max_sweeps):
        if off_diagonal_norm(a) <= target:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                z = a[p, q]
                mod = abs(z)
                if mod <= 1e-300 or mod <= 1e-18 * scale:
                    continue
                phase = z / mod
                app = a[p, p].real
                aqq = a[q, q].real
                zeta = (aqq - app) / (2.0 * mod)
                if zeta >= 0:
                    t = 1.0 / (zeta + np.sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # U restricted to (p, q) is diag(1, conj(phase)) @ [[c, s], [-s, c]]
                u_pp = c
                u_pq = s
                u_qp = -s * np.conj(phase)
                u_qq = c * np.conj(phase)

                col_p = a[:, p].copy()
                col_q = a[:, q]
                a[:, p] = col_p * u_pp + col_q * u_qp
                a[:, q] = col_p * u_pq + col_q * u_qq
                row_p = a[p, :].copy()
                row_q = a[q, :]
                a[p, :] = np.conj(u_pp) * row_p + np.conj(u_qp) * row_q
                a[q, :] = np.conj(u_pq) * row_p + np.conj(u_qq) * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = vp * u_pp + vq * u_qp
                v[:, q] = vp * u_pq + vq * u_qq
    return np.real(np.diag(a)).copy(), v
