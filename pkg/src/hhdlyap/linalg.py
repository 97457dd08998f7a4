"""Small dense symmetric eigenvalue and singular value routines.

Eigenvalues come from the cyclic Jacobi method; singular values are the
square roots of the eigenvalues of ``A.T @ A``. The matrices that show up
here (Jacobians and Hessians at an equilibrium) are tiny, so clarity wins
over speed.
"""

from enum import Enum

import numpy as np

__all__ = [
    "Definiteness",
    "NotSymmetricError",
    "as_square_matrix",
    "jacobi_eigh",
    "symmetric_eigenvalues",
    "singular_values",
    "definiteness",
]

SYMMETRY_RTOL = 1e-12
OFFDIAG_RTOL = 1e-13
ZERO_RTOL = 1e-10
MAX_SWEEPS = 100


class NotSymmetricError(ValueError):
    pass


class Definiteness(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    INDEFINITE = "indefinite"
    SEMIDEFINITE = "semidefinite"


def as_square_matrix(m):
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def _check_symmetric(a):
    scale = np.linalg.norm(a)
    if np.linalg.norm(a - a.T) > SYMMETRY_RTOL * scale:
        raise NotSymmetricError("matrix is not symmetric")


def _off(a):
    return np.linalg.norm(a - np.diag(np.diag(a)))


def jacobi_eigh(m):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns ``(values, vectors)`` with ascending values and orthonormal
    eigenvectors in the columns of ``vectors``.
    """
    a = as_square_matrix(m)
    _check_symmetric(a)
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    q = np.eye(n)
    tol = OFFDIAG_RTOL * np.linalg.norm(a)
    for _ in range(MAX_SWEEPS):
        if _off(a) <= tol:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                diff = a[r, r] - a[p, p]
                if apr == 0.0 or abs(apr) <= 1e-300 * abs(diff):
                    # negligible; the rotation would be the identity
                    a[p, r] = a[r, p] = 0.0
                    continue
                # rotation zeroing a[p, r]
                tau = diff / (2.0 * apr)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[r, r] = c
                rot[p, r] = s
                rot[r, p] = -s
                a = rot.T @ a @ rot
                a[p, r] = a[r, p] = 0.0
                q = q @ rot
    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    return values[order], q[:, order]


def symmetric_eigenvalues(m):
    """Ascending eigenvalues of a symmetric matrix."""
    return jacobi_eigh(m)[0]


def singular_values(m):
    """Ascending singular values: square roots of the eigenvalues of A^T A."""
    a = as_square_matrix(m)
    gram = a.T @ a
    gram = 0.5 * (gram + gram.T)
    values = symmetric_eigenvalues(gram)
    return np.sqrt(np.clip(values, 0.0, None))


def definiteness(m):
    """Classify a symmetric matrix by the signs of its eigenvalues.

    Eigenvalues within ``1e-10 * ||M||_F`` of zero count as zero.
    """
    a = as_square_matrix(m)
    values = symmetric_eigenvalues(a)
    thresh = ZERO_RTOL * np.linalg.norm(a)
    pos = values > thresh
    neg = values < -thresh
    if pos.all():
        return Definiteness.POSITIVE
    if neg.all():
        return Definiteness.NEGATIVE
    if pos.any() and neg.any():
        return Definiteness.INDEFINITE
    return Definiteness.SEMIDEFINITE
