"""Small dense linear algebra: conditioned solves and Pfaffians.

All matrices here are tiny (dimension <= ~20), so everything is done
densely at O(n^3) with numpy.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import NotSkewSymmetric, OddDimension, SingularMatrix

# Solves with an estimated 2-norm condition number above this raise
# SingularMatrix instead of returning garbage silently.
COND_THRESHOLD = 1e12


class Precision(Enum):
    BINARY64 = "binary64"
    EXTENDED = "extended"


def as_cmatrix(m) -> np.ndarray:
    """Coerce to a 2-d complex array, rejecting non-finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim == 1:
        a = a[:, None]
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf")
    return a


def solve(m, rhs) -> np.ndarray:
    """Solve m @ x = rhs for square m, refusing ill-conditioned systems."""
    a = as_cmatrix(m)
    b = as_cmatrix(rhs)
    if a.shape[0] != a.shape[1]:
        raise SingularMatrix(f"matrix is {a.shape[0]}x{a.shape[1]}, not square")
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > COND_THRESHOLD:
        raise SingularMatrix(f"condition number {cond:.3e} exceeds {COND_THRESHOLD:.0e}")
    return np.linalg.solve(a, b)


def pfaffian(m) -> complex:
    """Pfaffian of an even-dimensional skew-symmetric matrix.

    Uses skew-symmetric (Parlett-Reid) tridiagonalization with partial
    pivoting; the Pfaffian is the product of the super-diagonal entries
    of the tridiagonal form, with a sign flip per row/column swap.
    """
    a = as_cmatrix(m).copy()
    n = a.shape[0]
    if a.shape[0] != a.shape[1]:
        raise NotSkewSymmetric("matrix is not square")
    scale = np.max(np.abs(a)) if n else 0.0
    if scale > 0 and np.max(np.abs(a + a.T)) > 1e-12 * scale:
        raise NotSkewSymmetric("matrix is not skew-symmetric within 1e-12 relative")
    if n % 2 == 1:
        raise OddDimension(f"dimension {n} is odd")
    if n == 0:
        return 1.0 + 0.0j
    if scale == 0.0:
        return 0.0 + 0.0j

    pf = 1.0 + 0.0j
    for k in range(0, n - 2, 2):
        # Pivot the largest entry of column k below the diagonal into row k+1.
        kp = k + 1 + int(np.argmax(np.abs(a[k + 1:, k])))
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            pf = -pf
        if a[k + 1, k] == 0:
            return 0.0 + 0.0j
        pf *= a[k, k + 1]
        tau = a[k, k + 2:] / a[k, k + 1]
        a[k + 2:, k + 2:] += np.outer(tau, a[k + 2:, k + 1])
        a[k + 2:, k + 2:] -= np.outer(a[k + 2:, k + 1], tau)
    pf *= a[n - 2, n - 1]
    return complex(pf)
