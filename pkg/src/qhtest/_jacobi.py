"""Cyclic two-sided Jacobi eigensolver for real symmetric matrices.

LAPACK's QR-based ``eigh`` is accurate only relative to the norm of the
whole matrix. The Schur backend needs eigenvectors of strongly graded
pencils whose relevant eigenvalues are many orders of magnitude below the
norm. Jacobi rotations with a *relative* off-diagonal test,
``|a_pq| <= tol * sqrt(|a_pp a_qq|)``, preserve that grading and resolve
small eigenpairs to high relative accuracy.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

__all__ = ["jacobi_eigh"]


@njit(cache=True)
def _jacobi(a, tol, max_sweeps):
    d = a.shape[0]
    vt = np.eye(d)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                if abs(apq) <= tol * math.sqrt(abs(app * aqq)):
                    continue
                rotated = True
                theta = (aqq - app) / (2.0 * apq)
                sign = 1.0 if theta >= 0.0 else -1.0
                t = sign / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(d):
                    x = a[p, k]
                    y = a[q, k]
                    a[p, k] = c * x - s * y
                    a[q, k] = s * x + c * y
                for k in range(d):
                    a[k, p] = a[p, k]
                    a[k, q] = a[q, k]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(d):
                    x = vt[p, k]
                    y = vt[q, k]
                    vt[p, k] = c * x - s * y
                    vt[q, k] = s * x + c * y
        if not rotated:
            break
    return np.diag(a).copy(), vt


def jacobi_eigh(a: np.ndarray, tol: float = 1e-15, max_sweeps: int = 80):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi.

    Returns:
        Tuple ``(w, v)`` of (unsorted) eigenvalues and the orthogonal matrix
        whose columns are the eigenvectors.
    """
    a = np.array(a, dtype=np.float64, order="C", copy=True)
    w, vt = _jacobi(a, float(tol), int(max_sweeps))
    return w, vt.T
