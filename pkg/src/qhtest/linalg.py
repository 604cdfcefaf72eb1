"""Dense Hermitian linear algebra used throughout the package.

Everything here works on plain ``numpy`` arrays. Fractional powers and
logarithms act on the support of their argument only: eigenvalues whose
magnitude is below ``1e-10 * max(1, lambda_max)`` are treated as exact
zeros.
"""

from __future__ import annotations

from functools import reduce
from typing import Callable, NamedTuple

import numpy as np

from ._validation import (
    DomainError,
    ValidationError,
    check_hermitian,
)

__all__ = [
    "EigenDecomposition",
    "support_tolerance",
    "eigh",
    "matrix_function",
    "mpower",
    "sqrtm_psd",
    "logm_psd",
    "support_projector",
    "schatten_norm",
    "trace_norm",
    "positive_part",
    "kron_power",
    "random_density",
    "random_pure_state",
]

SUPPORT_RTOL = 1e-10


class EigenDecomposition(NamedTuple):
    """Eigenvalues in ascending order and the matching unitary of eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def support_tolerance(eigenvalues: np.ndarray) -> float:
    """Cutoff below which an eigenvalue counts as zero.

    Uses ``1e-10 * max(1, largest |eigenvalue|)``.
    """
    top = float(np.max(np.abs(eigenvalues))) if len(eigenvalues) else 0.0
    return SUPPORT_RTOL * max(1.0, top)


def eigh(h) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Args:
        h: Hermitian matrix (checked to ``1e-12``).

    Returns:
        EigenDecomposition with real ascending eigenvalues.

    Raises:
        ValidationError: if ``h`` is not Hermitian.
    """
    h = check_hermitian(h)
    w, v = np.linalg.eigh(h)
    return EigenDecomposition(w, v)


def _apply_spectral(w, v, f, support_tol):
    tol = support_tolerance(w) if support_tol is None else float(support_tol)
    keep = np.abs(w) > tol
    values = np.zeros(len(w), dtype=complex)
    if np.any(keep):
        with np.errstate(all="ignore"):
            fw = np.asarray(f(w[keep]), dtype=complex)
        if not np.all(np.isfinite(fw)):
            raise DomainError("function is not finite on a retained eigenvalue")
        values[keep] = fw
    return (v * values) @ v.conj().T


def matrix_function(h, f: Callable[[np.ndarray], np.ndarray], support_tol: float | None = None) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    Eigenvalues with magnitude at or below ``support_tol`` are treated as
    the kernel and mapped to zero. This is the regularized-limit convention
    for positive powers, and it projects out the kernel for negative powers
    and the logarithm.

    Args:
        h: Hermitian matrix.
        f: vectorized scalar function applied to retained eigenvalues.
        support_tol: kernel cutoff; defaults to ``1e-10 * max(1, |lambda|_max)``.

    Raises:
        DomainError: if ``f`` is not finite on a retained eigenvalue.

    Example:
        >>> import numpy as np
        >>> matrix_function(np.diag([4.0, 1.0]), np.sqrt).real
        array([[2., 0.],
               [0., 1.]])
    """
    w, v = eigh(h)
    out = _apply_spectral(w, v, f, support_tol)
    return (out + out.conj().T) / 2


def _psd_function(a, f, support_tol):
    w, v = eigh(a)
    tol = support_tolerance(w) if support_tol is None else float(support_tol)
    if np.any(w < -tol):
        raise DomainError("matrix has eigenvalues below -support_tol; it is not PSD")
    out = _apply_spectral(np.where(w < 0, 0.0, w), v, f, tol)
    return (out + out.conj().T) / 2


def mpower(a, p: float, support_tol: float | None = None) -> np.ndarray:
    """Power ``a**p`` of a PSD matrix, taken on its support.

    Kernel directions map to zero for every ``p``, which is the
    ``eps -> 0+`` limit for ``p > 0`` and the support-restricted inverse
    for ``p <= 0``.
    """
    return _psd_function(a, lambda x: x ** p, support_tol)


def sqrtm_psd(a, support_tol: float | None = None) -> np.ndarray:
    """Square root of a PSD matrix, with the kernel cutoff of :func:`mpower`."""
    return _psd_function(a, np.sqrt, support_tol)


def logm_psd(a, support_tol: float | None = None) -> np.ndarray:
    """Logarithm of a PSD matrix on its support (kernel mapped to zero)."""
    return _psd_function(a, np.log, support_tol)


def support_projector(a, support_tol: float | None = None) -> np.ndarray:
    """Orthogonal projector onto the span of eigenvectors with eigenvalue above the cutoff."""
    w, v = eigh(a)
    tol = support_tolerance(w) if support_tol is None else support_tol
    vs = v[:, w > tol]
    return vs @ vs.conj().T


def schatten_norm(a, p: float) -> float:
    """Schatten ``p``-norm, the ``p``-norm of the singular values.

    ``p = 1`` gives the trace norm and ``p = np.inf`` the operator norm.

    Raises:
        DomainError: if ``p < 1``.
    """
    if not p >= 1:
        raise DomainError(f"Schatten norm needs p >= 1, got {p!r}")
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2:
        raise ValidationError("schatten_norm expects a 2-D array")
    s = np.linalg.svd(arr, compute_uv=False)
    if np.isinf(p):
        return float(s.max(initial=0.0))
    top = s.max(initial=0.0)
    if top == 0.0:
        return 0.0
    return float(top * np.sum((s / top) ** p) ** (1.0 / p))


def trace_norm(a) -> float:
    """Trace norm; uses the eigenvalues when ``a`` is Hermitian."""
    arr = np.asarray(a, dtype=complex)
    if arr.shape[0] == arr.shape[1] and np.allclose(arr, arr.conj().T, rtol=0, atol=1e-14 * max(1.0, np.abs(arr).max())):
        return float(np.abs(np.linalg.eigvalsh((arr + arr.conj().T) / 2)).sum())
    return float(np.linalg.svd(arr, compute_uv=False).sum())


def positive_part(h, zero_tol: float = 1e-10):
    """Projectors onto the positive and null eigenspaces of ``h``.

    Args:
        h: Hermitian matrix.
        zero_tol: eigenvalues with ``|lambda| <= zero_tol`` span the null projector.

    Returns:
        Tuple ``(P_plus, P_zero, value)`` where ``value = Tr[h P_plus]``.
    """
    if zero_tol < 0:
        raise ValidationError("zero_tol must be non-negative")
    w, v = eigh(h)
    pos = w > zero_tol
    nul = np.abs(w) <= zero_tol
    vp, v0 = v[:, pos], v[:, nul]
    return vp @ vp.conj().T, v0 @ v0.conj().T, float(w[pos].sum())


def kron_power(a, n: int) -> np.ndarray:
    """``n``-fold Kronecker power of ``a``."""
    if n < 1:
        raise ValidationError("kron_power needs n >= 1")
    return reduce(np.kron, [np.asarray(a)] * n)


def random_density(dim: int, rank: int | None = None, seed=None) -> np.ndarray:
    """Random density matrix from the Hilbert-Schmidt induced measure.

    Draws a ``dim x rank`` complex Ginibre matrix ``G`` and returns
    ``G G^dagger / Tr[G G^dagger]``. ``rank=1`` gives pure states.

    Args:
        dim: Hilbert-space dimension.
        rank: rank of the state (defaults to ``dim``).
        seed: anything accepted by :func:`numpy.random.default_rng`.
    """
    if rank is None:
        rank = dim
    if not (isinstance(dim, (int, np.integer)) and dim >= 1):
        raise ValidationError("dim must be a positive integer")
    if not (isinstance(rank, (int, np.integer)) and 1 <= rank <= dim):
        raise ValidationError(f"rank must satisfy 1 <= rank <= dim, got {rank!r}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def random_pure_state(dim: int, seed=None) -> np.ndarray:
    """Random rank-one density matrix."""
    return random_density(dim, 1, seed)
