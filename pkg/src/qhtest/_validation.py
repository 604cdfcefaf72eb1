"""Input validation helpers shared by every module.

The checks here follow the usual ``check_*`` convention: they accept
array-likes, coerce them to ``numpy`` arrays, raise :class:`ValidationError`
on bad input and return the coerced value.
"""

from __future__ import annotations

import os
import numbers

import numpy as np

__all__ = [
    "ValidationError",
    "DomainError",
    "check_square",
    "check_hermitian",
    "check_density",
    "check_psd",
    "check_same_dim",
    "check_probability",
    "check_positive_int",
    "dense_cap",
    "check_dense_size",
]

HERMITIAN_TOL = 1e-12
DENSITY_TOL = 1e-10
DEFAULT_DENSE_CAP = 4096


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


class DomainError(ValidationError):
    """Raised when a function is evaluated outside its mathematical domain."""


def check_square(a, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a complex square 2-D array."""
    arr = np.asarray(a)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValidationError(f"{name} must be a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite entries")
    return arr.astype(complex)


def check_hermitian(a, name: str = "matrix", tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``a`` as a Hermitian complex array.

    The input must satisfy ``max|A - A^dagger| <= tol * max(1, max|A|)``;
    the exactly Hermitian part is returned.
    """
    arr = check_square(a, name)
    scale = max(1.0, float(np.abs(arr).max()))
    if np.abs(arr - arr.conj().T).max() > tol * scale:
        raise ValidationError(f"{name} is not Hermitian")
    return (arr + arr.conj().T) / 2


def check_psd(a, name: str = "matrix", tol: float = DENSITY_TOL) -> np.ndarray:
    """Return ``a`` as a Hermitian positive semi-definite array."""
    arr = check_hermitian(a, name)
    lam_min = np.linalg.eigvalsh(arr)[0]
    if lam_min < -tol * max(1.0, float(np.abs(arr).max())):
        raise ValidationError(f"{name} is not positive semi-definite (min eigenvalue {lam_min:.3g})")
    return arr


def check_density(a, name: str = "state", tol: float = DENSITY_TOL) -> np.ndarray:
    """Return ``a`` as a density matrix: Hermitian, PSD and of unit trace."""
    arr = check_psd(a, name, tol)
    tr = float(np.trace(arr).real)
    if abs(tr - 1.0) > tol:
        raise ValidationError(f"{name} must have unit trace, got {tr!r}")
    return arr


def check_same_dim(*arrays: np.ndarray) -> int:
    dims = {a.shape[0] for a in arrays}
    if len(dims) != 1:
        raise ValidationError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def check_probability(x, name: str, *, open_low: bool = False, open_high: bool = False) -> float:
    """Check that ``x`` is a real number in [0, 1] (optionally open ends)."""
    if not isinstance(x, numbers.Real) or isinstance(x, bool):
        raise ValidationError(f"{name} must be a real number")
    x = float(x)
    low_ok = x > 0 if open_low else x >= 0
    high_ok = x < 1 if open_high else x <= 1
    if not (low_ok and high_ok) or not np.isfinite(x):
        lo = "(" if open_low else "["
        hi = ")" if open_high else "]"
        raise ValidationError(f"{name} must lie in {lo}0, 1{hi}, got {x!r}")
    return x


def check_positive_int(n, name: str = "n") -> int:
    if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n < 1:
        raise ValidationError(f"{name} must be a positive integer, got {n!r}")
    return int(n)


def dense_cap() -> int:
    """Largest Hilbert-space dimension the dense backend will materialize.

    Defaults to 4096 and can be overridden with the ``QHT_DENSE_CAP``
    environment variable.
    """
    raw = os.environ.get("QHT_DENSE_CAP")
    if raw is None:
        return DEFAULT_DENSE_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValidationError(f"QHT_DENSE_CAP must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ValidationError("QHT_DENSE_CAP must be positive")
    return cap


def check_dense_size(dim: int, n: int) -> int:
    """Return ``dim**n`` or raise if it exceeds :func:`dense_cap`."""
    total = dim ** n
    cap = dense_cap()
    if total > cap:
        raise ValidationError(
            f"dense backend limited to dimension {cap}; dim**n = {dim}**{n} = {total}"
        )
    return total
