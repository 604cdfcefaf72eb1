"""Product-measurement strategy built on the Fuchs-Caves measurement.

Each copy is measured in the eigenbasis ``{|y>}`` of the operator geometric
mean ``rho # sigma^{-1}``, whose eigenvalues are
``lambda_y = sqrt(<y|rho|y> / <y|sigma|y>)``. The induced distributions
``P(y) = <y|rho|y>`` and ``Q(y) = <y|sigma|y>`` attain the quantum fidelity:
``(sum_y sqrt(P(y) Q(y)))^2 = F(rho, sigma)``. The outcomes are then fed to
the classical likelihood-ratio test "decide rho iff
``prod_i lambda_{y_i} sqrt(p/q) >= 1``", whose Bayes error is at most
``sqrt(pq) F^{n/2}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from ._validation import (
    ValidationError,
    check_density,
    check_positive_int,
    check_probability,
    check_psd,
    check_same_dim,
)

__all__ = ["FuchsCavesMeasurement", "geometric_mean", "fuchs_caves", "fc_error"]

SHIFT = 1e-10


def _shifted(a):
    """``a + eps I`` with ``eps = 1e-10 Tr a``; keeps ``a`` positive definite."""
    eps = SHIFT * max(float(np.trace(a).real), 1e-300)
    return a + eps * np.eye(a.shape[0])


def _sqrt_pair(a):
    """``(a^{1/2}, a^{-1/2})`` for a positive definite ``a``."""
    w, v = np.linalg.eigh(a)
    r = np.sqrt(w)
    return (v * r) @ v.conj().T, (v / r) @ v.conj().T


def _mean_from_roots(a, b_sqrt, b_isqrt):
    """``B^{1/2} (B^{-1/2} A B^{-1/2})^{1/2} B^{1/2}`` given the two roots of ``B``."""
    inner = b_isqrt @ a @ b_isqrt
    w, v = np.linalg.eigh((inner + inner.conj().T) / 2)
    # no support cutoff: tiny eigenvalues carry the kernel direction of B
    mid = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    g = b_sqrt @ mid @ b_sqrt
    return (g + g.conj().T) / 2


def _positive_definite(m):
    floor = SHIFT * max(float(np.trace(m).real), 1e-300)
    return m if np.linalg.eigvalsh(m).min() > floor else _shifted(m)


def geometric_mean(a, b) -> np.ndarray:
    """Operator geometric mean ``A # B = B^{1/2} (B^{-1/2} A B^{-1/2})^{1/2} B^{1/2}``.

    Singular arguments are handled through the limit of ``A + eps I`` and
    ``B + eps I`` with ``eps = 1e-10 * trace``, applied only when the
    smallest eigenvalue is below that level.

    >>> import numpy as np
    >>> np.round(geometric_mean(np.diag([4.0, 1.0]), np.eye(2)).real, 12)
    array([[2., 0.],
           [0., 1.]])
    """
    a = check_psd(a, "A")
    b = check_psd(b, "B")
    check_same_dim(a, b)
    b_sqrt, b_isqrt = _sqrt_pair(_positive_definite(b))
    return _mean_from_roots(_positive_definite(a), b_sqrt, b_isqrt)


@dataclass(frozen=True, eq=False)
class FuchsCavesMeasurement:
    """Single-copy measurement and the induced classical pair.

    Attributes:
        basis: columns are the eigenvectors ``|y>``.
        lambdas: ``sqrt(P(y) / Q(y))``.
        P: outcome distribution under ``rho``.
        Q: outcome distribution under ``sigma``.
    """

    basis: np.ndarray
    lambdas: np.ndarray
    P: np.ndarray
    Q: np.ndarray

    @property
    def classical_fidelity(self) -> float:
        return float(np.sum(np.sqrt(self.P * self.Q)) ** 2)


def fuchs_caves(rho, sigma) -> FuchsCavesMeasurement:
    """Fuchs-Caves measurement for ``rho`` against ``sigma``.

    ``rho # sigma^{-1}`` is diagonalized; ``sigma^{-1}`` is taken of the
    shifted ``sigma`` when ``sigma`` is singular.
    """
    rho = check_density(rho, "rho")
    sigma = check_density(sigma, "sigma")
    check_same_dim(rho, sigma)
    # rho # sigma^{-1}: the roots of sigma^{-1} are those of sigma, swapped
    s_sqrt, s_isqrt = _sqrt_pair(_positive_definite(sigma))
    op = _mean_from_roots(rho, s_isqrt, s_sqrt)
    _, basis = np.linalg.eigh(op)
    P = np.clip(np.einsum("ji,jk,ki->i", basis.conj(), rho, basis).real, 0.0, None)
    Q = np.clip(np.einsum("ji,jk,ki->i", basis.conj(), sigma, basis).real, 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        lambdas = np.sqrt(np.where(Q > 0, P / np.where(Q > 0, Q, 1.0), np.inf))
    lambdas = np.where((P == 0) & (Q == 0), 1.0, lambdas)
    return FuchsCavesMeasurement(basis, lambdas, P / P.sum(), Q / Q.sum())


def _log(x):
    with np.errstate(divide="ignore"):
        return np.log(x)


def fc_error(p: float, rho, sigma, n: int) -> float:
    """Exact Bayes error of the Fuchs-Caves product strategy on ``n`` qubit copies.

    Outcome sequences are grouped by the count ``k`` of outcome ``0``.
    Sequences with count ``k`` are assigned to ``rho`` when
    ``k ln lambda_0 + (n - k) ln lambda_1 + 1/2 ln(p/q) >= 0`` (ties go to
    ``rho``). Class masses are summed in the log domain.
    """
    p = check_probability(p, "p", open_low=True, open_high=True)
    n = check_positive_int(n)
    rho = check_density(rho, "rho")
    sigma = check_density(sigma, "sigma")
    check_same_dim(rho, sigma)
    if rho.shape[0] != 2:
        raise ValidationError("fc_error enumerates qubit outcomes only (dim = 2)")
    q = 1.0 - p
    fc = fuchs_caves(rho, sigma)
    lam = _log(fc.lambdas)
    k = np.arange(n + 1)
    log_binom = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    # 0 * log 0 must vanish, so only weight counts whose outcomes are possible
    with np.errstate(invalid="ignore"):
        score = np.where(k > 0, k * lam[0], 0.0) + np.where(n - k > 0, (n - k) * lam[1], 0.0)
    score = np.nan_to_num(score, nan=0.0) + 0.5 * math.log(p / q)
    decide_rho = score >= -1e-12 * max(1, n)
    logP, logQ = _log(fc.P), _log(fc.Q)

    def class_log_mass(lp):
        with np.errstate(invalid="ignore"):
            a = np.where(k > 0, k * lp[0], 0.0)
            b = np.where(n - k > 0, (n - k) * lp[1], 0.0)
        return log_binom + a + b

    wrong_rho = class_log_mass(logP)[~decide_rho]
    wrong_sigma = class_log_mass(logQ)[decide_rho]
    err = 0.0
    if wrong_rho.size:
        err += p * math.exp(logsumexp(wrong_rho))
    if wrong_sigma.size:
        err += q * math.exp(logsumexp(wrong_sigma))
    return min(1.0, err)
