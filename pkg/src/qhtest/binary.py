"""Optimal binary discrimination on tensor powers.

Two scenarios are covered:

* symmetric (Bayesian) testing with priors ``p`` and ``q = 1 - p``, whose
  optimal error is ``(1 - ||p rho^n - q sigma^n||_1) / 2`` and whose
  optimal test projects onto the positive part of ``p rho^n - q sigma^n``;
* asymmetric (Neyman-Pearson) testing: minimize the type-II error
  ``Tr[L sigma^n]`` subject to the type-I error ``Tr[(I - L) rho^n] <= eps``.

``backend="dense"`` materializes the ``d^n``-dimensional operators (capped
by :func:`qhtest._validation.dense_cap`); ``backend="schur"`` uses the
qubit block decomposition of :mod:`qhtest.schur` and scales to hundreds
of copies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import schur
from ._neyman_pearson import Evaluation, solve_dual
from ._validation import (
    ValidationError,
    check_dense_size,
    check_density,
    check_hermitian,
    check_positive_int,
    check_probability,
    check_same_dim,
)
from .linalg import kron_power, support_projector, support_tolerance

__all__ = [
    "BinaryInstance",
    "Test",
    "helstrom_error",
    "beta",
    "log_beta",
    "error_of_test",
    "lagrangian_gap",
]

BACKENDS = ("dense", "schur")


@dataclass(frozen=True, eq=False)
class BinaryInstance:
    """Prior ``p`` on ``rho`` and ``q = 1 - p`` on ``sigma``."""

    p: float
    rho: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", check_probability(self.p, "p", open_low=True, open_high=True))
        rho = check_density(self.rho, "rho")
        sigma = check_density(self.sigma, "sigma")
        check_same_dim(rho, sigma)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "sigma", sigma)

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def dim(self) -> int:
        return self.rho.shape[0]


@dataclass(frozen=True, eq=False)
class Test:
    """A binary test ``0 <= operator <= I``; outcome "rho" is accepted with ``operator``.

    Attributes:
        operator: the test operator on the ``d^n``-dimensional space.
        weight: randomization weight ``x`` on the boundary projector.
        log_threshold: log of the multiplier ``mu`` at which the test is the
            positive part of ``mu rho^n - sigma^n`` (Neyman-Pearson tests only).
    """

    operator: np.ndarray
    weight: float = 0.0
    log_threshold: float | None = None


def _check_backend(backend, dim):
    if backend not in BACKENDS:
        raise ValidationError(f"backend must be one of {BACKENDS}, got {backend!r}")
    if backend == "schur" and dim != 2:
        raise ValidationError("the schur backend needs qubit states (dim = 2)")


def helstrom_error(inst: BinaryInstance, n: int = 1, backend: str = "dense"):
    """Optimal error of symmetric binary testing with ``n`` copies.

    Returns:
        Tuple ``(p_e, test)``. ``test`` is a :class:`Test` (dense) or a
        :class:`qhtest.schur.BlockTest` (schur) projecting onto the positive
        part of ``p rho^n - q sigma^n``.

    Example:
        >>> import numpy as np
        >>> zero = np.diag([1.0, 0.0]); plus = np.full((2, 2), 0.5)
        >>> round(helstrom_error(BinaryInstance(0.5, zero, plus))[0], 6)
        0.146447
    """
    n = check_positive_int(n)
    _check_backend(backend, inst.dim)
    if backend == "schur":
        a = schur.schur_blocks(inst.rho, n)
        b = schur.schur_blocks(inst.sigma, n)
        return schur.block_helstrom(inst.p, a, b, return_test=True)
    check_dense_size(inst.dim, n)
    x = inst.p * kron_power(inst.rho, n) - inst.q * kron_power(inst.sigma, n)
    w, v = np.linalg.eigh((x + x.conj().T) / 2)
    vp = v[:, w > 0]
    pe = 0.5 * (1.0 - float(np.abs(w).sum()))
    pe = min(min(inst.p, inst.q), max(0.0, pe))
    return pe, Test(vp @ vp.conj().T)


def error_of_test(inst: BinaryInstance, n: int, test) -> tuple[float, float, float]:
    """Errors of a dense test: ``(type_I, type_II, bayes)``.

    ``type_I = Tr[(I - L) rho^n]``, ``type_II = Tr[L sigma^n]`` and
    ``bayes = p type_I + q type_II``.
    """
    n = check_positive_int(n)
    op = test.operator if isinstance(test, Test) else test
    op = check_hermitian(op, "test operator", tol=1e-9)
    if op.shape[0] != inst.dim ** n:
        raise ValidationError(f"test acts on dimension {op.shape[0]}, expected {inst.dim ** n}")
    accepted = float(np.einsum("ij,ji->", op, kron_power(inst.rho, n)).real)
    type_ii = float(np.einsum("ij,ji->", op, kron_power(inst.sigma, n)).real)
    type_i = min(1.0, max(0.0, 1.0 - accepted))
    type_ii = min(1.0, max(0.0, type_ii))
    return type_i, type_ii, inst.p * type_i + inst.q * type_ii


# ----------------------------------------------------------------- beta


def _dense_pencil(rho, sigma, n):
    a = kron_power(rho, n)
    b = kron_power(sigma, n)

    def evaluate(log_mu):
        with np.errstate(under="ignore"):
            x = a - math.exp(-log_mu) * b if log_mu >= 0 else math.exp(log_mu) * a - b
        w, v = np.linalg.eigh((x + x.conj().T) / 2)
        p = v[:, w > 1e-13 * max(1.0, np.abs(w).max())]
        accepted = float(np.einsum("ij,ij->", p.conj(), a @ p).real)
        bp = float(np.einsum("ij,ij->", p.conj(), b @ p).real)
        return Evaluation(accepted, math.log(bp) if bp > 0 else -math.inf, p)

    lr = np.linalg.eigvalsh(rho)
    ls = np.linalg.eigvalsh(sigma)
    lr = lr[lr > support_tolerance(lr)]
    ls = ls[ls > support_tolerance(ls)]
    g_max = math.log(lr.max()) - math.log(ls.min())
    g_min = math.log(lr.min()) - math.log(ls.max())
    lo = max(-700.0, -n * g_max - 2.0)
    hi = min(700.0, -n * g_min + 2.0)
    return a, b, evaluate, lo, hi


def _dense_beta(rho, sigma, eps, n):
    check_dense_size(rho.shape[0], n)
    a, b, evaluate, lo, hi = _dense_pencil(rho, sigma, n)
    if eps == 0.0:
        proj = support_projector(a)
        bp = float(np.einsum("ij,ji->", proj, b).real)
        return (math.log(bp) if bp > 0 else -math.inf), Test(proj, 0.0, math.inf)
    sol = solve_dual(evaluate, 1.0 - eps, lo, hi)
    ph = sol.high.payload
    op = sol.weight * (ph @ ph.conj().T)
    if sol.low is not None:
        pl = sol.low.payload
        op = op + (1.0 - sol.weight) * (pl @ pl.conj().T)
    return sol.log_beta, Test(op, sol.weight, sol.log_mu_high)


def _beta_impl(rho, sigma, eps, n, backend):
    rho = check_density(rho, "rho")
    sigma = check_density(sigma, "sigma")
    check_same_dim(rho, sigma)
    eps = check_probability(eps, "eps", open_high=True)
    n = check_positive_int(n)
    _check_backend(backend, rho.shape[0])
    if backend == "schur":
        return schur._pencil_beta(rho, sigma, n, eps)
    return _dense_beta(rho, sigma, eps, n)


def beta(rho, sigma, eps: float, n: int = 1, backend: str = "dense"):
    """Minimal type-II error at type-I level ``eps`` for ``n`` copies.

    The optimal test is the positive part of ``mu rho^n - sigma^n``, plus a
    randomized share of its null space at the critical multiplier ``mu``.
    That multiplier is found by root-finding the accepted mass in
    ``log(mu)``, and the randomization makes the type-I error exactly
    ``eps``. Directions of ``rho^n`` outside the support of ``sigma^n`` are
    positive for every ``mu > 0``, so they are accepted first.

    Returns:
        Tuple ``(beta, test)``.
    """
    lb, test = _beta_impl(rho, sigma, eps, n, backend)
    return (math.exp(lb) if lb > -745 else 0.0), test


def log_beta(rho, sigma, eps: float, n: int = 1, backend: str = "dense") -> float:
    """``ln beta_eps``; stays finite when ``beta`` itself underflows."""
    return _beta_impl(rho, sigma, eps, n, backend)[0]


def lagrangian_gap(rho, sigma, n: int, test: Test, trials: int = 100, seed=0) -> float:
    """Optimality check for a Neyman-Pearson test.

    With ``mu = exp(test.log_threshold)`` the optimal test minimizes the
    Lagrangian ``L(T) = Tr[T sigma^n] + mu Tr[(I - T) rho^n]`` over all
    ``0 <= T <= I``. This draws ``trials`` random feasible operators
    (random eigenbases with eigenvalues in [0, 1], plus ``0`` and ``I``) and
    returns ``min L(T') - L(test)``, which is nonnegative up to rounding for
    an optimal test.
    """
    rho = check_density(rho, "rho")
    sigma = check_density(sigma, "sigma")
    a = kron_power(rho, n)
    b = kron_power(sigma, n)
    mu = math.exp(test.log_threshold) if test.log_threshold is not None and np.isfinite(test.log_threshold) else 0.0
    dim = a.shape[0]

    def lagrangian(t):
        return float(np.einsum("ij,ji->", t, b).real) + mu * (1.0 - float(np.einsum("ij,ji->", t, a).real))

    base = lagrangian(test.operator)
    rng = np.random.default_rng(seed)
    best = min(lagrangian(np.zeros((dim, dim))), lagrangian(np.eye(dim)))
    for _ in range(trials):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        u, _ = np.linalg.qr(g)
        t = (u * rng.uniform(0.0, 1.0, dim)) @ u.conj().T
        best = min(best, lagrangian(t))
    return best - base
