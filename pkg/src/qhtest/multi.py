"""M-ary discrimination: pretty-good measurement and an iterative optimum.

An ensemble ``{(p_m, rho_m)}`` is discriminated with ``n`` copies by a POVM
``{L_m}``; its error is ``sum_m p_m Tr[(I - L_m) rho_m^n]``. With
``A_m = p_m rho_m^n`` and ``S = sum_m A_m``:

* the pretty-good measurement is ``L_m = S^{-1/2} A_m S^{-1/2}``; its error is
  at most ``1/2 sum_{m != k} sqrt(p_m p_k) F(rho_m, rho_k)^{n/2}``;
* the optimum satisfies the Yuen-Kennedy-Lax conditions
  ``Y - A_m >= 0`` for all ``m``, where ``Y = sum_m A_m L_m`` is Hermitian.

:func:`optimal_error_iterative` runs the fixed-point map
``L_m <- G^{-1/2} A_m L_m A_m G^{-1/2}``, ``G = sum_m A_m L_m A_m``, whose
fixed points on full support meet those conditions, and stops once the
violation ``max_m ||(Y - A_m)_-||`` drops below ``tol``. ``Y + r I`` with
``r`` the violation is dual feasible, so the reported error is within
``r * dim`` of the optimum.

The constant in the asymptotic multi-hypothesis Chernoff bound of Li is not
computed here.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._validation import (
    ValidationError,
    check_dense_size,
    check_density,
    check_positive_int,
)
from .divergences import fidelity
from .linalg import kron_power, support_tolerance

__all__ = [
    "Ensemble",
    "Povm",
    "IterativeResult",
    "trine",
    "pgm",
    "error_of_povm",
    "pgm_error_bound",
    "pairwise_lower_bound",
    "optimal_error_iterative",
]


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Priors and states ``{(p_m, rho_m)}``.

    Args:
        priors: positive weights summing to one within 1e-10.
        states: density matrices of a common dimension.
    """

    priors: tuple
    states: tuple

    def __post_init__(self):
        priors = np.asarray(self.priors, dtype=float).ravel()
        states = tuple(check_density(s, f"states[{i}]") for i, s in enumerate(self.states))
        if len(states) == 0 or len(priors) != len(states):
            raise ValidationError(f"need one prior per state, got {len(priors)} priors and {len(states)} states")
        if not np.all(np.isfinite(priors)) or np.any(priors <= 0):
            raise ValidationError("priors must be positive")
        if abs(priors.sum() - 1.0) > 1e-10:
            raise ValidationError(f"priors must sum to 1, got {priors.sum()!r}")
        if len({s.shape for s in states}) != 1:
            raise ValidationError("all states must have the same dimension")
        object.__setattr__(self, "priors", tuple(float(p) for p in priors))
        object.__setattr__(self, "states", states)

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def dim(self) -> int:
        return self.states[0].shape[0]

    def weighted(self, n: int) -> list[np.ndarray]:
        """The operators ``A_m = p_m rho_m^n`` (dense, subject to the size cap)."""
        check_dense_size(self.dim, n)
        return [p * kron_power(s, n) for p, s in zip(self.priors, self.states)]


@dataclass(frozen=True, eq=False)
class Povm:
    """POVM elements; each is PSD within 1e-9 and they sum to the identity within 1e-9."""

    elements: tuple

    def __post_init__(self):
        els = tuple(np.asarray(e, dtype=complex) for e in self.elements)
        if not els:
            raise ValidationError("a POVM needs at least one element")
        dim = els[0].shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        for i, e in enumerate(els):
            if e.shape != (dim, dim):
                raise ValidationError(f"POVM element {i} has shape {e.shape}, expected {(dim, dim)}")
            if np.linalg.eigvalsh((e + e.conj().T) / 2).min() < -1e-9:
                raise ValidationError(f"POVM element {i} is not positive semidefinite")
            total += e
        if np.abs(total - np.eye(dim)).max() > 1e-9:
            raise ValidationError("POVM elements do not sum to the identity")
        object.__setattr__(self, "elements", els)


class IterativeResult(NamedTuple):
    """Output of :func:`optimal_error_iterative`.

    ``converged`` is False when ``max_iters`` ran out first; the returned
    POVM is then the best iterate seen and ``residual`` says how far it is
    from certified.
    """

    p_e: float
    povm: Povm
    residual: float
    iterations: int
    converged: bool

    @property
    def gap_bound(self) -> float:
        """Upper bound on ``p_e`` minus the true optimal error."""
        return self.residual * self.povm.elements[0].shape[0]


def trine(priors=None) -> Ensemble:
    """Three real qubit states at 120 degrees, pairwise overlap ``|<a|b>|^2 = 1/4``."""
    states = []
    for m in range(3):
        t = 2 * math.pi * m / 3
        psi = np.array([math.cos(t / 2), math.sin(t / 2)])
        states.append(np.outer(psi, psi).astype(complex))
    if priors is None:
        priors = (1 / 3, 1 / 3, 1 / 3)
    return Ensemble(tuple(priors), tuple(states))


def _inv_sqrt_on_support(s):
    w, v = np.linalg.eigh((s + s.conj().T) / 2)
    keep = w > support_tolerance(w)
    vk = v[:, keep]
    inv = (vk / np.sqrt(w[keep])) @ vk.conj().T
    return inv, vk


def _complete(elements, support_basis):
    """Add ``(I - P) / M`` to every element, ``P`` the projector onto ``support_basis``."""
    dim = elements[0].shape[0]
    comp = np.eye(dim) - support_basis @ support_basis.conj().T
    share = comp / len(elements)
    return [e + share for e in elements]


def _herm(x):
    return (x + x.conj().T) / 2


def pgm(ens: Ensemble, n: int = 1) -> Povm:
    """Pretty-good measurement ``S^{-1/2} A_m S^{-1/2}``.

    The inverse square root is taken on the support of ``S``; the
    complement of that support is shared equally among the elements, which
    changes no error probability.
    """
    n = check_positive_int(n)
    ops = ens.weighted(n)
    inv, basis = _inv_sqrt_on_support(sum(ops))
    elements = [_herm(inv @ a @ inv) for a in ops]
    return Povm(tuple(_complete(elements, basis)))


def _error(ops, elements) -> float:
    success = sum(float(np.einsum("ij,ji->", e, a).real) for a, e in zip(ops, elements))
    return min(1.0, max(0.0, 1.0 - success))


def error_of_povm(ens: Ensemble, n: int, povm: Povm) -> float:
    """Average error ``sum_m p_m Tr[(I - L_m) rho_m^n]`` of a POVM."""
    n = check_positive_int(n)
    if len(povm.elements) != ens.size:
        raise ValidationError(f"POVM has {len(povm.elements)} elements for {ens.size} hypotheses")
    if povm.elements[0].shape[0] != ens.dim ** n:
        raise ValidationError(
            f"POVM acts on dimension {povm.elements[0].shape[0]}, expected {ens.dim ** n}"
        )
    return _error(ens.weighted(n), povm.elements)


def _pair_fidelities(ens: Ensemble) -> dict:
    return {
        (m, k): fidelity(ens.states[m], ens.states[k])
        for m, k in itertools.combinations(range(ens.size), 2)
    }


def pgm_error_bound(ens: Ensemble, n: int, fidelities: dict | None = None) -> float:
    """Upper bound ``1/2 sum_{m != k} sqrt(p_m p_k) F(rho_m, rho_k)^{n/2}`` on the PGM error.

    Uses single-copy fidelities and their multiplicativity, so no tensor
    power is built.
    """
    n = check_positive_int(n)
    fids = _pair_fidelities(ens) if fidelities is None else fidelities
    p = ens.priors
    # each unordered pair appears twice in the ordered sum
    return float(sum(math.sqrt(p[m] * p[k]) * f ** (n / 2) for (m, k), f in fids.items()))


def pairwise_lower_bound(ens: Ensemble, n: int, fidelities: dict | None = None) -> float:
    """Lower bound ``max_{m != k} p_m p_k / (p_m + p_k) F(rho_m, rho_k)^n`` on the optimal error.

    Discriminating a single pair of the hypotheses is never harder than
    discriminating all of them.
    """
    n = check_positive_int(n)
    fids = _pair_fidelities(ens) if fidelities is None else fidelities
    p = ens.priors
    if not fids:
        return 0.0
    return float(max(p[m] * p[k] / (p[m] + p[k]) * f ** n for (m, k), f in fids.items()))


def _ykl_residual(ops, elements) -> float:
    y = _herm(sum(a @ e for a, e in zip(ops, elements)))
    worst = 0.0
    for a in ops:
        w = np.linalg.eigvalsh(y - a)
        worst = max(worst, -float(w.min()))
    return worst


def optimal_error_iterative(ens: Ensemble, n: int = 1, tol: float = 1e-7, max_iters: int = 5000) -> IterativeResult:
    """Minimum M-ary error by a certified fixed-point iteration.

    Starts from the pretty-good measurement and applies
    ``L_m <- G^{-1/2} A_m L_m A_m G^{-1/2}`` until the Yuen-Kennedy-Lax
    violation falls to ``tol``. The map is applied on the support of
    ``S = sum_m A_m``; the complement is shared equally as in :func:`pgm`.

    Returns:
        :class:`IterativeResult`. When ``converged`` is True, ``p_e`` is
        within ``residual * dim`` of the optimum.
    """
    n = check_positive_int(n)
    if tol <= 0:
        raise ValidationError(f"tol must be positive, got {tol!r}")
    max_iters = check_positive_int(max_iters, "max_iters")
    ops = ens.weighted(n)
    _, basis = _inv_sqrt_on_support(sum(ops))
    # restrict to the support of S, where the iteration is well defined
    red = [_herm(basis.conj().T @ a @ basis) for a in ops]
    inv, _ = _inv_sqrt_on_support(sum(red))
    elements = [_herm(inv @ a @ inv) for a in red]

    best = None
    for it in range(1, max_iters + 1):
        residual = _ykl_residual(red, elements)
        if best is None or residual < best[0]:
            best = (residual, elements, it)
        if residual <= tol:
            break
        x = [_herm(a @ e @ a) for a, e in zip(red, elements)]
        g_inv, _ = _inv_sqrt_on_support(sum(x))
        elements = [_herm(g_inv @ xi @ g_inv) for xi in x]
    residual, elements, it = best
    full = _complete([basis @ e @ basis.conj().T for e in elements], basis)
    return IterativeResult(_error(red, elements), Povm(tuple(full)), residual, it, residual <= tol)
