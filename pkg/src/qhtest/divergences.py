"""Fidelities, distances and divergences between quantum states.

All quantities are in nats. Divergences that are infinite because of a
support mismatch return ``math.inf`` rather than a large float.

The scalar functions (:func:`fidelity`, :func:`petz_renyi`, ...) return
plain floats. The dispatchers :func:`fidelity_family`, :func:`distance` and
:func:`renyi` wrap the same values in a :class:`DivergenceValue` that also
records which measure was computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._optimize import grid_golden_minimize
from ._validation import (
    DomainError,
    ValidationError,
    check_density,
    check_psd,
    check_same_dim,
)
from .linalg import mpower, sqrtm_psd, support_tolerance

__all__ = [
    "DivergenceValue",
    "fidelity",
    "holevo_fidelity",
    "z_fidelity",
    "trace_distance",
    "bures_distance",
    "hellinger_distance",
    "petz_renyi",
    "sandwiched_renyi",
    "relative_entropy",
    "q_s",
    "q_min",
    "chernoff",
    "supports_nested",
    "fidelity_family",
    "distance",
    "renyi",
]

# Squared overlaps between eigenvectors below this are rounding noise.
_OVERLAP_FLOOR = 1e-24
# Leakage of supp(rho) outside supp(sigma) tolerated by the nesting test.
_NESTING_TOL = 1e-8


@dataclass(frozen=True)
class DivergenceValue:
    """A computed measure together with its name and optional parameter."""

    value: float
    measure: str
    parameter: float | None = None

    def __float__(self) -> float:
        return float(self.value)


def _states(rho, sigma, check=check_density):
    rho = check(rho, "rho")
    sigma = check(sigma, "sigma")
    check_same_dim(rho, sigma)
    return rho, sigma


class _PairSpectra:
    """Eigendecompositions of two PSD matrices and their squared overlaps.

    Most Renyi-type traces are sums over eigenvalue pairs, e.g.
    ``Tr[a^s b^(1-s)] = sum_ij la_i^s lb_j^(1-s) |<u_i|v_j>|^2``.
    """

    def __init__(self, a, b):
        la, ua = np.linalg.eigh(a)
        lb, ub = np.linalg.eigh(b)
        self.sa = la > support_tolerance(la)
        self.sb = lb > support_tolerance(lb)
        self.la = la[self.sa]
        self.lb = lb[self.sb]
        w_full = np.abs(ua.conj().T @ ub) ** 2
        w_full[w_full < _OVERLAP_FLOOR] = 0.0
        self.w_full = w_full
        self.w = w_full[np.ix_(self.sa, self.sb)]

    def leakage(self) -> float:
        """Weight of supp(a) lying outside supp(b)."""
        return float(self.w_full[np.ix_(self.sa, ~self.sb)].sum())

    def trace_power(self, s: float) -> float:
        """``Tr[a^s b^(1-s)]`` with support-restricted powers; ``s`` in [0, 1] or beyond."""
        if s == 0.0:
            return float(self.w.sum(axis=0) @ self.lb)
        if s == 1.0:
            return float(self.la @ self.w.sum(axis=1))
        return float(self.la ** s @ self.w @ self.lb ** (1.0 - s))


def supports_nested(rho, sigma) -> bool:
    """True when ``supp(rho)`` is contained in ``supp(sigma)``."""
    return _PairSpectra(np.asarray(rho), np.asarray(sigma)).leakage() <= _NESTING_TOL


# ---------------------------------------------------------------- fidelities


def _root_factor(a):
    """Factor ``G`` with ``a = G G^dagger``, dropping only rounding-noise eigenvalues.

    Eigenvalues at or below ``8 eps ||a||`` are treated as zero. The coarser
    support cutoff used elsewhere would discard small genuine eigenvalues of
    tensor powers, whose square roots still matter at the ``1e-8`` level.
    """
    w, v = np.linalg.eigh(a)
    floor = 8 * np.finfo(float).eps * max(float(np.abs(w).max()), 1e-300)
    keep = w > floor
    return v[:, keep] * np.sqrt(w[keep])


def _fidelity_unchecked(rho, sigma) -> float:
    # F = ||G_rho^dagger G_sigma||_1^2 for any factors rho = G G^dagger;
    # singular values keep rounding errors linear in eps
    s = np.linalg.svd(_root_factor(rho).conj().T @ _root_factor(sigma), compute_uv=False)
    return float(min(1.0, s.sum() ** 2))


def fidelity(rho, sigma) -> float:
    """Fidelity ``F = ||sqrt(rho) sqrt(sigma)||_1^2``."""
    return _fidelity_unchecked(*_states(rho, sigma))


def holevo_fidelity(rho, sigma) -> float:
    """Holevo fidelity ``F_H = (Tr[sqrt(rho) sqrt(sigma)])^2``."""
    rho, sigma = _states(rho, sigma)
    return float(min(1.0, _PairSpectra(rho, sigma).trace_power(0.5) ** 2))


def z_fidelity(rho, sigma, z: float) -> float:
    """z-fidelity ``||rho^(1/4z) sigma^(1/4z)||_{2z}^{4z}`` for ``z`` in [1/2, 1].

    Interpolates between :func:`fidelity` (``z = 1/2``) and
    :func:`holevo_fidelity` (``z = 1``).
    """
    if not 0.5 <= z <= 1.0:
        raise DomainError(f"z must lie in [1/2, 1], got {z!r}")
    rho, sigma = _states(rho, sigma)
    m = mpower(rho, 1.0 / (4 * z)) @ mpower(sigma, 1.0 / (4 * z))
    s = np.linalg.svd(m, compute_uv=False)
    return float(min(1.0, np.sum(s ** (2 * z)) ** 2))


# ----------------------------------------------------------------- distances


def trace_distance(rho, sigma) -> float:
    """Normalized trace distance ``||rho - sigma||_1 / 2``."""
    rho, sigma = _states(rho, sigma)
    return float(min(1.0, 0.5 * np.abs(np.linalg.eigvalsh(rho - sigma)).sum()))


def bures_distance(rho, sigma) -> float:
    """Bures distance ``sqrt(2 (1 - sqrt(F)))``."""
    return math.sqrt(max(0.0, 2.0 * (1.0 - math.sqrt(fidelity(rho, sigma)))))


def hellinger_distance(rho, sigma) -> float:
    """Hellinger distance ``sqrt(2 (1 - sqrt(F_H)))``."""
    return math.sqrt(max(0.0, 2.0 * (1.0 - math.sqrt(holevo_fidelity(rho, sigma)))))


# --------------------------------------------------------------- divergences


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (alpha > 0 and alpha != 1 and math.isfinite(alpha)):
        raise DomainError(f"alpha must lie in (0,1) or (1,inf), got {alpha!r}")
    return alpha


def _renyi_from_trace(q: float, alpha: float) -> float:
    if q <= 0.0:
        # Only reachable for alpha < 1: orthogonal supports.
        return math.inf
    return math.log(q) / (alpha - 1.0)


def petz_renyi(rho, sigma, alpha: float) -> float:
    """Petz Renyi divergence ``ln Tr[rho^a sigma^(1-a)] / (a - 1)``.

    Returns ``inf`` for ``alpha > 1`` when ``supp(rho)`` is not contained in
    ``supp(sigma)``.
    """
    alpha = _check_alpha(alpha)
    rho, sigma = _states(rho, sigma)
    spectra = _PairSpectra(rho, sigma)
    if alpha > 1 and spectra.leakage() > _NESTING_TOL:
        return math.inf
    return _renyi_from_trace(spectra.trace_power(alpha), alpha)


def _inner_trace_power(inner, alpha: float) -> float:
    """``Tr[X^alpha]`` for the sandwiched operator ``X``.

    The supports were already settled when ``X`` was formed, so only
    rounding noise is discarded; genuine eigenvalues far below the support
    cutoff still contribute ``lambda^alpha`` for ``alpha < 1``.
    """
    w = np.linalg.eigvalsh((inner + inner.conj().T) / 2)
    w = w[w > 8 * np.finfo(float).eps * max(float(np.abs(w).max()), 1e-300)]
    return float(np.sum(w ** alpha))


def sandwiched_renyi(rho, sigma, alpha: float) -> float:
    """Sandwiched Renyi divergence.

    ``ln Tr[(rho^(1/2) sigma^((1-a)/a) rho^(1/2))^a] / (a - 1)``, with
    ``inf`` for ``alpha > 1`` and non-nested supports.
    """
    alpha = _check_alpha(alpha)
    rho, sigma = _states(rho, sigma)
    if alpha > 1 and not supports_nested(rho, sigma):
        return math.inf
    half = sqrtm_psd(rho)
    inner = half @ mpower(sigma, (1.0 - alpha) / alpha) @ half
    return _renyi_from_trace(_inner_trace_power(inner, alpha), alpha)


class _RenyiCurves:
    """Petz and sandwiched divergences of one validated pair, memoized by order.

    Bound optimizers evaluate the same pair at many orders ``alpha``; the
    eigendecompositions are taken once here and reused, matching
    :func:`petz_renyi` and :func:`sandwiched_renyi` value for value.
    """

    def __init__(self, rho, sigma):
        self.rho, self.sigma = _states(rho, sigma)
        self._spec = _PairSpectra(self.rho, self.sigma)
        self.nested = self._spec.leakage() <= _NESTING_TOL
        self._half = sqrtm_psd(self.rho)
        w, v = np.linalg.eigh(self.sigma)
        keep = np.abs(w) > support_tolerance(w)
        self._sw, self._sv = np.where(w < 0, 0.0, w)[keep], v[:, keep]
        self._petz, self._sandwiched = {}, {}

    def petz(self, alpha: float) -> float:
        alpha = float(alpha)
        if alpha not in self._petz:
            _check_alpha(alpha)
            if alpha > 1 and not self.nested:
                self._petz[alpha] = math.inf
            else:
                self._petz[alpha] = _renyi_from_trace(self._spec.trace_power(alpha), alpha)
        return self._petz[alpha]

    def sandwiched(self, alpha: float) -> float:
        alpha = float(alpha)
        if alpha not in self._sandwiched:
            _check_alpha(alpha)
            if alpha > 1 and not self.nested:
                self._sandwiched[alpha] = math.inf
            else:
                power = (self._sv * self._sw ** ((1.0 - alpha) / alpha)) @ self._sv.conj().T
                inner = self._half @ power @ self._half
                self._sandwiched[alpha] = _renyi_from_trace(_inner_trace_power(inner, alpha), alpha)
        return self._sandwiched[alpha]


def relative_entropy(rho, sigma) -> float:
    """Quantum relative entropy ``Tr[rho (ln rho - ln sigma)]``; ``inf`` unless supports nest."""
    rho, sigma = _states(rho, sigma)
    spectra = _PairSpectra(rho, sigma)
    if spectra.leakage() > _NESTING_TOL:
        return math.inf
    entropy_part = float(spectra.la @ np.log(spectra.la))
    cross = float(spectra.la @ spectra.w @ np.log(spectra.lb))
    return entropy_part - cross


# ----------------------------------------------------------------- Chernoff


def q_s(a, b, s: float) -> float:
    """``Tr[a^s b^(1-s)]`` for PSD ``a``, ``b`` and ``s`` in [0, 1].

    At the endpoints support projectors replace the zeroth powers:
    ``Q_0 = Tr[Pi_a b]`` and ``Q_1 = Tr[a Pi_b]``.
    """
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"s must lie in [0, 1], got {s!r}")
    a, b = _states(a, b, check_psd)
    return _PairSpectra(a, b).trace_power(float(s))


def q_min(a, b):
    """Minimum of ``Q_s = Tr[a^s b^(1-s)]`` over ``s`` in [0, 1].

    ``s -> ln Q_s`` is convex, so a 64-point grid followed by golden-section
    search (to ``|ds| <= 1e-8``) finds the global minimum.

    Returns:
        Tuple ``(Q_min, s_star)``.
    """
    a, b = _states(a, b, check_psd)
    spectra = _PairSpectra(a, b)
    if not np.any(spectra.w):
        return 0.0, 0.0

    def log_q(s):
        q = spectra.trace_power(float(s))
        return math.log(q) if q > 0 else -math.inf

    s_star, lq = grid_golden_minimize(log_q, 0.0, 1.0)
    return math.exp(lq), s_star


def chernoff(rho, sigma):
    """Chernoff divergence ``C = -ln min_s Tr[rho^s sigma^(1-s)]``.

    Returns:
        Tuple ``(C, s_star)``; ``C`` is ``inf`` for orthogonal states.
    """
    rho, sigma = _states(rho, sigma)
    q, s_star = q_min(rho, sigma)
    if q <= 0.0:
        return math.inf, s_star
    return max(0.0, -math.log(q)), s_star


# --------------------------------------------------------------- dispatchers


def fidelity_family(kind: str, rho, sigma, z: float | None = None) -> DivergenceValue:
    """Fidelity of the requested kind: ``"uhlmann"``, ``"holevo"`` or ``"z"``."""
    if (kind == "z") != (z is not None):
        raise ValidationError("z must be supplied exactly when kind == 'z'")
    if kind == "uhlmann":
        return DivergenceValue(fidelity(rho, sigma), "fidelity")
    if kind == "holevo":
        return DivergenceValue(holevo_fidelity(rho, sigma), "holevo_fidelity")
    if kind == "z":
        return DivergenceValue(z_fidelity(rho, sigma, z), "z_fidelity", float(z))
    raise ValidationError(f"unknown fidelity kind {kind!r}")


def distance(kind: str, rho, sigma) -> DivergenceValue:
    """Distance of the requested kind: ``"trace"``, ``"bures"`` or ``"hellinger"``."""
    funcs = {
        "trace": trace_distance,
        "bures": bures_distance,
        "hellinger": hellinger_distance,
    }
    if kind not in funcs:
        raise ValidationError(f"unknown distance kind {kind!r}")
    return DivergenceValue(funcs[kind](rho, sigma), f"{kind}_distance")


def renyi(kind: str, alpha: float, rho, sigma) -> DivergenceValue:
    """Renyi divergence of the requested kind: ``"petz"`` or ``"sandwiched"``."""
    if kind == "petz":
        return DivergenceValue(petz_renyi(rho, sigma, alpha), "petz_renyi", float(alpha))
    if kind == "sandwiched":
        return DivergenceValue(sandwiched_renyi(rho, sigma, alpha), "sandwiched_renyi", float(alpha))
    raise ValidationError(f"unknown Renyi kind {kind!r}")
