"""Named inequalities between fidelities, distances and divergences.

Each check returns a *violation*: ``(lhs - rhs) / max(1, |lhs|, |rhs|)`` for
an inequality ``lhs <= rhs`` (or the scaled absolute difference for an
equality). A value at or below a small slack (``1e-9`` in the test suite)
means the relation holds numerically. Infinite pairs where both sides are
``inf`` count as satisfied.
"""

from __future__ import annotations

import math

import numpy as np

from . import divergences as dv
from .linalg import kron_power, mpower, sqrtm_psd, trace_norm

__all__ = [
    "violation",
    "state_relations",
    "psd_relations",
    "multiplicativity",
    "commuting_relations",
    "Z_GRID",
]

Z_GRID = (0.5, 0.6, 0.7, 0.8, 0.9, 1.0)


def violation(lhs: float, rhs: float) -> float:
    """Scaled amount by which ``lhs <= rhs`` fails (``<= 0`` when it holds)."""
    if lhs == rhs:
        return 0.0
    if math.isinf(rhs) and rhs > 0 or math.isinf(lhs) and lhs < 0:
        return 0.0
    if math.isinf(lhs) or math.isinf(rhs):
        return math.inf
    return (lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def _neg_log(x):
    return -math.log(x) if x > 0 else math.inf


def _chain(name, values, out):
    for i in range(len(values) - 1):
        out[f"{name}[{i}]"] = violation(values[i], values[i + 1])


def state_relations(rho, sigma) -> dict:
    """Relations between fidelity-type quantities of two states.

    * ``F_H <= F <= Q_min <= sqrt(F_H)``;
    * ``d_B <= d_H <= sqrt(2) d_B``;
    * ``d_B^2 <= -ln F <= -ln F_H <= 2 C <= -2 ln F``;
    * ``-ln F <= -ln F_z <= -ln F_z' <= -ln F_H`` along :data:`Z_GRID`.
    """
    f = dv.fidelity(rho, sigma)
    fh = dv.holevo_fidelity(rho, sigma)
    qmin, _ = dv.q_min(rho, sigma)
    c, _ = dv.chernoff(rho, sigma)
    db = dv.bures_distance(rho, sigma)
    dh = dv.hellinger_distance(rho, sigma)
    out = {}
    _chain("fidelity_chain", [fh, f, qmin, math.sqrt(fh)], out)
    _chain("bures_hellinger", [db, dh, math.sqrt(2) * db], out)
    _chain("bures_chernoff", [db ** 2, _neg_log(f), _neg_log(fh), 2 * c, 2 * _neg_log(f)], out)
    zs = [_neg_log(dv.z_fidelity(rho, sigma, z)) for z in Z_GRID]
    _chain("z_fidelities", [_neg_log(f)] + zs + [_neg_log(fh)], out)
    return out


def _root_overlap(a, b):
    sa, sb = sqrtm_psd(a), sqrtm_psd(b)
    return sa @ sb


def psd_relations(a, b, c) -> dict:
    """Trace-norm relations for PSD operators ``A``, ``B``, ``C``.

    * ``(Tr[A+B] - ||A-B||_1) / 2 <= Q_min(A||B)``;
    * ``Tr[A+B] - 2 Tr[sqrt(A) sqrt(B)] <= ||A-B||_1``;
    * ``||A-B||_1 <= sqrt(Tr[A+B]^2 - 4 ||sqrt(A) sqrt(B)||_1^2)``;
    * ``Tr[A (A+B)^{-1/2} B (A+B)^{-1/2}] <= (Tr[A+B] - ||A-B||_1) / 2``;
    * ``||sqrt(A) sqrt(B+C)||_1 <= ||sqrt(A) sqrt(B)||_1 + ||sqrt(A) sqrt(C)||_1``.
    """
    tr = float(np.trace(a + b).real)
    dist = trace_norm(a - b)
    qmin, _ = dv.q_min(a, b)
    ov = _root_overlap(a, b)
    s = a + b
    s_inv_half = mpower(s, -0.5)
    pgm_term = float(np.trace(a @ s_inv_half @ b @ s_inv_half).real)
    return {
        "chernoff_bound": violation(0.5 * (tr - dist), qmin),
        "fuchs_van_de_graaf_lower": violation(tr - 2 * float(np.trace(ov).real), dist),
        "fuchs_van_de_graaf_upper": violation(dist, math.sqrt(max(0.0, tr ** 2 - 4 * trace_norm(ov) ** 2))),
        "pretty_good_test": violation(pgm_term, 0.5 * (tr - dist)),
        "subadditivity": violation(
            trace_norm(_root_overlap(a, b + c)), trace_norm(ov) + trace_norm(_root_overlap(a, c))
        ),
    }


def multiplicativity(rho, sigma, n_max: int = 4) -> float:
    """Largest ``|F(rho^n, sigma^n) - F(rho, sigma)^n|`` (scaled) over ``n <= n_max``."""
    f = dv.fidelity(rho, sigma)
    worst = 0.0
    for n in range(2, n_max + 1):
        # tensor powers of validated states need no further validation
        fn = dv._fidelity_unchecked(kron_power(rho, n), kron_power(sigma, n))
        worst = max(worst, abs(fn - f ** n) / max(1.0, f ** n))
    return worst


def commuting_relations(rho, sigma, alphas=(0.3, 0.7, 2.0)) -> dict:
    """Equalities that hold for commuting pairs: ``F = F_H`` and Petz = sandwiched."""
    out = {"fidelity_equals_holevo": abs(dv.fidelity(rho, sigma) - dv.holevo_fidelity(rho, sigma))}
    for a in alphas:
        p, s = dv.petz_renyi(rho, sigma, a), dv.sandwiched_renyi(rho, sigma, a)
        out[f"petz_equals_sandwiched[{a}]"] = 0.0 if p == s else abs(p - s) / max(1.0, abs(p))
    return out
