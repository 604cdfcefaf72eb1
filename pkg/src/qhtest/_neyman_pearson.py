"""Root-finding core for the Neyman-Pearson problem.

For a pair ``(A, B)`` of PSD operators with unit trace the optimal type-II
error at type-I level ``eps`` is

    beta_eps = max_{mu >= 0} [ mu (1 - eps) - Tr[(mu A - B)_+] ].

The accepted mass ``a(mu) = Tr[P_+(mu A - B) A]`` is nondecreasing in
``mu``: it varies smoothly between jumps located at generalized eigenvalues
of the pencil. We root-find ``a(mu) = 1 - eps`` in ``log(mu)``, then mix the
two projectors that bracket the root so the type-I error equals ``eps``
exactly. In the jump case the mixture is ``P_+ + x P_0``, the classical
randomized test; in the continuous case the bracket is narrower than
``xtol`` and the mixture is the limit projector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, NamedTuple

from scipy.optimize import brentq

__all__ = ["Evaluation", "DualSolution", "solve_dual"]


class Evaluation(NamedTuple):
    """Positive-part data at one multiplier ``mu = exp(log_mu)``.

    Attributes:
        accepted: ``Tr[P_+ A]``, one minus the type-I error.
        log_type_ii: ``ln Tr[P_+ B]`` (``-inf`` when zero).
        payload: whatever the caller needs to rebuild ``P_+``.
    """

    accepted: float
    log_type_ii: float
    payload: Any = None


@dataclass(frozen=True)
class DualSolution:
    """Result of :func:`solve_dual`.

    The optimal test is ``(1 - weight) * P_low + weight * P_high``, where
    the projectors come from ``low`` and ``high`` (``low`` may be ``None``
    for the zero test).
    """

    log_beta: float
    weight: float
    log_mu_low: float
    log_mu_high: float
    low: Evaluation | None
    high: Evaluation
    evaluations: int


def _log_mix(x: float, lb_low: float, lb_high: float) -> float:
    terms = []
    if x < 1.0 and lb_low > -math.inf:
        terms.append(math.log1p(-x) + lb_low)
    if x > 0.0 and lb_high > -math.inf:
        terms.append(math.log(x) + lb_high)
    if not terms:
        return -math.inf
    top = max(terms)
    return top + math.log(sum(math.exp(t - top) for t in terms))


def solve_dual(
    evaluate: Callable[[float], Evaluation],
    target: float,
    lo: float,
    hi: float,
    *,
    guess: float | None = None,
    width: float = 0.5,
    xtol: float = 1e-10,
) -> DualSolution:
    """Find the multiplier where the accepted mass crosses ``target``.

    Args:
        evaluate: maps ``log(mu)`` to an :class:`Evaluation`.
        target: required accepted mass, ``1 - eps`` (must be in (0, 1]).
        lo, hi: search interval for ``log(mu)``.
        guess: optional starting point; the bracket grows from
            ``[guess - width, guess + width]`` instead of using ``[lo, hi]``.
        xtol: absolute tolerance on ``log(mu)``.
    """
    cache: dict[float, Evaluation] = {}

    def g(l: float) -> float:
        if l not in cache:
            cache[l] = evaluate(l)
        return cache[l].accepted - target

    if guess is None:
        a, b = lo, hi
    else:
        a, b = max(lo, guess - width), min(hi, guess + width)
        step = width
        while g(a) >= 0 and a > lo:
            step *= 2
            a = max(lo, a - step)
        step = width
        while g(b) < 0 and b < hi:
            step *= 2
            b = min(hi, b + step)

    if g(a) >= 0:
        # Enough mass is accepted already at the smallest multiplier: mix
        # that projector with the zero test.
        ev = cache[a]
        x = target / ev.accepted
        return DualSolution(_log_mix(x, -math.inf, ev.log_type_ii), x, -math.inf, a, None, ev, len(cache))
    if g(b) < 0:
        raise RuntimeError("accepted mass never reaches the target on the search interval")
    brentq(g, a, b, xtol=xtol, maxiter=500)

    low_l = max(l for l, ev in cache.items() if ev.accepted < target)
    high_l = min(l for l, ev in cache.items() if ev.accepted >= target)
    low, high = cache[low_l], cache[high_l]
    gap = high.accepted - low.accepted
    x = (target - low.accepted) / gap if gap > 0 else 1.0
    x = min(1.0, max(0.0, x))
    log_beta = _log_mix(x, low.log_type_ii, high.log_type_ii)
    return DualSolution(log_beta, x, low_l, high_l, low, high, len(cache))
