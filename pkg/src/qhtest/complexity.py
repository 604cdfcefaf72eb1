"""Sample complexity: how many copies are needed to reach a target error.

Three settings are covered.

``symmetric``
    Smallest ``n`` with optimal Bayes error ``p_e(n) <= eps`` for priors
    ``(p, q)``. Fidelity-type lower bounds, Chernoff- and fidelity-type
    upper bounds, and the exact value for pure states.
``asymmetric``
    Smallest ``n`` with ``beta_eps(rho^n || sigma^n) <= delta``. Lower bounds
    come from sandwiched Renyi divergences of order ``alpha`` in
    ``(1, gamma]`` (strong converse); upper bounds from Petz Renyi divergences
    of order ``alpha`` in ``(0, 1)`` (Hoeffding bound).
``mary``
    Smallest ``n`` with M-ary error ``<= eps``. Pairwise fidelity bounds; the
    empirical value is searched with the pretty-good measurement (an upper
    estimate) and, optionally, the certified iterative optimum.

Every empirical search relies on the error being nonincreasing in ``n``
(discarding a copy is always allowed): it doubles ``n`` until the target is
met and then bisects. Infinite sample complexity is reported as such
(``triviality == "infinite"``), never as a sentinel integer.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import divergences as dv
from ._optimize import grid_golden_minimize
from ._validation import ValidationError, check_density, check_probability, check_same_dim, dense_cap
from .binary import BinaryInstance, helstrom_error, log_beta
from .multi import Ensemble, error_of_povm, optimal_error_iterative, pgm

__all__ = [
    "SampleComplexityReport",
    "classify_trivial",
    "search_n",
    "symmetric_bounds",
    "n_star_symmetric",
    "asymmetric_bounds",
    "stein_envelopes",
    "n_star_asymmetric",
    "mary_bounds",
    "n_star_mary",
]

TRIVIALITY = ("one", "infinite", "nontrivial")
SCHUR_N_MAX = 1000
ALPHA_MARGIN = 1e-6


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return None
    return x


@dataclass
class SampleComplexityReport:
    """Bounds on and search results for the sample complexity ``n*``.

    Attributes:
        setting: ``"symmetric"``, ``"asymmetric"`` or ``"mary"``.
        triviality: ``"one"``, ``"infinite"`` or ``"nontrivial"``.
        lower_bounds: named real lower bounds on ``n*``.
        upper_bounds: named integer upper bounds on ``n*``.
        empirical_n_star: ``n*`` found by search, or None if not searched or
            the search cap was hit.
        exact: closed-form ``n*`` where one is known (pure states).
        parameters: inputs and optimizers (``s``, ``alpha``) echoed back.
        extra: further setting-specific results.
        flags: human-readable notes (cap hit, omitted bounds, ...).
    """

    setting: str
    triviality: str
    lower_bounds: dict = field(default_factory=dict)
    upper_bounds: dict = field(default_factory=dict)
    empirical_n_star: int | None = None
    exact: int | None = None
    parameters: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)

    @property
    def n_star(self) -> float:
        """Best known value of ``n*``: 1 or ``inf`` when trivial, else exact or empirical."""
        if self.triviality == "one":
            return 1
        if self.triviality == "infinite":
            return math.inf
        if self.exact is not None:
            return self.exact
        return self.empirical_n_star if self.empirical_n_star is not None else math.nan

    @property
    def lower(self) -> float:
        """Largest lower bound (``-inf`` when none)."""
        return max(self.lower_bounds.values(), default=-math.inf)

    @property
    def upper(self) -> float:
        """Smallest upper bound (``inf`` when none)."""
        return min(self.upper_bounds.values(), default=math.inf)

    def sandwich_holds(self, slack: float = 0.0) -> bool:
        """Check ``max lower <= empirical <= min upper`` (True when nothing to compare)."""
        if self.empirical_n_star is None:
            return True
        return self.lower <= self.empirical_n_star + slack and self.empirical_n_star <= self.upper + slack

    def to_dict(self) -> dict:
        out = {
            "setting": self.setting,
            "triviality": self.triviality,
            "n_star": self.n_star,
            "lower_bounds": self.lower_bounds,
            "upper_bounds": self.upper_bounds,
            "empirical": self.empirical_n_star,
        }
        if self.exact is not None:
            out["exact"] = self.exact
        out["parameters"] = self.parameters
        out.update(self.extra)
        out["flags"] = list(self.flags)
        return _jsonable(out)


def _ceil(x: float) -> float:
    """Ceiling that tolerates rounding just above an integer; ``inf`` passes through."""
    if not math.isfinite(x):
        return x
    r = round(x)
    return max(1, int(r if abs(x - r) <= 1e-9 * max(1.0, abs(x)) else math.ceil(x)))


def _ratio(num: float, den: float) -> float:
    if den <= 0:
        return math.inf if num > 0 else 0.0
    return num / den


def search_n(ok, n_max: int, n_min: int = 1):
    """Smallest ``n`` in ``[n_min, n_max]`` with ``ok(n)`` for a monotone predicate.

    Doubles ``n`` from ``n_min`` until ``ok`` holds, then bisects between the
    last failure and the first success.

    Returns:
        The smallest such ``n``, or None if ``ok(n_max)`` is False.
    """
    lo, n = n_min - 1, n_min
    while not ok(n):
        if n >= n_max:
            return None
        lo, n = n, min(2 * n, n_max)
    hi = n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _max_dense_n(dim: int) -> int:
    return max(1, int(math.floor(math.log(dense_cap()) / math.log(dim) + 1e-12)))


def _default_backend(dim):
    return "schur" if dim == 2 else "dense"


def _n_max_for(backend, dim, n_max):
    if n_max is not None:
        return int(n_max)
    return SCHUR_N_MAX if backend == "schur" else _max_dense_n(dim)


# -------------------------------------------------------------- symmetric


def classify_trivial(inst: BinaryInstance, eps: float) -> str:
    """Trivial cases of symmetric testing.

    * ``"one"``: orthogonal states (``rho sigma = 0``), or ``eps >= 1/2``, or
      ``eps >= min(p, q)`` (guessing the likelier hypothesis already works);
    * ``"infinite"``: ``rho = sigma`` and ``min(p, q) > eps``;
    * ``"nontrivial"`` otherwise.
    """
    eps = check_probability(eps, "eps")
    if np.abs(inst.rho @ inst.sigma).max() <= 1e-10 or eps >= 0.5 or min(inst.p, inst.q) <= eps:
        return "one"
    if 2 * dv.trace_distance(inst.rho, inst.sigma) <= 1e-10:
        return "infinite"
    return "nontrivial"


def _chernoff_upper(p, q, eps, rho, sigma):
    """``inf_s ln(p^s q^(1-s) / eps) / (-ln Tr[rho^s sigma^(1-s)])`` and its minimizer."""
    spectra = dv._PairSpectra(rho, sigma)

    def objective(s):
        qs = spectra.trace_power(float(s))
        den = -math.log(qs) if qs > 0 else math.inf
        num = s * math.log(p) + (1 - s) * math.log(q) - math.log(eps)
        return _ratio(num, den)

    s_star, value = grid_golden_minimize(objective, 0.0, 1.0)
    return value, s_star


def _is_pure(rho) -> bool:
    return abs(float(np.trace(rho @ rho).real) - 1.0) <= 1e-10


def symmetric_bounds(inst: BinaryInstance, eps: float):
    """Closed-form bounds on ``n*`` for symmetric testing (nontrivial instances).

    Returns:
        Tuple ``(lower, upper, exact, s_star)``; ``exact`` is None unless both
        states are pure.
    """
    p, q = inst.p, inst.q
    f = dv.fidelity(inst.rho, inst.sigma)
    fh = dv.holevo_fidelity(inst.rho, inst.sigma)
    db2 = dv.bures_distance(inst.rho, inst.sigma) ** 2
    neg_log = lambda x: -math.log(x) if x > 0 else math.inf  # noqa: E731
    log_pq = math.log(p * q / eps)
    log_sqrt = math.log(math.sqrt(p * q) / eps)
    lower = {
        "fidelity": _ratio(log_pq, neg_log(f)),
        "bures": _ratio(p * q - eps * (1 - eps), p * q * db2),
        "holevo_fidelity": _ratio(log_pq, neg_log(fh)),
    }
    chern, s_star = _chernoff_upper(p, q, eps, inst.rho, inst.sigma)
    upper = {
        "chernoff": _ceil(chern),
        "holevo_fidelity": _ceil(_ratio(log_sqrt, 0.5 * neg_log(fh))),
        "fidelity": _ceil(_ratio(log_sqrt, 0.5 * neg_log(f))),
    }
    exact = None
    if _is_pure(inst.rho) and _is_pure(inst.sigma):
        exact = _ceil(_ratio(math.log(p * q / (eps * (1 - eps))), neg_log(f)))
    return lower, upper, exact, s_star


def n_star_symmetric(inst: BinaryInstance, eps: float, backend: str | None = None,
                     n_max: int | None = None, search: bool = True) -> SampleComplexityReport:
    """Sample complexity of symmetric binary testing.

    Args:
        inst: priors and states.
        eps: target Bayes error.
        backend: ``"schur"`` (qubits, default for them) or ``"dense"``.
        n_max: search cap; defaults to 1000 (schur) or the dense size cap.
        search: run the empirical search.

    Example:
        >>> import numpy as np
        >>> zero = np.diag([1.0, 0.0]); plus = np.full((2, 2), 0.5)
        >>> r = n_star_symmetric(BinaryInstance(0.5, zero, plus), 0.01)
        >>> r.exact, r.empirical_n_star, r.upper_bounds["chernoff"]
        (5, 5, 6)
    """
    eps = check_probability(eps, "eps", open_low=True, open_high=True)
    params = {"p": inst.p, "q": inst.q, "eps": eps}
    triv = classify_trivial(inst, eps)
    report = SampleComplexityReport("symmetric", triv, parameters=params)
    if triv != "nontrivial":
        report.flags.append(f"trivial instance: n* = {'1' if triv == 'one' else 'inf'}")
        return report
    lower, upper, exact, s_star = symmetric_bounds(inst, eps)
    report.lower_bounds, report.upper_bounds, report.exact = lower, upper, exact
    params["s_star"] = s_star
    if search:
        backend = backend or _default_backend(inst.dim)
        cap = _n_max_for(backend, inst.dim, n_max)
        params["backend"] = backend
        found = search_n(lambda n: helstrom_error(inst, n, backend)[0] <= eps, cap)
        if found is None:
            report.flags.append(f"empirical search reached n_max = {cap} without meeting eps")
        report.empirical_n_star = found
    return report


# ------------------------------------------------------------- asymmetric


def _alpha_prime(alpha: float) -> float:
    return alpha / (alpha - 1.0)


def _optimize_alpha(objective, lo, hi, maximize):
    sign = -1.0 if maximize else 1.0

    def f(a):
        v = objective(a)
        return sign * v if not math.isnan(v) else math.inf

    a, v = grid_golden_minimize(f, lo, hi)
    return sign * v, a


def _converse_bound(num_fn, curves, gamma):
    """``sup_{alpha in (1, gamma]} num(alpha) / D~_alpha(rho || sigma)``; None if ``D~_gamma`` is infinite."""
    if not math.isfinite(curves.sandwiched(gamma)):
        return None

    def objective(a):
        d = curves.sandwiched(a)
        return _ratio(num_fn(a), d) if d > 0 else (-math.inf if num_fn(a) < 0 else math.inf)

    return _optimize_alpha(objective, 1.0 + ALPHA_MARGIN, gamma, maximize=True)


def _achievability_bound(num_fn, curves):
    """``inf_{alpha in (0, 1)} num(alpha) / D_alpha(rho || sigma)``."""

    def objective(a):
        return _ratio(num_fn(a), curves.petz(a))

    return _optimize_alpha(objective, ALPHA_MARGIN, 1.0 - ALPHA_MARGIN, maximize=False)


def asymmetric_bounds(rho, sigma, eps: float, delta: float, gamma: float = 2.0):
    """Renyi-divergence bounds on ``n*`` for asymmetric testing.

    Lower bounds (strong converse), for each orientation whose sandwiched
    divergence of order ``gamma`` is finite:

    * ``sup_{alpha in (1, gamma]} ln((1-eps)^{alpha'} / delta) / D~_alpha(rho||sigma)``;
    * ``sup_{alpha in (1, gamma]} ln((1-delta)^{alpha'} / eps) / D~_alpha(sigma||rho)``;

    upper bounds (Hoeffding), ``alpha' = alpha / (alpha - 1)``:

    * ``ceil(inf_{alpha in (0,1)} ln(eps^{alpha'} / delta) / D_alpha(rho||sigma))``;
    * ``ceil(inf_{alpha in (0,1)} ln(delta^{alpha'} / eps) / D_alpha(sigma||rho))``.

    Returns:
        Tuple ``(lower, upper, optimizers, flags)``.
    """
    le, ld = math.log(eps), math.log(delta)
    l1e, l1d = math.log1p(-eps), math.log1p(-delta)
    lower, upper, opt, flags = {}, {}, {}, []
    forward, backward = dv._RenyiCurves(rho, sigma), dv._RenyiCurves(sigma, rho)
    fwd = _converse_bound(lambda a: _alpha_prime(a) * l1e - ld, forward, gamma)
    bwd = _converse_bound(lambda a: _alpha_prime(a) * l1d - le, backward, gamma)
    for name, res in (("converse_rho_sigma", fwd), ("converse_sigma_rho", bwd)):
        if res is None:
            flags.append(f"{name} omitted: sandwiched divergence of order gamma={gamma} is infinite")
        else:
            lower[name], opt[f"alpha_{name}"] = res
    up_f = _achievability_bound(lambda a: _alpha_prime(a) * le - ld, forward)
    up_b = _achievability_bound(lambda a: _alpha_prime(a) * ld - le, backward)
    for name, (val, a) in (("hoeffding_rho_sigma", up_f), ("hoeffding_sigma_rho", up_b)):
        upper[name] = _ceil(val)
        opt[f"alpha_{name}"] = a
    return lower, upper, opt, flags


def stein_envelopes(rho, sigma, eps: float, n: int, gamma: float = 2.0):
    """Bounds on ``-ln beta_eps(rho^n || sigma^n)`` valid for each ``n``.

    * lower: ``sup_{alpha in (0,1)} n D_alpha(rho||sigma) + alpha' ln(1/eps)``
      (Hoeffding; ``alpha' < 0`` here);
    * upper: ``inf_{alpha in (1, gamma]} n D~_alpha(rho||sigma) + alpha' ln(1/(1-eps))``
      (strong converse); ``inf`` when the order-``gamma`` divergence is.

    Returns:
        Tuple ``(lower, upper)``.
    """
    return _stein_envelopes(dv._RenyiCurves(rho, sigma), eps, n, gamma)


def _stein_envelopes(curves, eps, n, gamma):
    lo_val, _ = _optimize_alpha(
        lambda a: n * curves.petz(a) - _alpha_prime(a) * math.log(eps),
        ALPHA_MARGIN, 1.0 - ALPHA_MARGIN, maximize=True,
    )
    if not math.isfinite(curves.sandwiched(gamma)):
        return lo_val, math.inf
    hi_val, _ = _optimize_alpha(
        lambda a: n * curves.sandwiched(a) - _alpha_prime(a) * math.log1p(-eps),
        1.0 + ALPHA_MARGIN, gamma, maximize=False,
    )
    return lo_val, hi_val


def n_star_asymmetric(rho, sigma, eps: float, delta: float, gamma: float = 2.0,
                      backend: str | None = None, n_max: int | None = None,
                      search: bool = True) -> SampleComplexityReport:
    """Sample complexity of asymmetric (Neyman-Pearson) testing.

    ``n*`` is the smallest ``n`` with ``beta_eps(rho^n || sigma^n) <= delta``.
    Besides the bounds of :func:`asymmetric_bounds`, the report carries the
    Stein ratio ``-(1/n) ln beta_eps`` at the largest searched ``n`` next to
    ``D(rho || sigma)``.
    """
    rho = check_density(rho, "rho")
    sigma = check_density(sigma, "sigma")
    dim = check_same_dim(rho, sigma)
    eps = check_probability(eps, "eps", open_low=True, open_high=True)
    delta = check_probability(delta, "delta", open_low=True, open_high=True)
    if not gamma > 1:
        raise ValidationError(f"gamma must exceed 1, got {gamma!r}")
    params = {"eps": eps, "delta": delta, "gamma": gamma}
    if np.abs(rho @ sigma).max() <= 1e-10:
        report = SampleComplexityReport("asymmetric", "one", parameters=params)
        report.flags.append("orthogonal states: n* = 1")
        return report
    if 2 * dv.trace_distance(rho, sigma) <= 1e-10:
        triv = "infinite" if delta < 1 - eps else "one"
        report = SampleComplexityReport("asymmetric", triv, parameters=params)
        report.flags.append("identical states: beta = 1 - eps for every n")
        return report
    lower, upper, opt, flags = asymmetric_bounds(rho, sigma, eps, delta, gamma)
    params.update(opt)
    report = SampleComplexityReport("asymmetric", "nontrivial", lower, upper, parameters=params, flags=flags)
    report.extra["relative_entropy"] = dv.relative_entropy(rho, sigma)
    if search:
        backend = backend or _default_backend(dim)
        cap = _n_max_for(backend, dim, n_max)
        params["backend"] = backend
        ln_delta = math.log(delta)
        evaluated = {}

        def ok(n):
            evaluated[n] = log_beta(rho, sigma, eps, n, backend)
            return evaluated[n] <= ln_delta

        found = search_n(ok, cap)
        if found is None:
            report.flags.append(f"empirical search reached n_max = {cap} without meeting delta")
        report.empirical_n_star = found
        n_last = max(evaluated)
        report.extra["stein_ratio"] = {"n": n_last, "value": -evaluated[n_last] / n_last}
    return report


# ------------------------------------------------------------------ M-ary


def mary_bounds(ens: Ensemble, eps: float):
    """Pairwise fidelity bounds on the M-ary ``n*``.

    * lower: ``max_{m != k} ln(p_m p_k / ((p_m + p_k) eps)) / (-ln F(rho_m, rho_k))``;
    * upper: ``ceil(max_{m != k} 2 ln(M (M-1) sqrt(p_m p_k) / (2 eps)) / (-ln F(rho_m, rho_k)))``.

    A pair with ``F = 1`` makes both bounds infinite. Pairs with
    ``p_m p_k / (p_m + p_k) < eps`` give a vacuous (negative) lower term.

    Returns:
        Tuple ``(lower, upper, flags)``.
    """
    m_count = ens.size
    p = ens.priors
    lows, ups, flags = [], [], []
    for m, k in itertools.combinations(range(m_count), 2):
        f = dv.fidelity(ens.states[m], ens.states[k])
        den = -math.log(f) if f > 0 else math.inf
        if f >= 1 - 1e-12:
            den = 0.0
        w = p[m] * p[k] / (p[m] + p[k])
        if w < eps:
            flags.append(f"pair ({m}, {k}): p_m p_k / (p_m + p_k) < eps, lower term is vacuous")
        lows.append(_ratio(math.log(w / eps), den))
        ups.append(_ratio(2 * math.log(m_count * (m_count - 1) * math.sqrt(p[m] * p[k]) / (2 * eps)), den))
    return max(lows, default=0.0), _ceil(max(ups, default=1.0)), flags


def n_star_mary(ens: Ensemble, eps: float, n_max: int | None = None, search: bool = True,
                optimal: bool = True) -> SampleComplexityReport:
    """Sample complexity of M-ary discrimination.

    The empirical searches scan ``n = 1, 2, ...`` (the operators grow as
    ``dim^n``, so the scan stops at the dense size cap or ``n_max``). The
    pretty-good measurement search gives an upper estimate of ``n*``; with
    ``optimal=True`` the certified iterative optimum is searched as well and
    reported under ``extra["optimal_n_star"]``.
    """
    eps = check_probability(eps, "eps", open_low=True, open_high=True)
    params = {"eps": eps, "priors": list(ens.priors)}
    report = SampleComplexityReport("mary", "nontrivial", parameters=params)
    if ens.size == 1 or eps >= 1 - max(ens.priors):
        report.triviality = "one"
        report.flags.append("guessing the likeliest hypothesis already meets eps: n* = 1")
        return report
    orthogonal = all(
        np.abs(ens.states[m] @ ens.states[k]).max() <= 1e-10
        for m, k in itertools.combinations(range(ens.size), 2)
    )
    if orthogonal:
        report.triviality = "one"
        report.flags.append("mutually orthogonal states: n* = 1")
        return report
    lower, upper, flags = mary_bounds(ens, eps)
    report.flags.extend(flags)
    report.lower_bounds = {"pairwise_fidelity": lower}
    report.upper_bounds = {"pairwise_fidelity": upper}
    if not math.isfinite(upper):
        report.triviality = "infinite"
        report.flags.append("two hypotheses coincide: n* = inf")
        return report
    if search:
        cap = min(_max_dense_n(ens.dim), n_max or SCHUR_N_MAX)
        report.empirical_n_star = _linear_search(lambda n: error_of_povm(ens, n, pgm(ens, n)) <= eps, cap)
        report.extra["pgm_n_star"] = report.empirical_n_star
        if report.empirical_n_star is None:
            report.flags.append(f"PGM search reached n_max = {cap} without meeting eps")
        if optimal:
            def opt_ok(n):
                res = optimal_error_iterative(ens, n)
                return res.p_e - res.gap_bound <= eps if res.converged else res.p_e <= eps

            found = _linear_search(opt_ok, cap)
            report.extra["optimal_n_star"] = found
            if found is None:
                report.flags.append(f"optimal search reached n_max = {cap} without meeting eps")
    return report


def _linear_search(ok, cap):
    for n in range(1, cap + 1):
        if ok(n):
            return n
    return None
