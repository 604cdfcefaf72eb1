"""Property checks over seeded random instances.

Each ``check_*`` function draws its instances from :mod:`qhtest.samplers`
with a fixed seed, evaluates one family of properties, and returns a list of
:class:`CheckResult`, one per named property. :func:`run_selftest` runs all
of them at reduced counts (the ``qhtest selftest`` command); the test suite
runs them at full size.
"""

from __future__ import annotations

import functools
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import divergences as dv
from . import properties as props
from . import samplers
from .binary import BinaryInstance, helstrom_error, log_beta
from .complexity import (
    classify_trivial,
    n_star_asymmetric,
    n_star_mary,
    n_star_symmetric,
    search_n,
    _stein_envelopes,
    stein_envelopes,
)
from .figure import fig_compare
from .multi import Ensemble, optimal_error_iterative, trine
from .schur import block_helstrom, schur_blocks
from .strategies import fc_error, fuchs_caves

__all__ = [
    "CheckResult",
    "check_inequalities",
    "check_pure_exactness",
    "check_symmetric_sandwich",
    "check_asymmetric_sandwich",
    "check_mary_sandwich",
    "check_schur_dense",
    "check_fuchs_caves",
    "check_mary_solver",
    "check_figure",
    "check_stein",
    "run_selftest",
]


@dataclass
class CheckResult:
    """Outcome of one named property over a batch.

    Attributes:
        name: property name.
        passed: whether every case satisfied the property.
        worst: largest violation seen (property-specific units; ``<= 0``
            or below the slack means satisfied), or a count of failures.
        cases: number of cases evaluated.
        seconds: wall time of the batch this property belongs to.
        detail: extra numbers worth reporting.
    """

    name: str
    passed: bool
    worst: float
    cases: int
    seconds: float = 0.0
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.name}: worst={self.worst:.3g} cases={self.cases} time={self.seconds:.1f}s"


class _Tally:
    """Accumulates worst violations per property name."""

    def __init__(self, slack):
        self.slack = slack
        self.worst = {}
        self.cases = {}

    def add(self, name, value):
        self.worst[name] = max(self.worst.get(name, -math.inf), value)
        self.cases[name] = self.cases.get(name, 0) + 1

    def results(self, seconds, prefix=""):
        return [
            CheckResult(prefix + k, bool(v <= self.slack), float(v), self.cases[k], seconds)
            for k, v in self.worst.items()
        ]


# ------------------------------------------------------------- divergences


def check_inequalities(count: int = 1000, seed: int = 0, slack: float = 1e-9, mult_n: int = 4):
    """Inequalities between fidelities, distances and divergences.

    Runs :func:`qhtest.properties.state_relations` and
    :func:`qhtest.properties.multiplicativity` on random pairs of mixed rank
    (``d`` in {2, 3}), :func:`qhtest.properties.psd_relations` on random PSD
    triples of the same dimension, and
    :func:`qhtest.properties.commuting_relations` on random diagonal pairs.
    """
    rng = np.random.default_rng(seed)
    tally = _Tally(slack)
    start = time.perf_counter()
    for _ in range(count):
        rho, sigma = samplers.mixed_rank_pair(rng)
        d = rho.shape[0]
        for name, v in props.state_relations(rho, sigma).items():
            tally.add(name, v)
        for name, v in props.psd_relations(*samplers.psd_triple(rng, d)).items():
            tally.add(name, v)
        tally.add("multiplicativity", props.multiplicativity(rho, sigma, mult_n))
        diag = [np.diag(rng.dirichlet(np.ones(d))).astype(complex) for _ in range(2)]
        for name, v in props.commuting_relations(*diag).items():
            tally.add(name, v)
    return tally.results(time.perf_counter() - start, "inequalities.")


# --------------------------------------------------------------- symmetric


def check_pure_exactness(count: int = 100, seed: int = 1, epsilons=(0.01, 0.05, 0.1),
                         max_fidelity: float = 0.6):
    """Closed-form ``n*`` for pure states equals the searched ``n*``.

    Priors are drawn uniformly from ``[0.25, 0.75]``; instances that are
    trivial for a given ``eps`` are skipped. The anchor
    ``|0>`` vs ``|+>``, ``p = 1/2``, ``eps = 0.01`` must give ``n* = 5``.
    """
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    mismatches, cases = [], 0
    for _ in range(count):
        rho, sigma = samplers.pure_pair(rng, 2, max_fidelity=max_fidelity)
        inst = BinaryInstance(float(rng.uniform(0.25, 0.75)), rho, sigma)
        for eps in epsilons:
            if classify_trivial(inst, eps) != "nontrivial":
                continue
            rep = n_star_symmetric(inst, eps)
            cases += 1
            if rep.exact != rep.empirical_n_star:
                mismatches.append((inst.p, eps, rep.exact, rep.empirical_n_star))
    zero = np.diag([1.0, 0.0]).astype(complex)
    plus = np.full((2, 2), 0.5, dtype=complex)
    anchor = n_star_symmetric(BinaryInstance(0.5, zero, plus), 0.01)
    seconds = time.perf_counter() - start
    anchor_ok = anchor.exact == 5 and anchor.empirical_n_star == 5
    return [
        CheckResult("symmetric.pure_exact_equals_search", not mismatches, len(mismatches), cases, seconds,
                    {"mismatches": mismatches[:5]}),
        CheckResult("symmetric.anchor_n_star_5", anchor_ok, 0.0 if anchor_ok else 1.0, 1, seconds,
                    {"exact": anchor.exact, "empirical": anchor.empirical_n_star}),
    ]


def check_symmetric_sandwich(count: int = 100, seed: int = 2, eps: float = 0.05,
                             window=(0.2, 0.9)):
    """Every lower bound <= searched ``n*`` <= every upper bound (mixed qubits, ``p = 1/2``)."""
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    tally = _Tally(0.0)
    for _ in range(count):
        rho, sigma = samplers.qubit_pair_in_window(rng, *window)
        rep = n_star_symmetric(BinaryInstance(0.5, rho, sigma), eps, backend="schur", n_max=200)
        if rep.empirical_n_star is None:
            tally.add("symmetric.search_within_cap", 1.0)
            continue
        tally.add("symmetric.search_within_cap", 0.0)
        for name, lb in rep.lower_bounds.items():
            tally.add(f"symmetric.lower.{name}", lb - rep.empirical_n_star)
        for name, ub in rep.upper_bounds.items():
            tally.add(f"symmetric.upper.{name}", rep.empirical_n_star - ub)
    return tally.results(time.perf_counter() - start)


# -------------------------------------------------------------- asymmetric


def check_asymmetric_sandwich(count: int = 50, seed: int = 3, eps: float = 0.05, delta: float = 0.05,
                              gamma: float = 2.0, n_envelope: int = 50, window=(0.2, 0.8),
                              envelope_slack: float = 1e-8):
    """Renyi bounds sandwich the searched ``n*``; per-``n`` envelopes bound ``-ln beta``.

    Pairs are full-rank qubit states (so supports nest both ways) with
    fidelity in ``window``. For every ``n <= n_envelope`` the exact
    ``-ln beta_eps`` must lie between the Hoeffding and strong-converse
    envelopes of :func:`qhtest.complexity.stein_envelopes`.
    """
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    tally = _Tally(0.0)
    for _ in range(count):
        rho, sigma = samplers.qubit_pair_in_window(rng, *window)

        @functools.lru_cache(maxsize=None)
        def lb(n):
            return log_beta(rho, sigma, eps, n, "schur")

        curves = dv._RenyiCurves(rho, sigma)
        for n in range(1, n_envelope + 1):
            low, high = _stein_envelopes(curves, eps, n, gamma)
            value = -lb(n)
            tally.add("asymmetric.envelope_lower", props.violation(low, value) - envelope_slack)
            tally.add("asymmetric.envelope_upper", props.violation(value, high) - envelope_slack)
        rep = n_star_asymmetric(rho, sigma, eps, delta, gamma, search=False)
        found = search_n(lambda n: lb(n) <= math.log(delta), 1000)
        if found is None:
            tally.add("asymmetric.search_within_cap", 1.0)
            continue
        tally.add("asymmetric.search_within_cap", 0.0)
        for name, value in rep.lower_bounds.items():
            tally.add(f"asymmetric.lower.{name}", value - found)
        for name, value in rep.upper_bounds.items():
            tally.add(f"asymmetric.upper.{name}", found - value)
    return tally.results(time.perf_counter() - start)


def check_stein(n: int = 200, eps: float = 1 / 3, tolerance: float = 0.1):
    """``-(1/n) ln beta`` for diag(0.9, 0.1) vs I/2 is within the envelopes and near ``D``."""
    start = time.perf_counter()
    rho = np.diag([0.9, 0.1]).astype(complex)
    sigma = np.eye(2, dtype=complex) / 2
    rate = -log_beta(rho, sigma, eps, n, "schur") / n
    low, high = stein_envelopes(rho, sigma, eps, n)
    d = dv.relative_entropy(rho, sigma)
    seconds = time.perf_counter() - start
    detail = {"rate": rate, "relative_entropy": d, "envelope": (low / n, high / n)}
    return [
        CheckResult("stein.within_envelopes", low / n <= rate <= high / n,
                    max(low / n - rate, rate - high / n), 1, seconds, detail),
        CheckResult("stein.near_relative_entropy", abs(rate - d) <= tolerance, abs(rate - d), 1, seconds, detail),
    ]


# ------------------------------------------------------------------- M-ary


def check_mary_sandwich(count: int = 20, seed: int = 4, eps: float = 0.05, max_fidelity: float = 0.5):
    """Pairwise lower bound <= PGM-searched ``n*`` <= pairwise upper bound (3-state qubit ensembles)."""
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    tally = _Tally(0.0)
    for _ in range(count):
        ens = samplers.ensemble_in_window(rng, 3, 2, max_fidelity)
        rep = n_star_mary(ens, eps, optimal=False)
        if rep.triviality != "nontrivial":
            continue
        if rep.empirical_n_star is None:
            tally.add("mary.search_within_cap", 1.0)
            continue
        tally.add("mary.search_within_cap", 0.0)
        tally.add("mary.lower", rep.lower - rep.empirical_n_star)
        tally.add("mary.upper", rep.empirical_n_star - rep.upper)
    return tally.results(time.perf_counter() - start)


def check_mary_solver(count: int = 200, seed: int = 5, tol: float = 1e-6):
    """Iterative optimum equals the Helstrom error for M = 2; the trine gives 1/3."""
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    tally = _Tally(tol)
    stalled = 0
    for _ in range(count):
        rho, sigma = samplers.mixed_rank_pair(rng)
        p = float(rng.uniform(0.1, 0.9))
        res = optimal_error_iterative(Ensemble((p, 1 - p), (rho, sigma)))
        exact = helstrom_error(BinaryInstance(p, rho, sigma))[0]
        tally.add("mary.two_state_matches_helstrom", abs(res.p_e - exact))
        if res.converged:
            # certified: the error lies within the duality-gap bound of the optimum
            tally.add("mary.certificate_sound", res.p_e - exact - res.gap_bound - 1e-12 + tol)
        else:
            stalled += 1
    res = optimal_error_iterative(trine())
    tally.add("mary.trine_one_third", abs(res.p_e - 1 / 3))
    out = tally.results(time.perf_counter() - start)
    for r in out:
        r.detail["stalled"] = stalled
    return out


# ------------------------------------------------------------------- other


def check_schur_dense(count: int = 50, seed: int = 6, n_max: int = 8, eps: float = 0.1,
                      tol: float = 1e-10, timing_n: int = 200, time_budget: float = 5.0):
    """Schur and dense backends agree for ``n <= n_max``; block Helstrom at ``timing_n`` is fast."""
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    tally = _Tally(tol)
    for _ in range(count):
        rho, sigma = samplers.qubit_pair_in_window(rng, 0.0, 1.0)
        p = float(rng.uniform(0.1, 0.9))
        inst = BinaryInstance(p, rho, sigma)
        for n in range(1, n_max + 1):
            hd = helstrom_error(inst, n, "dense")[0]
            hs = helstrom_error(inst, n, "schur")[0]
            tally.add("schur.helstrom_matches_dense", abs(hd - hs))
            bd = math.exp(log_beta(rho, sigma, eps, n, "dense"))
            bs = math.exp(log_beta(rho, sigma, eps, n, "schur"))
            tally.add("schur.beta_matches_dense", abs(bd - bs))
    seconds = time.perf_counter() - start
    rho, sigma = samplers.qubit_pair_in_window(rng, 0.0, 1.0)
    t0 = time.perf_counter()
    block_helstrom(0.5, schur_blocks(rho, timing_n), schur_blocks(sigma, timing_n))
    elapsed = time.perf_counter() - t0
    out = tally.results(seconds)
    out.append(CheckResult(f"schur.helstrom_n{timing_n}_under_{time_budget:g}s", elapsed < time_budget,
                           elapsed, 1, elapsed))
    return out


def check_fuchs_caves(count: int = 100, seed: int = 7, n_max: int = 30, slack: float = 1e-9):
    """Helstrom <= Fuchs-Caves error <= sqrt(pq) F^{n/2}; the measurement attains F."""
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    tally = _Tally(slack)
    for _ in range(count):
        rho, sigma = samplers.qubit_pair_in_window(rng, 0.0, 1.0)
        p = float(rng.uniform(0.2, 0.8))
        f = dv.fidelity(rho, sigma)
        tally.add("fuchs_caves.attains_fidelity", abs(fuchs_caves(rho, sigma).classical_fidelity - f))
        inst = BinaryInstance(p, rho, sigma)
        for n in range(1, n_max + 1):
            e = fc_error(p, rho, sigma, n)
            tally.add("fuchs_caves.above_helstrom", helstrom_error(inst, n, "schur")[0] - e)
            tally.add("fuchs_caves.below_fidelity_bound", e - math.sqrt(p * (1 - p)) * f ** (n / 2))
    return tally.results(time.perf_counter() - start)


def check_figure(grid_points: int = 10_000):
    """Maximum gap 1/2 at the ``x -> 0`` row and pointwise ordering on the grid."""
    start = time.perf_counter()
    table = fig_compare(grid_points)
    worst_order = float(np.max(table.inverse_neg_log - table.inverse_bures))
    max_gap = float(table.gap.max())
    seconds = time.perf_counter() - start
    at_zero = int(np.argmax(table.gap)) == 0
    return [
        CheckResult("figure.max_gap_half_at_zero", abs(max_gap - 0.5) <= 1e-6 and at_zero,
                    abs(max_gap - 0.5), len(table.x), seconds),
        CheckResult("figure.ordering", worst_order <= 0.0, worst_order, len(table.x), seconds),
    ]


def run_selftest(scale: float = 0.1, seed: int = 0) -> list[CheckResult]:
    """All property checks with batch sizes multiplied by ``scale`` (at least 2 cases each)."""
    def c(full):
        return max(2, int(round(full * scale)))

    results = []
    results += check_inequalities(c(1000), seed)
    results += check_pure_exactness(c(100), seed + 1)
    results += check_symmetric_sandwich(c(100), seed + 2)
    results += check_asymmetric_sandwich(c(50), seed + 3, n_envelope=max(5, int(50 * scale)))
    results += check_mary_sandwich(c(20), seed + 4)
    results += check_mary_solver(c(200), seed + 5)
    results += check_schur_dense(c(50), seed + 6, n_max=6)
    results += check_fuchs_caves(c(100), seed + 7, n_max=max(5, int(30 * scale)))
    results += check_figure(max(2, int(10_000 * scale)))
    results += check_stein(n=50 if scale < 1 else 200)
    return results
