"""Seeded random instances used by the self-test and the experiment batches.

Every sampler takes a ``numpy.random.Generator`` so that a batch is fully
determined by its seed. States are drawn from the Ginibre (Hilbert-Schmidt)
ensemble via :func:`qhtest.linalg.random_density`; conditions such as a
fidelity window are imposed by rejection.
"""

from __future__ import annotations

import numpy as np

from .divergences import fidelity
from .linalg import random_density, random_pure_state
from .multi import Ensemble

__all__ = [
    "mixed_rank_pair",
    "psd_triple",
    "pure_pair",
    "qubit_pair_in_window",
    "ensemble_in_window",
]

MAX_TRIES = 10_000


def _rejection(draw, accept):
    for _ in range(MAX_TRIES):
        x = draw()
        if accept(x):
            return x
    raise RuntimeError("rejection sampler exhausted its tries; the window is too narrow")


def mixed_rank_pair(rng, dims=(2, 3)):
    """Pair of states of a random dimension from ``dims`` and independent random ranks."""
    d = int(rng.choice(dims))
    ranks = rng.integers(1, d + 1, size=2)
    return random_density(d, int(ranks[0]), rng), random_density(d, int(ranks[1]), rng)


def psd_triple(rng, d: int, scale=(0.1, 3.0)):
    """Three PSD matrices with random ranks and traces drawn uniformly from ``scale``."""
    out = []
    for _ in range(3):
        rank = int(rng.integers(1, d + 1))
        out.append(random_density(d, rank, rng) * rng.uniform(*scale))
    return tuple(out)


def pure_pair(rng, d: int = 2, max_fidelity: float = 1.0, min_fidelity: float = 0.0):
    """Two pure states (as density matrices) with fidelity in the given window."""
    def draw():
        return random_pure_state(d, rng), random_pure_state(d, rng)

    return _rejection(draw, lambda p: min_fidelity <= fidelity(*p) <= max_fidelity)


def qubit_pair_in_window(rng, low: float, high: float, rank=None):
    """Two qubit states (full rank unless ``rank`` is given) with fidelity in ``[low, high]``."""
    def draw():
        return random_density(2, rank, rng), random_density(2, rank, rng)

    return _rejection(draw, lambda p: low <= fidelity(*p) <= high)


def ensemble_in_window(rng, size: int = 3, d: int = 2, max_fidelity: float = 0.5,
                       min_prior: float = 0.15):
    """Ensemble with pairwise fidelities at most ``max_fidelity``.

    Priors come from a flat Dirichlet draw, redrawn until each is at least
    ``min_prior``.
    """
    def draw_states():
        return [random_density(d, None, rng) for _ in range(size)]

    def ok(states):
        return all(
            fidelity(states[i], states[j]) <= max_fidelity
            for i in range(size) for j in range(i + 1, size)
        )

    states = _rejection(draw_states, ok)
    priors = _rejection(lambda: rng.dirichlet(np.ones(size)), lambda p: p.min() >= min_prior)
    priors = priors / priors.sum()
    return Ensemble(tuple(priors), tuple(states))
