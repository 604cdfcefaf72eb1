"""Quantum hypothesis testing: optimal errors, divergences and sample complexity.

Submodules:

* :mod:`qhtest.linalg` and :mod:`qhtest.io`: matrix functions and state files;
* :mod:`qhtest.divergences`: fidelities, distances, Renyi divergences, Chernoff;
* :mod:`qhtest.binary`: Helstrom error and Neyman-Pearson ``beta``;
* :mod:`qhtest.schur`: qubit tensor powers in Schur blocks (hundreds of copies);
* :mod:`qhtest.multi`: M-ary discrimination;
* :mod:`qhtest.complexity`: sample-complexity bounds and searches;
* :mod:`qhtest.strategies`: the Fuchs-Caves product strategy;
* :mod:`qhtest.figure`, :mod:`qhtest.selftest`, :mod:`qhtest.cli`.
"""

from ._validation import DomainError, ValidationError
from .binary import BinaryInstance, Test, beta, error_of_test, helstrom_error, log_beta
from .complexity import (
    SampleComplexityReport,
    classify_trivial,
    n_star_asymmetric,
    n_star_mary,
    n_star_symmetric,
)
from .divergences import (
    bures_distance,
    chernoff,
    fidelity,
    hellinger_distance,
    holevo_fidelity,
    petz_renyi,
    q_min,
    q_s,
    relative_entropy,
    sandwiched_renyi,
    trace_distance,
    z_fidelity,
)
from .figure import fig_compare
from .io import load_ensemble, load_state, save_ensemble, save_state
from .linalg import random_density, random_pure_state
from .multi import Ensemble, Povm, error_of_povm, optimal_error_iterative, pgm, pgm_error_bound
from .schur import SchurBlocks, block_beta, block_helstrom, schur_blocks
from .strategies import fc_error, fuchs_caves, geometric_mean

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "ValidationError",
    "BinaryInstance",
    "Test",
    "beta",
    "log_beta",
    "error_of_test",
    "helstrom_error",
    "SampleComplexityReport",
    "classify_trivial",
    "n_star_symmetric",
    "n_star_asymmetric",
    "n_star_mary",
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
    "fig_compare",
    "load_state",
    "save_state",
    "load_ensemble",
    "save_ensemble",
    "random_density",
    "random_pure_state",
    "Ensemble",
    "Povm",
    "pgm",
    "error_of_povm",
    "pgm_error_bound",
    "optimal_error_iterative",
    "SchurBlocks",
    "schur_blocks",
    "block_helstrom",
    "block_beta",
    "fuchs_caves",
    "fc_error",
    "geometric_mean",
]
