import numpy as np
import pytest


def ket_to_state(psi):
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def zero():
    return ket_to_state([1, 0])


@pytest.fixture
def one():
    return ket_to_state([0, 1])


@pytest.fixture
def plus():
    return ket_to_state([1, 1])


@pytest.fixture
def mixed_pair():
    """Commuting full-rank qubit pair with ``D(rho || sigma) = 0.368064``."""
    return np.diag([0.9, 0.1]).astype(complex), np.eye(2, dtype=complex) / 2


@pytest.fixture
def qubit_pair(rng):
    from qhtest.linalg import random_density

    return random_density(2, seed=rng), random_density(2, seed=rng)


@pytest.fixture
def ket():
    return ket_to_state
