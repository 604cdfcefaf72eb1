import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qhtest import divergences as dv
from qhtest.binary import BinaryInstance, helstrom_error
from qhtest.linalg import random_density
from qhtest.strategies import fc_error, fuchs_caves, geometric_mean
from qhtest._validation import ValidationError


class TestGeometricMean:
    def test_against_identity(self):
        assert_allclose(geometric_mean(np.diag([4.0, 1.0]), np.eye(2)), np.diag([2, 1]), atol=1e-14)

    def test_idempotent(self, rng):
        a = random_density(3, seed=rng)
        assert_allclose(geometric_mean(a, a), a, atol=1e-13)

    def test_commuting(self):
        got = geometric_mean(np.diag([0.75, 0.25]), np.linalg.inv(np.diag([0.25, 0.75])))
        assert_allclose(got, np.diag([math.sqrt(3), 1 / math.sqrt(3)]), atol=1e-13)

    def test_symmetric(self, rng):
        a, b = random_density(2, seed=rng), random_density(2, seed=rng)
        assert_allclose(geometric_mean(a, b), geometric_mean(b, a), atol=1e-13)

    def test_solves_riccati_equation(self, rng):
        # G = A # B is the positive solution of G A^{-1} G = B
        a, b = random_density(3, seed=rng), random_density(3, seed=rng)
        g = geometric_mean(a, b)
        assert_allclose(g @ np.linalg.inv(a) @ g, b, atol=1e-12)


class TestFuchsCaves:
    def test_equal_states(self, qubit_pair):
        fc = fuchs_caves(qubit_pair[0], qubit_pair[0])
        assert_allclose(fc.lambdas, 1.0, atol=1e-8)

    def test_commuting_pair(self):
        fc = fuchs_caves(np.diag([0.75, 0.25]), np.diag([0.25, 0.75]))
        assert_allclose(sorted(fc.lambdas), [1 / math.sqrt(3), math.sqrt(3)], atol=1e-12)

    @pytest.mark.parametrize("dim", [2, 3])
    def test_attains_fidelity(self, rng, dim):
        for _ in range(10):
            rho, sigma = random_density(dim, seed=rng), random_density(dim, seed=rng)
            assert fuchs_caves(rho, sigma).classical_fidelity == pytest.approx(dv.fidelity(rho, sigma), abs=1e-9)

    def test_singular_sigma_follows_shifted_limit(self):
        rho, sigma = np.diag([0.9, 0.1]), np.full((2, 2), 0.5)
        assert fuchs_caves(rho, sigma).classical_fidelity == pytest.approx(0.5, abs=1e-4)

    def test_distributions_normalized(self, qubit_pair):
        fc = fuchs_caves(*qubit_pair)
        assert fc.P.sum() == pytest.approx(1.0)
        assert fc.Q.sum() == pytest.approx(1.0)


class TestFcError:
    def test_orthogonal(self, zero, one):
        for n in (1, 3):
            assert fc_error(0.5, zero, one, n) == pytest.approx(0.0, abs=1e-15)

    def test_equal_states(self, qubit_pair):
        for n in (1, 2, 5):
            assert fc_error(0.5, qubit_pair[0], qubit_pair[0], n) == pytest.approx(0.5)

    def test_bracketed(self, zero, plus):
        value = fc_error(0.5, zero, plus, 4)
        lower = helstrom_error(BinaryInstance(0.5, zero, plus), 4)[0]
        assert lower - 1e-12 <= value <= 0.125 + 1e-12

    def test_large_n_stays_finite(self, qubit_pair):
        value = fc_error(0.5, *qubit_pair, 400)
        assert 0.0 <= value <= 0.5 * dv.fidelity(*qubit_pair) ** 200 + 1e-300

    def test_qubits_only(self):
        with pytest.raises(ValidationError):
            fc_error(0.5, np.eye(3) / 3, np.eye(3) / 3, 1)
