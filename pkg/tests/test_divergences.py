import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qhtest import divergences as dv
from qhtest._validation import DomainError, ValidationError
from qhtest.linalg import random_density


class TestFidelities:
    def test_pure_against_mixed(self, zero):
        assert dv.fidelity(zero, np.eye(2) / 2) == pytest.approx(0.5)

    def test_pure_pair(self, zero, plus):
        assert dv.fidelity(zero, plus) == pytest.approx(0.5)
        assert dv.holevo_fidelity(zero, plus) == pytest.approx(0.25)

    def test_identity(self, rng):
        rho = random_density(3, seed=rng)
        assert dv.fidelity(rho, rho) == pytest.approx(1.0, abs=1e-12)

    def test_symmetric(self, qubit_pair):
        rho, sigma = qubit_pair
        assert dv.fidelity(rho, sigma) == pytest.approx(dv.fidelity(sigma, rho), abs=1e-13)

    def test_z_fidelity_endpoints(self, qubit_pair):
        rho, sigma = qubit_pair
        assert dv.z_fidelity(rho, sigma, 0.5) == pytest.approx(dv.fidelity(rho, sigma), abs=1e-12)
        assert dv.z_fidelity(rho, sigma, 1.0) == pytest.approx(dv.holevo_fidelity(rho, sigma), abs=1e-12)

    def test_rejects_non_state(self):
        with pytest.raises(ValidationError):
            dv.fidelity(np.eye(2), np.eye(2) / 2)

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            dv.fidelity(np.eye(2) / 2, np.eye(3) / 3)


class TestDistances:
    def test_orthogonal_trace_distance(self, zero, one):
        assert dv.trace_distance(zero, one) == pytest.approx(1.0)

    def test_bures_self(self, qubit_pair):
        assert dv.bures_distance(qubit_pair[0], qubit_pair[0]) == pytest.approx(0.0, abs=1e-7)

    def test_hellinger_pure_pair(self, zero, plus):
        assert dv.hellinger_distance(zero, plus) == pytest.approx(1.0)

    def test_dispatcher(self, mixed_pair):
        value = dv.distance("trace", *mixed_pair)
        assert value.measure == "trace_distance"
        assert float(value) == pytest.approx(0.4)
        with pytest.raises(ValidationError):
            dv.distance("euclid", *mixed_pair)


class TestRenyi:
    def test_petz_classical(self):
        value = dv.petz_renyi(np.diag([0.5, 0.5]), np.diag([0.25, 0.75]), 2)
        assert value == pytest.approx(math.log(4 / 3))

    def test_sandwiched_half_is_log_fidelity(self, qubit_pair):
        rho, sigma = qubit_pair
        assert dv.sandwiched_renyi(rho, sigma, 0.5) == pytest.approx(-math.log(dv.fidelity(rho, sigma)), abs=1e-9)

    def test_support_condition(self):
        pure, mixed = np.diag([1.0, 0.0]), np.eye(2) / 2
        assert math.isfinite(dv.petz_renyi(pure, mixed, 3))
        assert dv.petz_renyi(mixed, pure, 3) == math.inf
        assert dv.sandwiched_renyi(mixed, pure, 2) == math.inf

    def test_commuting_pair_agrees(self, mixed_pair):
        for alpha in (0.3, 0.7, 2.0):
            assert dv.petz_renyi(*mixed_pair, alpha) == pytest.approx(dv.sandwiched_renyi(*mixed_pair, alpha), abs=1e-13)

    def test_alpha_one_rejected(self, mixed_pair):
        with pytest.raises(DomainError):
            dv.petz_renyi(*mixed_pair, 1.0)

    def test_dispatcher(self, mixed_pair):
        value = dv.renyi("petz", 0.5, *mixed_pair)
        assert value.parameter == 0.5
        assert float(value) == pytest.approx(dv.petz_renyi(*mixed_pair, 0.5))


class TestRelativeEntropy:
    def test_classical(self):
        assert dv.relative_entropy(np.diag([1.0, 0.0]), np.eye(2) / 2) == pytest.approx(math.log(2))

    def test_self(self, qubit_pair):
        assert dv.relative_entropy(qubit_pair[0], qubit_pair[0]) == pytest.approx(0.0, abs=1e-12)

    def test_reference_pair(self, mixed_pair):
        # 0.9 ln 1.8 + 0.1 ln 0.2
        assert dv.relative_entropy(*mixed_pair) == pytest.approx(0.368064, abs=1e-6)

    def test_non_nested_is_infinite(self, zero, plus):
        assert dv.relative_entropy(zero, plus) == math.inf

    def test_limit_of_renyi(self, qubit_pair):
        rho, sigma = qubit_pair
        d = dv.relative_entropy(rho, sigma)
        assert dv.petz_renyi(rho, sigma, 1 - 1e-6) == pytest.approx(d, abs=1e-5)
        assert dv.sandwiched_renyi(rho, sigma, 1 + 1e-6) == pytest.approx(d, abs=1e-5)


class TestChernoff:
    def test_pure_against_mixed(self, zero):
        c, s_star = dv.chernoff(zero, np.eye(2) / 2)
        assert c == pytest.approx(math.log(2))
        assert s_star == pytest.approx(0.0, abs=1e-6)

    def test_self(self, qubit_pair):
        assert dv.chernoff(qubit_pair[0], qubit_pair[0])[0] == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal(self, zero, one):
        assert dv.chernoff(zero, one)[0] == math.inf

    def test_endpoints_use_support_projectors(self, zero, plus):
        assert dv.q_s(zero, plus, 0.0) == pytest.approx(0.5)
        assert dv.q_s(zero, plus, 1.0) == pytest.approx(0.5)

    def test_s_out_of_range(self, zero, plus):
        with pytest.raises(DomainError):
            dv.q_s(zero, plus, 1.5)

    def test_between_fidelity_bounds(self, qubit_pair):
        rho, sigma = qubit_pair
        q, _ = dv.q_min(rho, sigma)
        assert dv.fidelity(rho, sigma) - 1e-12 <= q <= math.sqrt(dv.fidelity(rho, sigma)) + 1e-12


def test_renyi_cache_matches_public_functions(rng):
    for rank in (1, 2, 3):
        rho, sigma = random_density(3, rank, seed=rng), random_density(3, seed=rng)
        curves = dv._RenyiCurves(rho, sigma)
        for alpha in (0.2, 0.8, 1.5, 2.0):
            assert_allclose(curves.petz(alpha), dv.petz_renyi(rho, sigma, alpha), rtol=1e-11)
            assert_allclose(curves.sandwiched(alpha), dv.sandwiched_renyi(rho, sigma, alpha), rtol=1e-11)
