import numpy as np
import pytest

from qhtest import divergences as dv
from qhtest import properties as props
from qhtest import samplers
from qhtest.linalg import random_density


def test_violation_is_scaled():
    assert props.violation(1.0, 2.0) == pytest.approx(-0.5)
    assert props.violation(1e-3, 0.0) == pytest.approx(1e-3)


class TestRelations:
    @pytest.mark.parametrize("dim", [2, 3])
    def test_state_relations_hold(self, rng, dim):
        for _ in range(20):
            rho, sigma = random_density(dim, seed=rng), random_density(dim, int(rng.integers(1, dim + 1)), seed=rng)
            assert max(props.state_relations(rho, sigma).values()) <= 1e-9

    def test_psd_relations_hold(self, rng):
        for _ in range(20):
            assert max(props.psd_relations(*samplers.psd_triple(rng, 3)).values()) <= 1e-9

    def test_multiplicativity(self, qubit_pair):
        assert props.multiplicativity(*qubit_pair) <= 1e-9

    def test_commuting(self, rng):
        a, b = (np.diag(rng.dirichlet(np.ones(3))) for _ in range(2))
        assert max(props.commuting_relations(a, b).values()) <= 1e-12

    def test_detects_a_broken_relation(self, qubit_pair):
        # feeding a non-commuting pair to the commuting equalities must flag it
        values = props.commuting_relations(*qubit_pair)
        assert values["fidelity_equals_holevo"] > 1e-6


class TestSamplers:
    def test_fidelity_window(self, rng):
        for _ in range(20):
            rho, sigma = samplers.qubit_pair_in_window(rng, 0.2, 0.9)
            assert 0.2 <= dv.fidelity(rho, sigma) <= 0.9

    def test_pure_pair(self, rng):
        rho, sigma = samplers.pure_pair(rng, 2, max_fidelity=0.6)
        assert np.linalg.matrix_rank(rho, tol=1e-10) == 1
        assert dv.fidelity(rho, sigma) <= 0.6

    def test_ensemble_window(self, rng):
        ens = samplers.ensemble_in_window(rng)
        assert ens.size == 3
        assert min(ens.priors) >= 0.15
        for i in range(3):
            for j in range(i + 1, 3):
                assert dv.fidelity(ens.states[i], ens.states[j]) <= 0.5

    def test_deterministic(self):
        a = samplers.mixed_rank_pair(np.random.default_rng(5))
        b = samplers.mixed_rank_pair(np.random.default_rng(5))
        np.testing.assert_array_equal(a[0], b[0])
