import numpy as np
import pytest
from numpy.testing import assert_allclose

from qhtest import multi
from qhtest.binary import BinaryInstance, helstrom_error
from qhtest.linalg import random_density
from qhtest.multi import Ensemble, Povm
from qhtest._validation import ValidationError


@pytest.fixture
def orthogonal(zero, one):
    return Ensemble((0.3, 0.7), (zero, one))


class TestEnsemble:
    def test_priors_must_sum_to_one(self, zero, one):
        with pytest.raises(ValidationError):
            Ensemble((0.5, 0.4), (zero, one))

    def test_priors_positive(self, zero, one):
        with pytest.raises(ValidationError):
            Ensemble((1.0, 0.0), (zero, one))

    def test_one_prior_per_state(self, zero):
        with pytest.raises(ValidationError):
            Ensemble((1.0,), (zero, zero))

    def test_common_dimension(self, zero):
        with pytest.raises(ValidationError):
            Ensemble((0.5, 0.5), (zero, np.eye(3) / 3))

    def test_trine_overlaps(self):
        ens = multi.trine()
        assert ens.size == 3
        for a in range(3):
            for b in range(a + 1, 3):
                assert np.trace(ens.states[a] @ ens.states[b]).real == pytest.approx(0.25)


class TestPovm:
    def test_must_sum_to_identity(self):
        with pytest.raises(ValidationError):
            Povm((np.eye(2) / 2,))

    def test_elements_psd(self):
        with pytest.raises(ValidationError):
            Povm((np.diag([1.5, 0.5]), np.diag([-0.5, 0.5])))


class TestPgm:
    def test_orthogonal_pure_states(self, orthogonal, zero, one):
        povm = multi.pgm(orthogonal)
        assert_allclose(povm.elements[0], zero, atol=1e-14)
        assert_allclose(povm.elements[1], one, atol=1e-14)
        assert multi.error_of_povm(orthogonal, 1, povm) == pytest.approx(0.0, abs=1e-14)

    def test_single_hypothesis(self, qubit_pair):
        povm = multi.pgm(Ensemble((1.0,), (qubit_pair[0],)))
        assert_allclose(povm.elements[0], np.eye(2), atol=1e-12)

    def test_equal_states_share_equally(self, zero):
        povm = multi.pgm(Ensemble((0.5, 0.5), (zero, zero)))
        for e in povm.elements:
            assert_allclose(e, np.eye(2) / 2, atol=1e-14)

    def test_trine_error(self):
        ens = multi.trine()
        assert multi.error_of_povm(ens, 1, multi.pgm(ens)) == pytest.approx(1 / 3, abs=1e-12)

    def test_error_below_bound(self, rng):
        states = [random_density(2, seed=rng) for _ in range(3)]
        ens = Ensemble((0.2, 0.3, 0.5), states)
        for n in (1, 2, 4):
            assert multi.error_of_povm(ens, n, multi.pgm(ens, n)) <= multi.pgm_error_bound(ens, n) + 1e-12


class TestBounds:
    def test_orthogonal_bound(self, orthogonal):
        assert multi.pgm_error_bound(orthogonal, 1) == pytest.approx(0.0, abs=1e-15)

    def test_two_states_equal_priors(self, qubit_pair):
        from qhtest.divergences import fidelity

        ens = Ensemble((0.5, 0.5), qubit_pair)
        f = fidelity(*qubit_pair)
        assert multi.pgm_error_bound(ens, 3) == pytest.approx(0.5 * f ** 1.5)

    def test_trine_bound(self):
        # three pairs, each sqrt(1/9) * sqrt(1/4)
        assert multi.pgm_error_bound(multi.trine(), 1) == pytest.approx(0.5)

    def test_pairwise_lower_bound_below_optimum(self, rng):
        states = [random_density(2, seed=rng) for _ in range(3)]
        ens = Ensemble((0.25, 0.25, 0.5), states)
        opt = multi.optimal_error_iterative(ens, 2, tol=1e-9)
        assert multi.pairwise_lower_bound(ens, 2) <= opt.p_e + opt.gap_bound


class TestIterativeSolver:
    def test_orthogonal(self, orthogonal):
        res = multi.optimal_error_iterative(orthogonal)
        assert res.p_e == pytest.approx(0.0, abs=1e-12)
        assert res.converged
        assert res.iterations <= 1

    def test_trine(self):
        res = multi.optimal_error_iterative(multi.trine(), tol=1e-7)
        assert res.converged
        assert res.p_e == pytest.approx(1 / 3, abs=1e-6)

    @pytest.mark.parametrize("seed", range(5))
    def test_two_states_match_helstrom(self, seed):
        rng = np.random.default_rng(seed)
        rho, sigma = random_density(2, seed=rng), random_density(2, seed=rng)
        p = float(rng.uniform(0.2, 0.8))
        res = multi.optimal_error_iterative(Ensemble((p, 1 - p), (rho, sigma)), tol=1e-8)
        assert res.p_e == pytest.approx(helstrom_error(BinaryInstance(p, rho, sigma))[0], abs=1e-6)

    def test_never_worse_than_pgm(self, rng):
        states = [random_density(3, seed=rng) for _ in range(4)]
        ens = Ensemble((0.1, 0.2, 0.3, 0.4), states)
        res = multi.optimal_error_iterative(ens)
        assert res.p_e <= multi.error_of_povm(ens, 1, multi.pgm(ens)) + 1e-12

    def test_stall_is_reported(self):
        # a pure state against a rank-one one at these priors converges slowly
        rng = np.random.default_rng(0)
        ens = Ensemble((0.5, 0.5), (random_density(2, 1, seed=rng), random_density(2, seed=rng)))
        res = multi.optimal_error_iterative(ens, tol=1e-14, max_iters=3)
        assert not res.converged
        assert res.iterations == 3
        assert res.gap_bound == pytest.approx(res.residual * 2)

    def test_bad_tolerance(self, orthogonal):
        with pytest.raises(ValidationError):
            multi.optimal_error_iterative(orthogonal, tol=0.0)
