import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from qhtest import linalg
from qhtest._validation import DomainError, ValidationError


class TestEigh:
    def test_pauli_x(self):
        w, _ = linalg.eigh(np.array([[0, 1], [1, 0]], dtype=complex))
        assert_allclose(w, [-1, 1], atol=1e-15)

    def test_identity(self):
        w, _ = linalg.eigh(np.eye(3))
        assert_allclose(w, [1, 1, 1])

    def test_diagonal(self):
        dec = linalg.eigh(np.diag([0.2, 0.8]))
        assert_allclose(dec.eigenvalues, [0.2, 0.8])
        assert_allclose(dec.reconstruct(), np.diag([0.2, 0.8]), atol=1e-15)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError):
            linalg.eigh(np.array([[0, 1], [0, 0]]))


class TestMatrixFunction:
    def test_sqrt(self):
        assert_allclose(linalg.matrix_function(np.diag([4.0, 1.0]), np.sqrt), np.diag([2, 1]))

    def test_kernel_maps_to_zero_for_positive_power(self):
        assert_allclose(linalg.mpower(np.diag([1.0, 0.0]), 0.3), np.diag([1, 0]))

    def test_log_projects_out_kernel(self):
        assert_allclose(linalg.logm_psd(np.diag([np.e, 1.0])), np.diag([1, 0]), atol=1e-15)

    def test_negative_power_on_support(self):
        assert_allclose(linalg.mpower(np.diag([0.25, 0.0]), -1), np.diag([4, 0]))

    def test_singular_function_raises(self):
        with pytest.raises(DomainError):
            linalg.matrix_function(np.diag([1.0, 2.0]), lambda x: 1 / (x - 1))

    def test_mpower_rejects_negative_matrix(self):
        with pytest.raises(DomainError):
            linalg.mpower(np.diag([1.0, -0.5]), 0.5)

    def test_sqrt_squares_back(self, rng):
        rho = linalg.random_density(3, seed=rng)
        root = linalg.sqrtm_psd(rho)
        assert_allclose(root @ root, rho, atol=1e-14)

    def test_support_projector(self):
        assert_allclose(linalg.support_projector(np.diag([0.7, 0.0, 1e-12])), np.diag([1, 0, 0]))


class TestNorms:
    @pytest.mark.parametrize(
        "a, p, expected",
        [
            (np.diag([1.0, -1.0]), 1, 2.0),
            (np.diag([3.0, 4.0]), 2, 5.0),
            (np.diag([3.0, -4.0]), np.inf, 4.0),
        ],
    )
    def test_schatten(self, a, p, expected):
        assert linalg.schatten_norm(a, p) == pytest.approx(expected)

    def test_trace_norm_of_state_difference(self, ket):
        h = ket([1, 0]) - ket([1, 1])
        assert linalg.trace_norm(h) == pytest.approx(np.sqrt(2), abs=1e-14)
        assert linalg.schatten_norm(h, 1) == pytest.approx(np.sqrt(2), abs=1e-14)

    def test_schatten_rejects_p_below_one(self):
        with pytest.raises(DomainError):
            linalg.schatten_norm(np.eye(2), 0.5)


class TestPositivePart:
    def test_diagonal(self):
        p_plus, p_zero, value = linalg.positive_part(np.diag([1.0, -1.0]))
        assert_allclose(p_plus, np.diag([1, 0]))
        assert_allclose(p_zero, np.zeros((2, 2)))
        assert value == pytest.approx(1.0)

    def test_zero_matrix(self):
        p_plus, p_zero, value = linalg.positive_part(np.zeros((2, 2)))
        assert_allclose(p_plus, 0)
        assert_allclose(p_zero, np.eye(2))
        assert value == 0.0

    def test_value_is_positive_trace(self):
        assert linalg.positive_part(np.diag([0.5, -0.5, 0.0]))[2] == pytest.approx(0.5)


class TestRandomStates:
    def test_pure_qubit(self):
        rho = linalg.random_density(2, 1, seed=3)
        assert np.trace(rho).real == pytest.approx(1.0)
        assert np.linalg.eigvalsh(rho).min() >= -1e-12
        assert np.linalg.matrix_rank(rho, tol=1e-10) == 1

    def test_full_rank_qutrit(self):
        assert np.linalg.eigvalsh(linalg.random_density(3, 3, seed=3)).min() > 0

    def test_deterministic(self):
        assert_array_equal(linalg.random_density(3, 2, seed=9), linalg.random_density(3, 2, seed=9))

    def test_bad_rank(self):
        with pytest.raises(ValidationError):
            linalg.random_density(2, 3)


def test_kron_power_shape_and_trace():
    rho = linalg.random_density(2, seed=0)
    big = linalg.kron_power(rho, 3)
    assert big.shape == (8, 8)
    assert np.trace(big).real == pytest.approx(1.0)
