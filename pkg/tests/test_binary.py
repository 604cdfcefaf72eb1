import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.special import gammaln, logsumexp

from qhtest import binary
from qhtest.binary import BinaryInstance
from qhtest._validation import ValidationError
from qhtest.linalg import random_density


class TestInstance:
    def test_q_and_dim(self, zero, plus):
        inst = BinaryInstance(0.3, zero, plus)
        assert inst.q == pytest.approx(0.7)
        assert inst.dim == 2

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.2])
    def test_prior_must_be_interior(self, zero, plus, p):
        with pytest.raises(ValidationError):
            BinaryInstance(p, zero, plus)

    def test_states_validated(self, zero):
        with pytest.raises(ValidationError):
            BinaryInstance(0.5, zero, np.eye(2))


class TestHelstrom:
    def test_zero_vs_plus(self, zero, plus):
        pe, test = binary.helstrom_error(BinaryInstance(0.5, zero, plus))
        assert pe == pytest.approx((1 - 1 / math.sqrt(2)) / 2, abs=1e-12)
        assert isinstance(test, binary.Test)

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_equal_states_give_min_prior(self, qubit_pair, n):
        rho = qubit_pair[0]
        assert binary.helstrom_error(BinaryInstance(0.3, rho, rho), n)[0] == pytest.approx(0.3)

    def test_orthogonal(self, zero, one):
        assert binary.helstrom_error(BinaryInstance(0.4, zero, one))[0] == pytest.approx(0.0, abs=1e-15)

    def test_backends_agree(self, qubit_pair):
        inst = BinaryInstance(0.4, *qubit_pair)
        for n in (1, 4, 7):
            dense = binary.helstrom_error(inst, n, "dense")[0]
            block = binary.helstrom_error(inst, n, "schur")[0]
            assert block == pytest.approx(dense, abs=1e-12)

    def test_non_increasing_in_n(self, qubit_pair):
        inst = BinaryInstance(0.5, *qubit_pair)
        errors = [binary.helstrom_error(inst, n)[0] for n in range(1, 8)]
        assert np.all(np.diff(errors) <= 1e-15)

    def test_unknown_backend(self, zero, plus):
        with pytest.raises(ValidationError):
            binary.helstrom_error(BinaryInstance(0.5, zero, plus), 1, "gpu")

    def test_schur_needs_qubits(self):
        rho = np.eye(3) / 3
        with pytest.raises(ValidationError):
            binary.helstrom_error(BinaryInstance(0.5, rho, rho), 1, "schur")


class TestErrorOfTest:
    def test_identity_test(self, qubit_pair):
        inst = BinaryInstance(0.5, *qubit_pair)
        type_i, type_ii, _ = binary.error_of_test(inst, 1, np.eye(2))
        assert type_i == pytest.approx(0.0)
        assert type_ii == pytest.approx(1.0)

    def test_random_guess(self, qubit_pair):
        inst = BinaryInstance(0.3, *qubit_pair)
        assert binary.error_of_test(inst, 2, np.eye(4) / 2)[2] == pytest.approx(0.5)

    def test_helstrom_test_attains_error(self, qubit_pair):
        inst = BinaryInstance(0.35, *qubit_pair)
        pe, test = binary.helstrom_error(inst, 3)
        assert binary.error_of_test(inst, 3, test)[2] == pytest.approx(pe, abs=1e-9)

    def test_dimension_checked(self, qubit_pair):
        with pytest.raises(ValidationError):
            binary.error_of_test(BinaryInstance(0.5, *qubit_pair), 2, np.eye(2))


class TestBeta:
    def test_equal_states(self, qubit_pair):
        rho = qubit_pair[0]
        assert binary.beta(rho, rho, 0.2)[0] == pytest.approx(0.8, abs=1e-12)

    def test_classical_zero_budget(self):
        value, _ = binary.beta(np.diag([1.0, 0.0]), np.eye(2) / 2, 0.0)
        assert value == pytest.approx(0.5)

    def test_orthogonal(self, zero, one):
        assert binary.beta(zero, one, 0.0)[0] == 0.0

    def test_type_one_error_is_exact(self, qubit_pair):
        rho, sigma = qubit_pair
        value, test = binary.beta(rho, sigma, 0.1, 3)
        type_i, type_ii, _ = binary.error_of_test(BinaryInstance(0.5, rho, sigma), 3, test)
        assert type_i == pytest.approx(0.1, abs=1e-10)
        assert type_ii == pytest.approx(value, rel=1e-9)

    def test_lagrangian_optimality(self, qubit_pair):
        rho, sigma = qubit_pair
        _, test = binary.beta(rho, sigma, 0.1, 2)
        assert binary.lagrangian_gap(rho, sigma, 2, test) >= -1e-8

    def test_backends_agree(self, qubit_pair):
        rho, sigma = qubit_pair
        for n in (1, 3, 6):
            dense = binary.log_beta(rho, sigma, 0.1, n, "dense")
            block = binary.log_beta(rho, sigma, 0.1, n, "schur")
            assert block == pytest.approx(dense, abs=1e-10)

    def test_non_increasing_in_n(self, mixed_pair):
        values = [binary.log_beta(*mixed_pair, 0.2, n) for n in range(1, 8)]
        assert np.all(np.diff(values) <= 1e-12)

    def test_log_beta_survives_underflow(self):
        rho, sigma = np.diag([0.999, 0.001]), np.array([[0.002, 0.01], [0.01, 0.998]])
        value = binary.log_beta(rho, sigma, 0.05, 130, "schur")
        assert math.isfinite(value)
        assert value < -745

    def test_underflow_matches_classical_oracle(self):
        n, eps = 130, 0.05
        a, b = np.array([0.999, 0.001]), np.array([0.002, 0.998])
        # Neyman-Pearson on type classes: accept k = #outcome-0 by likelihood ratio
        k = np.arange(n + 1)
        log_c = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
        la = log_c + k * np.log(a[0]) + (n - k) * np.log(a[1])
        lb = log_c + k * np.log(b[0]) + (n - k) * np.log(b[1])
        accepted, terms = 0.0, []
        for i in np.argsort(lb - la):
            share = min(1.0, (1 - eps - accepted) / math.exp(la[i]))
            terms.append(math.log(share) + lb[i])
            accepted += share * math.exp(la[i])
            if share < 1.0:
                break
        value = binary.log_beta(np.diag(a), np.diag(b), eps, n, "schur")
        assert value == pytest.approx(float(logsumexp(terms)), rel=1e-10)

    def test_eps_one_rejected(self, mixed_pair):
        with pytest.raises(ValidationError):
            binary.beta(*mixed_pair, 1.0)


def test_qutrit_beta_matches_classical_oracle():
    p = np.array([0.5, 0.3, 0.2])
    q = np.array([0.2, 0.3, 0.5])
    # likelihood-ratio order 2.5, 1, 0.4; accept the first outcome fully and
    # 1/3 of the second to reach type-I error 0.4
    value, _ = binary.beta(np.diag(p), np.diag(q), 0.4)
    assert value == pytest.approx(0.2 + 0.3 / 3)
    rng = np.random.default_rng(0)
    u = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))[0]
    rotated = binary.beta(u @ np.diag(p) @ u.conj().T, u @ np.diag(q) @ u.conj().T, 0.4)[0]
    assert_allclose(rotated, value, rtol=1e-12)
