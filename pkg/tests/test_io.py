import json

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from qhtest import io
from qhtest._validation import ValidationError
from qhtest.linalg import random_density


class TestStateCodec:
    def test_round_trip_is_bit_exact(self, tmp_path):
        rho = random_density(3, seed=42)
        path = tmp_path / "rho.json"
        io.save_state(rho, path)
        assert_array_equal(io.load_state(path), rho)

    def test_layout(self):
        obj = io.state_to_dict(np.diag([0.25, 0.75]))
        assert obj == {"dim": 2, "re": [[0.25, 0.0], [0.0, 0.75]], "im": [[0.0, 0.0], [0.0, 0.0]]}

    @pytest.mark.parametrize(
        "obj, fragment",
        [
            ({"re": [[1]], "im": [[0]]}, "dim"),
            ({"dim": 2, "re": [[1, 0], [0, 0]]}, "im"),
            ({"dim": 2, "re": [[1, 0]], "im": [[0, 0]]}, "shape"),
            ({"dim": 1, "re": [["x"]], "im": [[0]]}, "numeric"),
        ],
    )
    def test_malformed(self, obj, fragment):
        with pytest.raises(ValidationError, match=fragment):
            io.state_from_dict(obj)

    def test_not_a_density_matrix(self):
        with pytest.raises(ValidationError):
            io.state_from_dict({"dim": 2, "re": [[2, 0], [0, 0]], "im": [[0, 0], [0, 0]]})

    def test_validation_can_be_skipped(self):
        rho = io.state_from_dict({"dim": 1, "re": [[2.0]], "im": [[0.0]]}, validate=False)
        assert rho[0, 0] == 2.0

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ValidationError, match="invalid JSON"):
            io.load_state(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ValidationError, match="cannot read"):
            io.load_state(tmp_path / "absent.json")


class TestEnsembleCodec:
    def test_round_trip(self, tmp_path):
        states = [random_density(2, seed=s) for s in range(3)]
        priors = [0.2, 0.3, 0.5]
        path = tmp_path / "ens.json"
        io.save_ensemble(priors, states, path)
        got_priors, got_states = io.load_ensemble(path)
        assert got_priors == priors
        for a, b in zip(got_states, states):
            assert_array_equal(a, b)

    def test_length_mismatch(self):
        obj = io.ensemble_to_dict([0.5, 0.5], [np.eye(2) / 2])
        obj["priors"] = [1.0, 0.0]
        with pytest.raises(ValidationError, match="equal length"):
            io.ensemble_from_dict(obj)

    def test_error_names_the_bad_state(self):
        obj = json.loads(json.dumps(io.ensemble_to_dict([1.0], [np.eye(2) / 2])))
        obj["states"][0]["re"] = [[1, 0], [0, 1]]
        with pytest.raises(ValidationError, match=r"states\[0\]"):
            io.ensemble_from_dict(obj)
