import csv
import io as stdio
import json

import numpy as np
import pytest

from qhtest import io
from qhtest.cli import main
from qhtest.multi import trine


@pytest.fixture
def files(tmp_path, zero, plus):
    paths = {}
    for name, state in (("zero", zero), ("plus", plus), ("mixed", np.eye(2) / 2), ("diag", np.diag([0.9, 0.1]))):
        paths[name] = str(tmp_path / f"{name}.json")
        io.save_state(state, paths[name])
    ens = trine()
    paths["trine"] = str(tmp_path / "trine.json")
    io.save_ensemble(ens.priors, ens.states, paths["trine"])
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestVerbs:
    def test_divergence(self, capsys, files):
        code, out, _ = run(capsys, "divergence", "--measure", "fidelity", "--a", files["zero"], "--b", files["mixed"])
        assert code == 0
        assert json.loads(out)["value"] == pytest.approx(0.5)

    def test_divergence_in_bits(self, capsys, files):
        argv = ["divergence", "--measure", "relative_entropy", "--a", files["diag"], "--b", files["mixed"]]
        nats = json.loads(run(capsys, *argv)[1])["value"]
        bits = json.loads(run(capsys, *argv, "--bits")[1])["value"]
        assert bits == pytest.approx(nats / np.log(2))

    def test_perr_csv(self, capsys, files):
        code, out, _ = run(capsys, "perr", "--p", "0.5", "--rho", files["zero"], "--sigma", files["plus"], "--format", "csv")
        assert code == 0
        row = next(csv.DictReader(stdio.StringIO(out)))
        assert float(row["p_e"]) == pytest.approx(0.146447, abs=1e-6)

    def test_beta(self, capsys, files):
        code, out, _ = run(capsys, "beta", "--rho", files["diag"], "--sigma", files["mixed"], "--eps", "0.1", "--n", "20")
        assert code == 0
        obj = json.loads(out)
        assert obj["beta"] == pytest.approx(np.exp(obj["log_beta"]))

    def test_sample_complexity_sym(self, capsys, files):
        code, out, _ = run(capsys, "sample-complexity", "sym", "--rho", files["zero"], "--sigma", files["plus"], "--eps", "0.01")
        obj = json.loads(out)
        assert code == 0
        assert (obj["exact"], obj["empirical"], obj["upper_bounds"]["chernoff"]) == (5, 5, 6)

    def test_sample_complexity_asym_needs_delta(self, capsys, files):
        code, _, err = run(capsys, "sample-complexity", "asym", "--rho", files["diag"], "--sigma", files["mixed"], "--eps", "0.05")
        assert code == 2
        assert "delta" in err

    def test_mary(self, capsys, files):
        code, out, _ = run(capsys, "mary", "--ensemble", files["trine"], "--eps", "0.05")
        obj = json.loads(out)
        assert code == 0
        assert obj["optimal_error"] == pytest.approx(1 / 3, abs=1e-6)

    def test_fuchs_caves(self, capsys, files):
        code, out, _ = run(capsys, "fuchs-caves", "--rho", files["zero"], "--sigma", files["mixed"], "--n", "3")
        obj = json.loads(out)
        assert code == 0
        assert obj["classical_fidelity"] == pytest.approx(obj["fidelity"], abs=1e-4)

    def test_fig_compare_csv(self, capsys):
        code, out, _ = run(capsys, "fig-compare", "--grid", "3", "--format", "csv")
        rows = list(csv.DictReader(stdio.StringIO(out)))
        assert code == 0
        assert len(rows) == 4
        assert float(rows[0]["gap"]) == 0.5

    def test_random_state_round_trip(self, capsys, tmp_path):
        path = tmp_path / "r.json"
        code, _, _ = run(capsys, "random-state", "--dim", "3", "--rank", "2", "--seed", "4", "--out", str(path))
        assert code == 0
        assert np.linalg.matrix_rank(io.load_state(path), tol=1e-10) == 2

    def test_selftest_small(self, capsys):
        code, out, _ = run(capsys, "selftest", "--scale", "0.01", "--format", "csv")
        assert code == 0
        assert "inequalities" in out


class TestErrors:
    def test_missing_file(self, capsys, files):
        code, _, err = run(capsys, "perr", "--p", "0.5", "--rho", "/nonexistent.json", "--sigma", files["plus"])
        assert code == 2
        assert "nonexistent" in err

    def test_bad_prior(self, capsys, files):
        code, _, err = run(capsys, "perr", "--p", "1.5", "--rho", files["zero"], "--sigma", files["plus"])
        assert code == 2
        assert err

    def test_missing_renyi_order(self, capsys, files):
        code, _, _ = run(capsys, "divergence", "--measure", "petz_renyi", "--a", files["diag"], "--b", files["mixed"])
        assert code == 2

    def test_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["no-such-verb"])
        assert exc.value.code == 2
