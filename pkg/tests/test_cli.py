import json
import math

import numpy as np
import pytest

from entrospec import random_state, save_matrix
from entrospec.cli import main, resolve_seed
from entrospec.errors import ParseError
from entrospec.matrixio import load_matrix, parse_matrix_file

from conftest import diag_state


def write_state(tmp_path, name, matrix):
    path = tmp_path / name
    save_matrix(str(path), np.asarray(matrix, dtype=complex))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEntropyCommand:
    def test_maximally_mixed(self, tmp_path, capsys):
        path = write_state(tmp_path, "mixed.json", np.eye(2) / 2)
        code, out, _ = run(capsys, ["entropy", path])
        assert code == 0
        payload = json.loads(out)
        assert payload["n"] == 2
        assert payload["entropy_bits"] == 1.0
        assert payload["spectrum"] == [0.5, 0.5]

    def test_pure_state(self, tmp_path, capsys):
        path = write_state(tmp_path, "pure.json", np.diag([1.0, 0.0]))
        code, out, _ = run(capsys, ["entropy", path])
        assert code == 0
        assert json.loads(out)["entropy_bits"] == 0.0

    def test_off_diagonal_state(self, tmp_path, capsys):
        path = write_state(tmp_path, "plus.json", [[0.5, 0.25], [0.25, 0.5]])
        code, out, _ = run(capsys, ["entropy", path])
        assert code == 0
        expected = 2.0 - 0.75 * math.log2(3.0)
        assert abs(json.loads(out)["entropy_bits"] - expected) <= 1e-12

    def test_invalid_state_exits_1(self, tmp_path, capsys):
        path = write_state(tmp_path, "bad.json", np.diag([0.7, 0.7]))
        code, _, err = run(capsys, ["entropy", path])
        assert code == 1
        assert "entrospec:" in err

    def test_missing_file_exits_1(self, tmp_path, capsys):
        code, _, err = run(capsys, ["entropy", str(tmp_path / "nope.json")])
        assert code == 1
        assert "entrospec:" in err


def read_csv(path):
    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    return lines[0], [line.split(",") for line in lines[1:]]


class TestCurveCommand:
    def test_csv_layout(self, tmp_path, capsys):
        state = write_state(tmp_path, "s.json", np.diag([0.75, 0.25]))
        out_csv = str(tmp_path / "curve.csv")
        code, out, _ = run(
            capsys, ["curve", state, "--a", "0.8", "--points", "5", "--out", out_csv]
        )
        assert code == 0
        summary = json.loads(out)
        assert summary == {"n": 2, "points": 5, "a": 0.8, "out": out_csv}

        header, rows = read_csv(out_csv)
        assert header == "lambda,entropy_bits,f_prime,log2_p"
        assert len(rows) == 5
        assert float(rows[0][0]) == 0.0
        assert float(rows[-1][0]) == 0.8
        # log2_p is only defined strictly between the endpoints
        assert rows[0][3] == ""
        assert all(row[3] != "" for row in rows[1:])
        # mixing toward I/n can only raise entropy, so the column decreases
        entropies = [float(row[1]) for row in rows]
        assert all(a >= b - 1e-12 for a, b in zip(entropies, entropies[1:]))
        assert all(row[2] != "" for row in rows)

    def test_rank_deficient_state_blanks_endpoint(self, tmp_path, capsys):
        state = write_state(tmp_path, "pure.json", np.diag([1.0, 0.0]))
        out_csv = str(tmp_path / "curve.csv")
        code, _, _ = run(
            capsys, ["curve", state, "--a", "1.0", "--points", "3", "--out", out_csv]
        )
        assert code == 0
        _, rows = read_csv(out_csv)
        assert float(rows[-1][0]) == 1.0
        assert rows[-1][2] == "" and rows[-1][3] == ""
        assert rows[1][2] != ""

    def test_maximally_mixed_curve_is_flat(self, tmp_path, capsys):
        state = write_state(tmp_path, "mixed.json", np.eye(2) / 2)
        out_csv = str(tmp_path / "curve.csv")
        code, _, _ = run(capsys, ["curve", state, "--points", "4", "--out", out_csv])
        assert code == 0
        _, rows = read_csv(out_csv)
        assert all(abs(float(row[1]) - 1.0) <= 1e-15 for row in rows)

    @pytest.mark.parametrize("flags", [["--a", "0.0"], ["--a", "1.2"], ["--points", "1"]])
    def test_bad_grid_flags_exit_1(self, tmp_path, capsys, flags):
        state = write_state(tmp_path, "s.json", np.eye(2) / 2)
        out_csv = str(tmp_path / "c.csv")
        code, _, _ = run(capsys, ["curve", state, *flags, "--out", out_csv])
        assert code == 1

    def test_missing_out_flag_exits_1(self, tmp_path, capsys):
        state = write_state(tmp_path, "s.json", np.eye(2) / 2)
        code, _, _ = run(capsys, ["curve", state])
        assert code == 1


class TestEquivCommand:
    def test_same_state_is_equivalent(self, tmp_path, capsys, rng):
        matrix = random_state(3, rng).matrix
        a = write_state(tmp_path, "a.json", matrix)
        b = write_state(tmp_path, "b.json", matrix)
        code, out, _ = run(capsys, ["equiv", a, b])
        assert code == 0
        payload = json.loads(out)
        assert payload["verdict"] == "equivalent"
        assert payload["method"] == "nodes"
        witness = np.asarray(payload["witness"]["re"]) + 1j * np.asarray(
            payload["witness"]["im"]
        )
        assert np.max(np.abs(witness @ witness.conj().T - np.eye(3))) <= 1e-10
        residual = matrix - witness @ matrix @ witness.conj().T
        assert np.max(np.abs(residual)) <= 1e-8

    @pytest.mark.parametrize("mode", ["spectral", "t1", "t2"])
    def test_all_modes_agree_on_equivalent_pair(self, tmp_path, capsys, mode):
        a = write_state(tmp_path, "a.json", np.diag([0.75, 0.25]))
        b = write_state(tmp_path, "b.json", [[0.5, 0.25], [0.25, 0.5]])
        code, out, _ = run(capsys, ["equiv", a, b, "--mode", mode])
        assert code == 0
        assert json.loads(out)["verdict"] == "equivalent"

    @pytest.mark.parametrize("mode", ["spectral", "t1", "t2"])
    def test_all_modes_reject_distinct_pair(self, tmp_path, capsys, mode):
        a = write_state(tmp_path, "a.json", np.diag([1.0, 0.0]))
        b = write_state(tmp_path, "b.json", np.eye(2) / 2)
        code, out, _ = run(capsys, ["equiv", a, b, "--mode", mode])
        assert code == 3
        payload = json.loads(out)
        assert payload["verdict"] == "not_equivalent"
        assert payload["witness"] is None

    def test_dimension_mismatch_exits_2(self, tmp_path, capsys):
        a = write_state(tmp_path, "a.json", np.eye(2) / 2)
        b = write_state(tmp_path, "b.json", np.eye(3) / 3)
        code, _, err = run(capsys, ["equiv", a, b])
        assert code == 2
        assert "entrospec:" in err

    def test_wrong_node_count_exits_1(self, tmp_path, capsys):
        a = write_state(tmp_path, "a.json", np.eye(2) / 2)
        code, _, _ = run(
            capsys, ["equiv", a, a, "--mode", "t2", "--nodes", "0.25", "0.5", "0.75"]
        )
        assert code == 1

    def test_inconsistent_tolerance_exits_1(self, tmp_path, capsys):
        # an absurd entropy tolerance accepts distinct spectra; the decider
        # refuses to emit the contradictory verdict
        a = write_state(tmp_path, "a.json", np.diag([1.0, 0.0]))
        b = write_state(tmp_path, "b.json", np.eye(2) / 2)
        code, _, err = run(capsys, ["equiv", a, b, "--entropy-tol", "10.0"])
        assert code == 1
        assert "entrospec:" in err

    def test_bad_mode_exits_1(self, tmp_path, capsys):
        a = write_state(tmp_path, "a.json", np.eye(2) / 2)
        code, _, _ = run(capsys, ["equiv", a, a, "--mode", "bogus"])
        assert code == 1

    def test_missing_subcommand_exits_1(self, capsys):
        assert main([]) == 1
        capsys.readouterr()


class TestRecoverCommand:
    def test_analytic_two_level(self, tmp_path, capsys):
        state = write_state(tmp_path, "s.json", np.diag([0.75, 0.25]))
        code, out, _ = run(capsys, ["recover", state])
        assert code == 0
        payload = json.loads(out)
        assert payload["derivative"] == "analytic"
        assert payload["linf_error"] <= 1e-8
        assert payload["trimmed_degree"] == 0
        np.testing.assert_allclose(payload["recovered_spectrum"], [0.75, 0.25], atol=1e-8)

    def test_analytic_random_state(self, tmp_path, capsys, rng):
        state = write_state(tmp_path, "s.json", random_state(4, rng).matrix)
        code, out, _ = run(capsys, ["recover", state])
        assert code == 0
        payload = json.loads(out)
        assert payload["linf_error"] <= 1e-6
        assert payload["validation_residual"] <= 1e-8
        assert payload["sum_drift"] <= 1e-5

    def test_finite_difference_mode(self, tmp_path, capsys, rng):
        state = write_state(tmp_path, "s.json", random_state(3, rng).matrix)
        code, out, _ = run(capsys, ["recover", state, "--derivative", "fd"])
        assert code == 0
        payload = json.loads(out)
        assert payload["derivative"] == "fd"
        assert payload["linf_error"] <= 1e-4

    def test_huge_fd_step_exits_4(self, tmp_path, capsys, rng):
        # a step this coarse wrecks the derivative estimate, the fitted
        # polynomial cannot match the held-out samples, and the run must
        # stop rather than report a junk spectrum
        state = write_state(tmp_path, "s.json", random_state(3, rng).matrix)
        code, _, err = run(
            capsys,
            ["recover", state, "--derivative", "fd", "--fd-step", "0.45"],
        )
        assert code == 4
        assert "entrospec:" in err

    def test_custom_nodes(self, tmp_path, capsys):
        state = write_state(tmp_path, "s.json", np.diag([0.75, 0.25]))
        code, out, _ = run(
            capsys,
            ["recover", state, "--nodes", "0.2", "0.4", "0.6", "0.8", "0.3", "0.7"],
        )
        assert code == 0
        assert json.loads(out)["linf_error"] <= 1e-8

    def test_bad_nodes_exit_1(self, tmp_path, capsys):
        state = write_state(tmp_path, "s.json", np.diag([0.75, 0.25]))
        code, _, _ = run(capsys, ["recover", state, "--nodes", "0.2", "0.2", "0.4"])
        assert code == 1


class TestSelftestCommand:
    def test_corrupted_tolerance_exits_5(self, capsys):
        code, out, err = run(capsys, ["selftest", "--entropy-tol", "1e-30"])
        assert code == 5
        payload = json.loads(out)
        assert payload["all_passed"] is False
        assert payload["entropy_tol"] == 1e-30
        failing = {p["name"] for p in payload["properties"] if not p["passed"]}
        assert "equivalent-pairs-all-methods" in failing
        assert "FAIL" in err

    def test_invalid_seed_env_exits_1(self, capsys, monkeypatch):
        monkeypatch.setenv("ENTROSPEC_SEED", "not-a-number")
        code, _, err = run(capsys, ["selftest"])
        assert code == 1
        assert "ENTROSPEC_SEED" in err


class TestResolveSeed:
    def test_flag_beats_env(self):
        assert resolve_seed(7, {"ENTROSPEC_SEED": "9"}) == 7

    def test_env_fallback(self):
        assert resolve_seed(None, {"ENTROSPEC_SEED": "9"}) == 9

    def test_default(self):
        assert resolve_seed(None, {}) == 42

    def test_invalid_env(self):
        with pytest.raises(ParseError):
            resolve_seed(None, {"ENTROSPEC_SEED": "abc"})


class TestMatrixFiles:
    def test_roundtrip_is_exact(self, tmp_path, rng):
        matrix = random_state(4, rng).matrix
        matrix[0, 1] = complex(-0.0, 1e-300)
        matrix[1, 0] = complex(1 / 3, 1e16)
        path = tmp_path / "m.json"
        save_matrix(str(path), matrix)
        loaded = load_matrix(str(path))
        assert np.array_equal(loaded, matrix)
        assert np.array_equal(np.signbit(loaded.real), np.signbit(matrix.real))

    def test_invalid_json(self):
        with pytest.raises(ParseError):
            parse_matrix_file("{not json")

    def test_top_level_must_be_object(self):
        with pytest.raises(ParseError):
            parse_matrix_file("[1, 2, 3]")

    def test_missing_field(self):
        with pytest.raises(ParseError, match="im"):
            parse_matrix_file('{"n": 1, "re": [[1.0]]}')

    @pytest.mark.parametrize("n_value", ["0", "-2", "true", "1.5", '"2"'])
    def test_bad_dimension_field(self, n_value):
        text = '{"n": %s, "re": [[1.0]], "im": [[0.0]]}' % n_value
        with pytest.raises(ParseError, match="positive integer"):
            parse_matrix_file(text)

    def test_ragged_rows(self):
        with pytest.raises(ParseError, match="row 1"):
            parse_matrix_file('{"n": 2, "re": [[1, 0], [0]], "im": [[0,0],[0,0]]}')

    def test_non_number_entry(self):
        with pytest.raises(ParseError, match="not a number"):
            parse_matrix_file('{"n": 1, "re": [["x"]], "im": [[0]]}')

    def test_bool_entry_rejected(self):
        with pytest.raises(ParseError, match="not a number"):
            parse_matrix_file('{"n": 1, "re": [[true]], "im": [[0]]}')

    def test_non_finite_entry(self):
        with pytest.raises(ParseError, match="non-finite"):
            parse_matrix_file('{"n": 1, "re": [[Infinity]], "im": [[0]]}')
