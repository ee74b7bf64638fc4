"""
命令行端到端测试
输出一律写到临时文件，再读回检查。
"""
import csv
import json

import pytest

from app.main import EXIT_ERROR, EXIT_OK, main

IDENTITY = {"L": [[1, 0], [0, 1]]}
ONE_ROW = {"rho_plus": [["1/2"]], "rho_minus": [["1/2"]]}


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.reader(fh))


def real_part(cell) -> float:
    return cell[0] if isinstance(cell, list) else cell


class TestKernelCommands:
    def test_kernel_json(self, write_json, tmp_path):
        out = tmp_path / "kernel.json"
        assert main(["kernel", "--spec", write_json("L.json", IDENTITY), "--out", str(out)]) == EXIT_OK
        result = read_json(out)
        assert result["pfaffian"] is False
        assert result["ground"] == ["0", "1"]
        assert result["kernel"]["data"] == [["1/2", "0"], ["0", "1/2"]]

    def test_kernel_csv(self, write_json, tmp_path):
        out = tmp_path / "kernel.csv"
        assert main(["kernel", "--spec", write_json("L.json", IDENTITY), "--out", str(out)]) == EXIT_OK
        rows = read_csv(out)
        assert rows[0] == ["i", "u", "j", "v", "re", "im"]
        assert rows[1] == ["0", "0", "0", "0", "1/2", "0"]
        assert rows[2] == ["0", "0", "1", "1", "0", "0"]
        assert len(rows) == 5

    def test_float_backend(self, write_json, tmp_path):
        out = tmp_path / "kernel.json"
        args = ["kernel", "--spec", write_json("L.json", IDENTITY), "--scalar", "float", "--out", str(out)]
        assert main(args) == EXIT_OK
        assert read_json(out)["kernel"]["data"][0] == [0.5, 0.0]

    def test_labelled_window(self, write_json, tmp_path):
        spec = {"ground": ["a", "b"], "L": [[1, 1], ["1/2", 2]], "window": ["b"]}
        out = tmp_path / "kernel.json"
        assert main(["kernel", "--spec", write_json("L.json", spec), "--out", str(out)]) == EXIT_OK
        assert read_json(out)["ground"] == ["a", "b"]

    def test_pf_kernel(self, write_json, tmp_path):
        out = tmp_path / "kernel.csv"
        spec = write_json("L.json", {"ground": ["x"], "L": [[0, 1], [-1, 0]]})
        assert main(["pf-kernel", "--spec", spec, "--out", str(out)]) == EXIT_OK
        rows = read_csv(out)
        assert rows[0] == ["i", "u", "j", "v", "block", "re", "im"]
        assert [row[4] for row in rows[1:]] == ["11", "12", "21", "22"]

    def test_em_kernel(self, write_json, tmp_path):
        spec = {"levels": [[0, 1]], "n": 1, "Phi": [[1, 1]], "Psi": [[1], [1]]}
        out = tmp_path / "em.json"
        assert main(["em-kernel", "--spec", write_json("em.json", spec), "--out", str(out)]) == EXIT_OK
        result = read_json(out)
        assert result["ground"] == ["(1,0)", "(1,1)"]
        assert result["kernel"]["data"] == [["1/2", "1/2"], ["1/2", "1/2"]]

    def test_pf_em_kernel(self, write_json, tmp_path):
        spec = {"levels": [[0, 1]], "n": 1, "epsilon": [[0, 1], [-1, 0]], "Xi": [[1, 0], [0, 1]]}
        out = tmp_path / "em.json"
        assert main(["em-kernel", "--spec", write_json("em.json", spec), "--out", str(out)]) == EXIT_OK
        result = read_json(out)
        assert result["pfaffian"] is True
        assert result["kernel"]["rows"] == 4

    def test_em_kernel_labels(self, write_json, tmp_path):
        spec = {
            "levels": [["a", "b"], ["x", "y", "z"]],
            "n": 1,
            "Phi": [[1, 2]],
            "Ws": [[[1, 0, 1], [1, 1, 0]]],
            "Psi": [[1], [2], [3]],
        }
        path = write_json("em.json", spec)
        out = tmp_path / "em.json"
        assert main(["em-kernel", "--spec", path, "--out", str(out)]) == EXIT_OK
        result = read_json(out)
        assert result["ground"] == ["(1,a)", "(1,b)", "(2,x)", "(2,y)", "(2,z)"]
        # ρ(a) = Φ(a) Σ_y W(a,y) Ψ(y) / M = 4/10
        assert result["kernel"]["data"][0][0] == "2/5"

        out_csv = tmp_path / "em.csv"
        assert main(["em-kernel", "--spec", path, "--out", str(out_csv)]) == EXIT_OK
        rows = read_csv(out_csv)
        assert rows[1][:4] == ["1", "a", "1", "a"]
        assert rows[-1][:4] == ["2", "z", "2", "z"]

    @pytest.mark.parametrize("levels", [[2], [["a", "a"]]])
    def test_em_kernel_bad_levels(self, write_json, levels):
        spec = {"levels": levels, "n": 1, "Phi": [[1, 1]], "Psi": [[1], [1]]}
        assert main(["em-kernel", "--spec", write_json("em.json", spec)]) == EXIT_ERROR

    def test_schur_kernel(self, write_json, tmp_path):
        out = tmp_path / "schur.json"
        args = ["schur-kernel", "--spec", write_json("s.json", ONE_ROW), "--points", "(1,0)", "--out", str(out)]
        assert main(args) == EXIT_OK
        value = real_part(read_json(out)["kernel"]["data"][0][0])
        assert value == pytest.approx(3 / 16, abs=1e-8)


class TestErrors:
    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        assert main(["kernel", "--spec", str(path)]) == EXIT_ERROR

    def test_missing_file(self, tmp_path):
        assert main(["kernel", "--spec", str(tmp_path / "absent.json")]) == EXIT_ERROR

    def test_ragged_matrix(self, write_json):
        assert main(["kernel", "--spec", write_json("L.json", {"L": [[1, 2], [3]]})]) == EXIT_ERROR

    def test_not_square(self, write_json):
        assert main(["kernel", "--spec", write_json("L.json", {"L": [[1, 2]]})]) == EXIT_ERROR

    def test_singular_normalizer(self, write_json):
        assert main(["kernel", "--spec", write_json("L.json", {"L": [[-1]]})]) == EXIT_ERROR

    def test_bad_points(self, write_json):
        args = ["schur-kernel", "--spec", write_json("s.json", ONE_ROW), "--points", "(1,0) junk"]
        assert main(args) == EXIT_ERROR

    def test_bad_tolerance(self):
        assert main(["verify", "--suite", "lensemble", "--tol", "-1"]) == EXIT_ERROR


class TestVerifyCommands:
    def test_exact_suite(self, tmp_path):
        out = tmp_path / "report.json"
        args = ["verify", "--suite", "lensemble", "--tol", "exact", "--out", str(out)]
        assert main(args) == EXIT_OK
        result = read_json(out)
        assert result["passed"] is True
        assert result["reports"][0]["suite"] == "lensemble"
        assert result["reports"][0]["cases"] > 0

    def test_csv_report(self, tmp_path):
        out = tmp_path / "report.csv"
        assert main(["verify", "--suite", "symfunc", "--out", str(out)]) == EXIT_OK
        rows = read_csv(out)
        assert rows[0][0] == "suite"
        assert rows[1][0] == "symfunc"

    def test_unknown_suite_rejected_by_parser(self):
        with pytest.raises(SystemExit):
            main(["verify", "--suite", "nonsense"])

    def test_schur_verify(self, write_json, tmp_path):
        out = tmp_path / "schur.json"
        args = [
            "schur-verify",
            "--spec",
            write_json("s.json", ONE_ROW),
            "--points",
            "(1,0)",
            "--cutoff",
            "10",
            "--out",
            str(out),
        ]
        assert main(args) == EXIT_OK
        result = read_json(out)
        assert result["passed"] is True
        assert result["rows"][0]["points"] == "(1,0)"
        assert result["rows"][0]["oracle_value"] == "3/16"


class TestSampleCommand:
    def test_deterministic(self, write_json, tmp_path):
        spec = write_json("L.json", IDENTITY)
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        for out in (first, second):
            args = ["sample", "--spec", spec, "--seed", "3", "--samples", "5", "--out", str(out)]
            assert main(args) == EXIT_OK
        a, b = read_json(first), read_json(second)
        assert a == b
        assert len(a["samples"]) == 5
        assert all(set(s) <= {"0", "1"} for s in a["samples"])

    def test_pfaffian_sample(self, write_json, tmp_path):
        out = tmp_path / "s.json"
        spec = write_json("L.json", {"L": [[0, 1], [-1, 0]]})
        assert main(["sample", "--spec", spec, "--pfaffian", "--samples", "3", "--out", str(out)]) == EXIT_OK
        assert len(read_json(out)["samples"]) == 3


class TestPointAction:
    def test_gl2_action(self, write_json, tmp_path):
        spec = {
            "point": {"n": 1, "coeffs": {"0b0": 1, "0b1": 2}},
            "actions": [{"factor": 1, "g": [[1, 1], [0, 1]]}],
        }
        out = tmp_path / "p.json"
        assert main(["point-action", "--spec", write_json("p.json", spec), "--out", str(out)]) == EXIT_OK
        assert read_json(out)["point"]["coeffs"] == {"0b0": "3", "0b1": "2"}

    def test_witness_tracks_point(self, write_json, tmp_path):
        spec = {
            "witness": {"n": 2, "m": 0, "K": [[1, 2], [3, 4]]},
            "actions": [
                {"factor": 2, "g": [[0, 1], [1, 0]]},
                {"permutation": [2, 1]},
                {"factor": 1, "g": [[2, 1], [1, 1]]},
            ],
        }
        out = tmp_path / "p.json"
        assert main(["point-action", "--spec", write_json("p.json", spec), "--out", str(out)]) == EXIT_OK
        result = read_json(out)
        assert result["projective_match"] is True
        assert result["witness"]["m"] >= 1

    def test_four_factor(self, write_json, tmp_path):
        coeffs = {"0b0000": 1, "0b0101": 1, "0b1001": 1, "0b0110": 1, "0b1010": 1, "0b1111": "-1/2"}
        out = tmp_path / "p.json"
        args = ["point-action", "--spec", write_json("p.json", {"point": {"n": 4, "coeffs": coeffs}}), "--four-factor", "--out", str(out)]
        assert main(args) == EXIT_OK
        witness = read_json(out)["four_factor_witness"]
        assert witness["n"] == 4 and witness["m"] == 0
        assert witness["K"]["rows"] == 4

    def test_action_needs_one_kind(self, write_json):
        spec = {"point": {"n": 1, "coeffs": {"0b0": 1}}, "actions": [{"permutation": [1], "factor": 1, "g": [[1, 0], [0, 1]]}]}
        assert main(["point-action", "--spec", write_json("p.json", spec)]) == EXIT_ERROR
