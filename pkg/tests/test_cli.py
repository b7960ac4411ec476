import json

import pytest

from famkit.cli import main


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_json(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


UNIFORM4 = {
    "algebra": {"ground": {"n": 4}, "generators": [[0], [1], [2], [3]]},
    "weights": {"0": "1/4", "1": "1/4", "2": "1/4", "3": "1/4"},
}

CROSS_SECTION = {
    "fam0": {
        "algebra": {"ground": {"labels": ["00", "01", "10", "11"]}, "generators": [["00", "01"]]},
        "weights": {"00,01": "1/3", "10,11": "2/3"},
    },
    "fam1": {
        "algebra": {"ground": {"labels": ["00", "01", "10", "11"]}, "generators": [["00", "10"]]},
        "weights": {"00,10": "1/2", "01,11": "1/2"},
    },
}


class TestClassify:
    def test_uniform_fixture(self, tmp_path, capsys):
        path = write_json(tmp_path, "fam.json", UNIFORM4)
        code, out, _ = run(capsys, ["classify", "--in", path])
        assert code == 0
        report = json.loads(out)
        assert report["probability"] is True
        assert report["uap"] is True
        assert report["d"] == 4

    def test_no_uap_fixture(self, tmp_path, capsys):
        payload = {
            "algebra": {"ground": {"n": 3}, "generators": [[0], [1]]},
            "weights": {"0": "1/3", "1": "2/3"},
        }
        path = write_json(tmp_path, "fam.json", payload)
        code, out, _ = run(capsys, ["classify", "--in", path])
        assert code == 0
        assert json.loads(out)["uap"] is False


class TestAlgebraAndFamCheck:
    def test_algebra(self, tmp_path, capsys):
        path = write_json(
            tmp_path, "alg.json", {"ground": {"n": 4}, "generators": [[0, 1], [1, 2]]}
        )
        code, out, _ = run(capsys, ["algebra", "--in", path])
        assert code == 0
        report = json.loads(out)
        assert report["atom_count"] == 4
        assert report["size"] == 16

    def test_fam_values_form(self, tmp_path, capsys):
        payload = {
            "ground": {"n": 2},
            "values": [[[0, 1], "1"], [[0], "1/3"]],
        }
        path = write_json(tmp_path, "fam.json", payload)
        code, out, _ = run(capsys, ["fam-check", "--in", path])
        assert code == 0
        assert json.loads(out)["total"] == "1"

    def test_inconsistent_values_rejected(self, tmp_path, capsys):
        payload = {
            "ground": {"n": 2},
            "values": [[[0, 1], "1"], [[0], "2/3"], [[1], "2/3"]],
        }
        path = write_json(tmp_path, "fam.json", payload)
        code, _, err = run(capsys, ["fam-check", "--in", path])
        assert code == 2
        assert "error" in err


class TestAmalgamate:
    def test_cross_section_witness(self, tmp_path, capsys):
        path = write_json(tmp_path, "cross.json", CROSS_SECTION)
        code, out, _ = run(capsys, ["amalgamate", "--in", path])
        assert code == 0
        report = json.loads(out)
        assert report["result"]["status"] == "feasible"
        from fractions import Fraction

        w11 = Fraction(report["result"]["witness"]["weights"]["11"])
        assert Fraction(1, 6) <= w11 <= Fraction(1, 2)

    def test_incompatible_exit_code(self, tmp_path, capsys):
        payload = {
            "fam0": {"algebra": {"ground": {"n": 2}, "generators": [[0]]}, "weights": {"0": "1", "1": "0"}},
            "fam1": {"algebra": {"ground": {"n": 2}, "generators": [[0]]}, "weights": {"0": "0", "1": "1"}},
        }
        path = write_json(tmp_path, "bad.json", payload)
        code, out, _ = run(capsys, ["amalgamate", "--in", path])
        assert code == 3
        assert json.loads(out)["result"]["certificate"]["kind"] == "violating_pair"


class TestExtend:
    def test_value_range(self, tmp_path, capsys):
        payload = {
            "ground": {"labels": ["00", "01", "10", "11"]},
            "pairs": [
                [["00", "01", "10", "11"], "1"],
                [["00", "01"], "1/3"],
                [["00", "10"], "1/2"],
            ],
            "value_range_of": ["11"],
        }
        path = write_json(tmp_path, "ext.json", payload)
        code, out, _ = run(capsys, ["extend", "--in", path])
        assert code == 0
        report = json.loads(out)
        assert report["value_range"] == ["1/6", "1/2"]

    def test_infeasible_certificate(self, tmp_path, capsys):
        payload = {
            "ground": {"n": 2},
            "pairs": [[[0, 1], "1"], [[0], "2/3"], [[1], "2/3"]],
        }
        path = write_json(tmp_path, "bad.json", payload)
        code, out, _ = run(capsys, ["extend", "--in", path])
        assert code == 3
        assert json.loads(out)["result"]["certificate"]["kind"] == "h_vector"


class TestIntegrateCLI:
    def test_poly_flag_form(self, capsys):
        code, out, _ = run(
            capsys,
            ["integrate", "--fn", '{"poly": [0, 0, 1]}', "--box", "[[0, 1]]", "--eps", "1e-6"],
        )
        assert code == 0
        report = json.loads(out)
        assert report["status"] == "integrable"
        assert abs(report["value"] - 1 / 3) <= 1e-6

    def test_table_form(self, tmp_path, capsys):
        payload = {"fam": UNIFORM4, "table": ["1", "2", "3", "4"]}
        path = write_json(tmp_path, "int.json", payload)
        code, out, _ = run(capsys, ["integrate", "--in", path])
        assert code == 0
        assert json.loads(out)["value"] == "5/2"

    def test_dirichlet_exit_code(self, capsys):
        code, out, _ = run(
            capsys,
            ["integrate", "--fn", '{"indicator": "dirichlet"}', "--box", "[[0, 1]]", "--eps", "1e-6"],
        )
        assert code == 3
        assert json.loads(out)["status"] == "not_integrable"

    def test_undecided_exit_code(self, capsys):
        code, out, _ = run(
            capsys,
            [
                "integrate", "--fn", '{"poly": [0, 0, 1]}', "--box", "[[0, 1]]",
                "--eps", "1e-9", "--budget", "32",
            ],
        )
        assert code == 4


class TestJordanMeasureCLI:
    def test_triangle(self, capsys):
        code, out, _ = run(
            capsys,
            ["jordan", "--region", '"triangle-xy"', "--box", "[[0, 1], [0, 1]]", "--eps", "1/1000"],
        )
        assert code == 0
        report = json.loads(out)
        assert report["jordan"] is True

    def test_dense_not_jordan(self, capsys):
        code, out, _ = run(
            capsys, ["jordan", "--region", '"dirichlet"', "--box", "[[0, 1]]"]
        )
        assert code == 3
        report = json.loads(out)
        assert report["inner"] == "0" and report["outer"] == "1"

    def test_measure_finite(self, tmp_path, capsys):
        payload = {"fam": UNIFORM4, "set": [0, 2]}
        path = write_json(tmp_path, "m.json", payload)
        code, out, _ = run(capsys, ["measure", "--in", path])
        assert code == 0
        report = json.loads(out)
        assert report["inner"] == "1/2" and report["outer"] == "1/2"


class TestCantorCLI:
    def test_integrate(self, capsys):
        code, out, _ = run(
            capsys, ["cantor", "--fn", '{"poly": [0, 1]}', "--eps", "1e-4"]
        )
        assert code == 0
        assert abs(json.loads(out)["value"] - 0.5) <= 1e-4

    def test_vitali(self, tmp_path, capsys):
        path = write_json(tmp_path, "c.json", {"fn": {"indicator": "dirichlet"}, "op": "vitali"})
        code, out, _ = run(capsys, ["cantor", "--in", path, "--eps", "1/100"])
        assert code == 3
        assert json.loads(out)["verdict"] == "not_integrable"


class TestErrorPaths:
    def test_unknown_subcommand_usage(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_no_subcommand(self, capsys):
        assert main([]) == 2

    def test_missing_file(self, capsys):
        code = main(["classify", "--in", "/nonexistent/really.json"])
        assert code == 2

    def test_table_format(self, tmp_path, capsys):
        path = write_json(tmp_path, "fam.json", UNIFORM4)
        code, out, _ = run(capsys, ["classify", "--in", path, "--format", "table"])
        assert code == 0
        assert "probability: true" in out
