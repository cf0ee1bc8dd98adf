import io
import json
import subprocess
import sys

import pytest

from degenrec.cli import main

ROOTS_12 = ["--lambda2", "1", "--lambda3", "2"]


def run(argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def run_json(argv, **kw):
    code, text = run(argv, **kw)
    return code, json.loads(text) if text.strip() else None


class TestAnalyze:
    def test_exact_report(self):
        code, doc = run_json(["analyze", *ROOTS_12, "--u0", "0", "--u1", "1", "--u2", "2", "--backend", "exact"])
        assert code == 0
        assert doc["backend"] == "exact"
        assert doc["binet"] == {"c1": "-1/12", "c2": "-2/3", "c3": "3/4"}
        assert doc["limits"]["L1"] == "8/5" and doc["limits"]["L2"] == "5/2"
        assert doc["limits"]["gamma_squared"] == "16/25"
        assert doc["convergence"] == {
            "u2_first": "-1",
            "u2_second": "3",
            "coincident": False,
            "limit": "none",
            "limit_value": None,
        }
        assert "empirical" not in doc

    def test_default_backend_is_exact_for_rationals(self):
        _, doc = run_json(["analyze", *ROOTS_12, "--u0", "0.5", "--u1", "1/3", "--u2", "2"])
        assert doc["backend"] == "exact"
        assert doc["initial_conditions"]["u0"] == "1/2"

    def test_coefficient_input_is_classified(self):
        _, doc = run_json(["analyze", "--a1", "1", "--a2", "4", "--a3", "-4", "--u0", "0", "--u1", "1", "--u2", "2"])
        assert doc["classification"]["tag"] == "Degenerated"
        assert doc["classification"]["roots"] == {"lambda1": "-2", "lambda2": "1", "lambda3": "2"}

    def test_rejected_coefficients_exit_2(self, capsys):
        code, doc = run_json(["analyze", "--a1", "1", "--a2", "1", "--a3", "1", "--u0", "0", "--u1", "1", "--u2", "2"])
        assert code == 2
        assert doc["classification"]["reason"] == "a3 ≠ −a1·a2"
        assert "a3 ≠ −a1·a2" in capsys.readouterr().err

    def test_invalid_roots_exit_2(self):
        code, _ = run(["analyze", "--lambda2", "2", "--lambda3", "2", "--u0", "0", "--u1", "1", "--u2", "2"])
        assert code == 2

    def test_geometric_regime(self):
        _, doc = run_json(["analyze", *ROOTS_12, "--u0", "1", "--u1", "1", "--u2", "1", "--backend", "exact"])
        assert doc["limits"]["regime"] == "GeometricLambda2"
        assert doc["limits"]["L1"] is None
        assert doc["convergence"]["limit"] == "lambda2"

    def test_float_backend_includes_empirical(self):
        _, doc = run_json(["analyze", *ROOTS_12, "--u0", "0", "--u1", "1", "--u2", "2", "--backend", "float"])
        emp = doc["empirical"]
        assert float(emp["parity"]["even"]) == pytest.approx(1.6, rel=1e-12)
        assert float(emp["parity"]["odd"]) == pytest.approx(2.5, rel=1e-12)
        assert emp["parity"]["converged"] is True
        assert float(emp["two_step"]["value"]) == pytest.approx(4.0)
        assert float(emp["gamma_squared"]["value"]) == pytest.approx(0.64)

    def test_empirical_flag_on_exact(self):
        _, doc = run_json(["analyze", *ROOTS_12, "--u0", "0", "--u1", "0", "--u2", "0", "--empirical"])
        assert doc["limits"]["regime"] == "ZeroSequence"
        assert "error" in doc["empirical"]["parity"]

    @pytest.mark.parametrize(
        "argv",
        [
            ["analyze", *ROOTS_12, "--u0", "x", "--u1", "1", "--u2", "2"],
            ["analyze", *ROOTS_12, "--u0", "1/0", "--u1", "1", "--u2", "2"],
            ["analyze", *ROOTS_12, "--u0", "1", "--u1", "1"],
            ["analyze", "--u0", "1", "--u1", "1", "--u2", "1"],
            ["analyze", *ROOTS_12, "--a1", "1", "--u0", "1", "--u1", "1", "--u2", "1"],
            ["analyze", *ROOTS_12, "--u0", "1", "--u1", "1", "--u2", "1", "--n", "7"],
            ["analyze", *ROOTS_12, "--u0", "nan", "--u1", "1", "--u2", "2", "--backend", "exact"],
            ["bogus"],
        ],
    )
    def test_malformed_input_exit_1(self, argv):
        assert run(argv)[0] == 1

    def test_table_and_csv(self):
        _, table = run(["analyze", *ROOTS_12, "--u0", "0", "--u1", "1", "--u2", "2", "--format", "table"])
        assert any(line.split() == ["limits.L1", "8/5"] for line in table.splitlines())
        _, text = run(["analyze", *ROOTS_12, "--u0", "0", "--u1", "1", "--u2", "2", "--format", "csv"])
        assert text.splitlines()[0] == "key,value"
        assert "binet.c1,-1/12" in text.splitlines()


class TestTerms:
    def test_json(self):
        code, doc = run_json(["terms", *ROOTS_12, "--u0", "0", "--u1", "1", "--u2", "2", "--n", "6"])
        assert code == 0
        assert doc == ["0", "1", "2", "6", "10", "26", "42"]

    def test_csv(self):
        _, text = run(["terms", *ROOTS_12, "--u0", "0", "--u1", "1", "--u2", "2", "--n", "3", "--format", "csv"])
        assert text.splitlines() == ["n,value", "0,0", "1,1", "2,2", "3,6"]

    def test_single_row(self):
        _, doc = run_json(["terms", *ROOTS_12, "--u0", "5", "--u1", "1", "--u2", "2", "--n", "0"])
        assert doc == ["5"]

    def test_zeros(self):
        _, doc = run_json(["terms", *ROOTS_12, "--u0", "0", "--u1", "0", "--u2", "0", "--n", "5"])
        assert doc == ["0"] * 6

    def test_float_overflow_warns(self, capsys):
        code, _ = run(["terms", *ROOTS_12, "--u0", "0", "--u1", "1", "--u2", "2", "--n", "1100", "--backend", "float"])
        assert code == 0
        assert "overflow" in capsys.readouterr().err


class TestFix:
    def test_two_branches(self):
        code, doc = run_json(["fix", *ROOTS_12, "--u0", "1", "--u1", "0"])
        assert code == 0
        assert (doc["u2_first"], doc["u2_second"], doc["coincident"]) == ("2", "-2", False)
        assert doc["branches"] == [
            {"u2": "2", "limit": "minus_lambda3", "limit_value": "-2"},
            {"u2": "-2", "limit": "plus_lambda3", "limit_value": "2"},
        ]

    def test_coincident(self):
        _, doc = run_json(["fix", *ROOTS_12, "--u0", "1", "--u1", "1"])
        assert doc["coincident"] is True
        assert doc["branches"] == [{"u2": "1", "limit": "lambda2", "limit_value": "1"}]

    def test_zero(self):
        _, doc = run_json(["fix", *ROOTS_12, "--u0", "0", "--u1", "0"])
        assert doc["u2_first"] == doc["u2_second"] == "0"
        assert doc["branches"][0]["limit"] == "zero_sequence"

    def test_invalid_roots(self):
        assert run(["fix", "--lambda2", "3", "--lambda3", "2", "--u0", "1", "--u1", "0"])[0] == 2


class TestFit:
    def test_stdin(self, monkeypatch):
        code, doc = run_json(["fit"], stdin="0,1,2,6,10,26,42", monkeypatch=monkeypatch)
        assert code == 0
        assert doc["fit"] == {"a1": "1", "a2": "4", "a3": "-4"}
        assert doc["classification"]["tag"] == "Degenerated"
        assert doc["limits"]["L1"] == "8/5"

    def test_singular(self, monkeypatch):
        code, doc = run_json(["fit"], stdin="1,1,1,1,1,1", monkeypatch=monkeypatch)
        assert code == 3
        assert "unique" in doc["fit"]["error"]

    def test_too_few(self, monkeypatch):
        assert run(["fit"], stdin="1,2", monkeypatch=monkeypatch)[0] == 1

    def test_mismatch_reports_index(self, monkeypatch):
        code, doc = run_json(["fit"], stdin="0\n1\n2\n6\n10\n26\n43\n", monkeypatch=monkeypatch)
        assert code == 3
        assert doc["fit"]["first_failing_index"] == 6

    def test_not_degenerated(self, monkeypatch):
        # tribonacci: a = (1, 1, 1)
        code, doc = run_json(["fit"], stdin="0 0 1 1 2 4 7 13", monkeypatch=monkeypatch)
        assert code == 2
        assert doc["fit"] == {"a1": "1", "a2": "1", "a3": "1"}

    @pytest.mark.parametrize("fmt", ["json", "csv"])
    def test_terms_round_trip(self, fmt, tmp_path):
        argv = ["terms", "--lambda2", "-1/2", "--lambda3", "3", "--u0", "1", "--u1", "2/3", "--u2", "-5", "--n", "12"]
        _, text = run([*argv, "--format", fmt])
        path = tmp_path / f"terms.{fmt}"
        path.write_text(text)
        code, doc = run_json(["fit", str(path)])
        assert code == 0
        assert doc["fit"] == {"a1": "-1/2", "a2": "9", "a3": "9/2"}

    def test_missing_file(self):
        assert run(["fit", "/nonexistent/terms.txt"])[0] == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "degenrec", "fix", *ROOTS_12, "--u0", "1", "--u1", "0"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["u2_first"] == "2"
