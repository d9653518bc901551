import json
from pathlib import Path

import pytest

from cullen_sums.cli import RunConfig, InputError, main, parse_shift
from cullen_sums.polynomials import IntegerPolynomial

DATA = Path(__file__).resolve().parents[1] / "data"
GOLDEN = Path(__file__).resolve().parent / "golden" / "bound_fib_replay.json"


@pytest.mark.parametrize(
    "text, coeffs",
    [("+1", (1,)), ("-1", (-1,)), ("x+1", (1, 1)), ("2x^2 - 3", (-3, 0, 2)), ("[1, 0, 1]", (1, 0, 1)), ("-x", (0, -1))],
)
def test_parse_shift(text, coeffs):
    assert parse_shift(text) == IntegerPolynomial(coeffs)


@pytest.mark.parametrize("text", ["", "x+", "1 2", "y+1", "[1, a]"])
def test_parse_shift_rejects(text):
    with pytest.raises(InputError):
        parse_shift(text)


def test_config_validation():
    with pytest.raises(InputError, match="precision"):
        RunConfig("bound", precision=32)
    with pytest.raises(InputError, match="workers"):
        RunConfig("search", workers=0)


def test_search_with_expectation(capsys):
    assert main(["search", "fib", "--ell-max", "135", "--n1-max", "200", "--expect", str(DATA / "fibonacci_cullen_solutions.json")]) == 0
    assert "(14, 6, 6)" in capsys.readouterr().out


def test_search_expectation_mismatch(tmp_path):
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps([["1", "0", "0"]]))
    assert main(["search", "fib", "--ell-max", "10", "--n1-max", "20", "--expect", str(wrong)]) == 5


def test_search_general_counterexample(tmp_path):
    out = tmp_path / "sol.json"
    code = main(["search", "general", "--spec", str(DATA / "counterexample.json"), "--q", "-1",
                 "--ell-max", "1", "--n1-max", "30", "-o", str(out)])
    assert code == 0
    sols = json.loads(out.read_text())["solutions"]
    assert all(isinstance(v, str) for s in sols for v in s)
    assert {int(s[0]) % 6 for s in sols if s[1] == "1"} == {1, 2}


def test_bound_exit_codes(capsys):
    assert main(["bound", "general", "--spec", str(DATA / "counterexample.json"), "--mode", "rigorous"]) == 2
    assert main(["bound", "general", "--spec", str(DATA / "pell.json"), "--x", "3", "--k", "2",
                 "--q", "x+1", "--mode", "rigorous"]) == 0
    assert main(["bound", "general", "--spec", str(DATA / "missing.json"), "--mode", "rigorous"]) == 1
    assert main(["bound", "general", "--spec", str(DATA / "pell.json")]) == 1  # replay needs A-values


def test_malformed_spec_names_field(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"order": "2", "coefficients": ["1", "x"], "initials": ["0", "1"]}))
    assert main(["bound", "general", "--spec", str(bad), "--mode", "rigorous"]) == 1
    assert "coefficients" in capsys.readouterr().err


def test_reduce_stage_two_needs_gap():
    assert main(["reduce", "fib", "--stage", "2"]) == 1


def test_reduce_small_box(capsys):
    assert main(["reduce", "fib", "--stage", "1", "--n1-max", "300", "--ell-max", "200", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert int(report["gap_bound"]) < 300


def test_verify_counterexample_commands(capsys):
    assert main(["verify-counterexample"]) == 0
    assert main(["verify-counterexample", "--k-max", "0"]) == 0
    assert main(["verify-counterexample", "--spec", str(DATA / "counterexample_tampered.json")]) == 5


def test_usage_errors_exit_with_input_code():
    with pytest.raises(SystemExit) as info:
        main(["search", "fib", "--ell-max", "many"])
    assert info.value.code == 1


def test_bound_fib_replay_matches_golden_file(tmp_path):
    out = tmp_path / "ledger.json"
    assert main(["bound", "fib", "--mode", "replay", "-o", str(out)]) == 0
    assert json.loads(out.read_text()) == json.loads(GOLDEN.read_text())
