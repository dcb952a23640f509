import json

import pytest

from superflag.cli import EXIT_FAIL, EXIT_OK, EXIT_UNSTABLE, EXIT_USAGE, main, parse_verify_output
from superflag.global_solver import SolveReport, solve_global_fields


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dim_text(capsys):
    code, out, _ = run(capsys, "dim", "--space", "Gr(2|1; 1|1)")
    assert code == EXIT_OK
    assert "dimension: 8" in out and "stabilized: yes" in out


def test_dim_json_round_trip(capsys):
    code, out, _ = run(capsys, "dim", "--space", "Gr(2|1; 1|1)", "--format", "json")
    assert code == EXIT_OK
    assert SolveReport.from_json(json.loads(out)) == solve_global_fields("Gr(2|1; 1|1)")


def test_dim_vertical(capsys):
    code, out, _ = run(capsys, "dim", "--space", "F(2|2; 1,1 | 2,1)", "--vertical")
    assert code == EXIT_OK and "dimension: 0" in out


def test_unstable_exit_code(capsys):
    code, out, _ = run(capsys, "dim", "--space", "Gr(2|2; 1|1)", "--degree", "0")
    assert code == EXIT_UNSTABLE and "stabilized: no" in out


def test_bad_space_is_usage_error(capsys):
    code, _, err = run(capsys, "dim", "--space", "Gr(2|2)")
    assert code == EXIT_USAGE and "error" in err


def test_argparse_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as e:
        main(["verify", "no-such-suite"])
    assert e.value.code == EXIT_USAGE
    capsys.readouterr()


def test_functions_and_kernel(capsys):
    code, out, _ = run(capsys, "functions", "--space", "Gr(1|2; 0|2)")
    assert code == EXIT_OK and "dimension: 4" in out
    code, out, _ = run(capsys, "kernel", "--space", "Gr(2|1; 1|1)", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK and data["rank"] == 8 and len(data["kernel"]) == 1


def test_project_requires_flag(capsys):
    code, _, _ = run(capsys, "project", "--space", "Gr(2|1; 1|1)")
    assert code == EXIT_USAGE


def test_lift_generator_and_theta(capsys):
    code, out, _ = run(capsys, "lift", "--space", "F(2|2; 1,1 | 2,1)", "--field", "E21", "--format", "json")
    assert code == EXIT_OK and json.loads(out)["feasible"]
    code, out, _ = run(capsys, "lift", "--space", "F(2|2; 1,1 | 2,1)")
    assert code == EXIT_OK and "feasible:" in out and "mixed partials:" in out
    code, _, _ = run(capsys, "lift", "--space", "F(2|2; 1,1 | 2,1)", "--field", "E99")
    assert code == EXIT_USAGE


def test_verify_pass_and_fail(capsys):
    code, out, _ = run(capsys, "verify", "kernel", "--space", "Gr(2|1; 1|1)")
    assert code == EXIT_OK and "2/2 passed" in out
    code, _, _ = run(capsys, "verify", "homomorphism", "--space", "Gr(2|1; 1|1)", "--orientation", "reversed")
    assert code == EXIT_OK
    code, out, _ = run(capsys, "verify", "homomorphism", "--space", "Gr(2|1; 1|1)", "--orientation", "literal",
                       "--samples", "0")
    assert code == EXIT_FAIL and "FAIL" in out


def test_verify_json_round_trip(capsys):
    code, out, _ = run(capsys, "verify", "kernel", "--space", "Gr(2|1; 1|1)", "--format", "json")
    data = parse_verify_output(out)
    assert code == EXIT_OK and data["passed"]
    assert [c.to_json() for c in data["checks"]] == json.loads(out)["checks"]


def test_table(capsys):
    code, out, _ = run(capsys, "table", "--max-m", "3", "--max-n", "3", "--format", "json")
    assert code == EXIT_OK
    rows = {(r["m"], r["n"], r["k1"], r["l1"]): r["dimension"] for r in json.loads(out)["rows"]}
    assert rows[(3, 3, 1, 1)] == 1
    assert rows[(2, 3, 2, 1)] == 10
    assert rows[(3, 2, 1, 0)] == 0
    code, out, _ = run(capsys, "table", "--max-m", "2", "--max-n", "2")
    assert code == EXIT_OK and out.splitlines()[0].split()[:4] == ["m", "n", "k1", "l1"]
