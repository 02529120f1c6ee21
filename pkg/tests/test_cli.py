import json
import os
import subprocess
import sys

import pytest

from gpcheck.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, dump_json, main
from gpcheck.gf import field_of_order
from gpcheck.polygon import build_pg2, format_incidence


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), out


def test_sieve_single(capsys):
    code, data, _ = run_json(capsys, "sieve", "--kind", "hexagon", "--n", "63")
    assert code == EXIT_OK and data["solutions"] == [[2, 2]]
    code, data, _ = run_json(capsys, "sieve", "--kind", "octagon", "--n", "1755")
    assert data["solutions"] == [[2, 4]]
    code, out, _ = run(capsys, "--format", "text", "sieve", "--kind", "hexagon", "--n", "64")
    assert out.strip() == "hexagon N=64: no solutions"


def test_sieve_big_n_as_string(capsys):
    N = (2**60 + 1) * 3
    _, data, _ = run_json(capsys, "sieve", "--kind", "hexagon", "--n", str(N))
    assert data["n"] == str(N)


@pytest.mark.parametrize("argv", [
    ["sieve", "--kind", "octagon", "--n", "0"],
    ["sieve", "--kind", "hexagon"],
    ["sieve", "--table", "/nonexistent/table.json"],
])
def test_sieve_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == EXIT_USAGE and out == "" and err.startswith("gpcheck sieve:")


def test_sieve_builtin_table(capsys):
    code, data, _ = run_json(capsys, "sieve", "--builtin-table")
    assert code == EXIT_OK and len(data) == 8
    assert all(r["excluded"] and r["hexagon_solutions"] == r["octagon_solutions"] == [] for r in data)
    code, out, _ = run(capsys, "sieve", "--builtin-table", "--format", "text")
    assert sum(line.endswith("EXCLUDED") for line in out.splitlines()) == 8


def test_sieve_table_file(capsys, tmp_path):
    path = tmp_path / "table.json"
    path.write_text(json.dumps([{"group": "PSL(2,7)", "stabilizer": "A(4)"}]))
    code, data, _ = run_json(capsys, "sieve", "--table", str(path))
    assert code == EXIT_OK and data[0]["index"] == 14
    path.write_text("[{")
    assert run(capsys, "sieve", "--table", str(path))[0] == EXIT_USAGE


@pytest.mark.parametrize("fixture,n,s,t", [("pg2:2", 3, 2, 2), ("pg2:3", 3, 3, 3), ("w:2", 4, 2, 2)])
def test_geometry_fixtures(capsys, fixture, n, s, t):
    code, data, _ = run_json(capsys, "geometry", "--fixture", fixture)
    assert code == EXIT_OK and data["polygon"] == {"n": n, "s": s, "t": t}
    _, data, _ = run_json(capsys, "geometry", "--fixture", fixture, "--dual")
    assert data["polygon"] == {"n": n, "s": t, "t": s}


def test_geometry_file(capsys, tmp_path):
    path = tmp_path / "pg22.txt"
    path.write_text(format_incidence(build_pg2(field_of_order(2))))
    _, data, _ = run_json(capsys, "geometry", str(path))
    assert data["polygon"]["n"] == 3
    thin = tmp_path / "thin.txt"
    thin.write_text("points 3\nlines 3\n0 1\n1 2\n2 0\n")
    code, data, _ = run_json(capsys, "geometry", str(thin))
    assert code == EXIT_OK and data["rejected"]["reason"] == "thin"
    digon = tmp_path / "digon.txt"
    digon.write_text("points 3\nlines 3\n0 1 2\n0 1 2\n0 1 2\n")
    assert run(capsys, "geometry", str(digon))[0] == EXIT_USAGE
    _, data, _ = run_json(capsys, "geometry", str(digon), "--allow-repeated-lines")
    assert data["polygon"] == {"n": 2, "s": 2, "t": 2}


@pytest.mark.parametrize("argv", [
    ["geometry"], ["geometry", "--fixture", "pg3:2"], ["geometry", "--fixture", "pg2:6"],
    ["geometry", "/nonexistent/file"], ["geometry", "x", "--fixture", "pg2:2"],
])
def test_geometry_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_verify_all_defaults(capsys):
    code, data, _ = run_json(capsys, "verify", "--all-defaults")
    assert code == EXIT_OK and len(data) == 20 and all(r["passed"] for r in data)


def test_verify_single_claims(capsys):
    code, data, _ = run_json(capsys, "verify", "--claim", "generation", "--k", "2", "--q", "2")
    assert code == EXIT_OK and data[0]["values"]["order"] == 20160
    code, out, err = run(capsys, "verify", "--claim", "claim2", "--k", "3", "--q", "2")
    assert code == EXIT_USAGE and "k >= 4" in err
    code, out, _ = run(capsys, "verify", "--claim", "claim2", "--k", "4", "--q", "2", "--format", "text")
    assert code == EXIT_OK and out.startswith("PASS claim2")


def test_verify_spec_file(capsys, tmp_path):
    path = tmp_path / "claims.json"
    path.write_text(json.dumps([{"claim": "claim5", "params": {"k": 4, "q": 2}},
                                {"claim": "claim2", "params": {"k": 3, "q": 2}}]))
    code, data, _ = run_json(capsys, "verify", "--spec", str(path))
    assert code == EXIT_FAIL
    assert [r["passed"] for r in data] == [True, False] and "error" in data[1]
    path.write_text('{"claim": 1}')
    assert run(capsys, "verify", "--spec", str(path))[0] == EXIT_USAGE


def test_verify_budget_reported_per_item(capsys, tmp_path):
    path = tmp_path / "claims.json"
    path.write_text(json.dumps([{"claim": "generation", "params": {"k": 2, "q": 3}},
                                {"claim": "claim2", "params": {"k": 4, "q": 2}}]))
    code, data, _ = run_json(capsys, "--closure-cap", "10", "verify", "--spec", str(path))
    assert code == EXIT_FAIL
    assert data[0]["error"].startswith("BudgetExceeded") and data[1]["passed"]
    # the override does not leak past the command
    assert "GPCHECK_CLOSURE_CAP" not in os.environ


def test_verify_needs_one_mode(capsys):
    assert run(capsys, "verify")[0] == EXIT_USAGE
    assert run(capsys, "verify", "--all-defaults", "--claim", "claim2")[0] == EXIT_USAGE


def test_order(capsys):
    for argv, order in ((["SL", "4", "2"], 20160), (["PSL", "2", "41"], 34440), (["A", "5"], 60)):
        code, data, _ = run_json(capsys, "order", *argv)
        assert code == EXIT_OK and data["order"] == order
    code, out, _ = run(capsys, "--format", "text", "order", "SL", "4", "2", "--bsgs-check")
    assert out.strip() == "20160  (bsgs: match)"
    code, data, _ = run_json(capsys, "order", "GL", "3", "3", "--bsgs-check")
    assert data["bsgs_order"] == data["order"] == 11232
    _, data, _ = run_json(capsys, "order", "PSL", "5", "3", "--bsgs-check")
    assert data["order"] == 237783237120 and data["bsgs_check"].startswith("skipped")
    assert run(capsys, "order", "XX", "2")[0] == EXIT_USAGE


def test_budget_flags_validated(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--enum-budget", "0", "order", "A", "5"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        main(["order", "A", "5", "--bogus"])
    code, out, err = run(capsys, "--enum-budget", "3", "geometry", "--fixture", "pg2:2")
    assert code == EXIT_USAGE and out == "" and "7 subspaces exceed" in err
    assert run(capsys, "--enum-budget", "7", "geometry", "--fixture", "pg2:2")[0] == EXIT_OK
    assert "GPCHECK_ENUM_BUDGET" not in os.environ


@pytest.mark.parametrize("argv", [
    ["sieve", "--builtin-table"],
    ["verify", "--all-defaults"],
    ["geometry", "--fixture", "w:2"],
    ["order", "PSL", "5", "3"],
    ["sieve", "--kind", "hexagon", "--n", str(3 * (2**70 + 1))],
])
def test_json_round_trip_byte_identical(capsys, argv):
    _, data, out = run_json(capsys, *argv)
    assert dump_json(json.loads(out)) == out


def test_output_file(capsys, tmp_path):
    path = tmp_path / "out.json"
    code, out, _ = run(capsys, "order", "A", "5", "-o", str(path))
    assert code == EXIT_OK and out == ""
    assert json.loads(path.read_text())["order"] == 60


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "gpcheck", "order", "M11"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["order"] == 7920
