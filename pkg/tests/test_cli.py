"""End-to-end checks of the command-line surface.

Commands run in-process through ``cli.main`` so stdout/stderr land in capsys;
one subprocess test covers the installed console script.
"""
import json
import shutil
import subprocess
import sys

import pytest

from nilgrade.cli import main
from nilgrade.core import Algebra
from nilgrade.families import family_a6
from nilgrade.scalar import QI_FIELD, Qi


def run(capsys, *argv):
    """Exit code plus parsed stdout/stderr JSON (None where empty)."""
    rc = main(list(argv))
    cap = capsys.readouterr()
    out = json.loads(cap.out) if cap.out.strip().startswith("{") else cap.out
    err = json.loads(cap.err) if cap.err.strip() else None
    return rc, out, err


def write_algebra(capsys, tmp_path, name, *argv):
    rc = main(["construct", *argv])
    assert rc == 0
    path = tmp_path / name
    path.write_text(capsys.readouterr().out)
    return str(path)


# ---------------------------------------------------------------------------
# construct


def test_construct_round_trips_the_table(capsys):
    rc, doc, _ = run(capsys, "construct", "--family", "a6", "--n", "8",
                     "--params", "1,2,0,1,3,-2")
    assert rc == 0
    assert doc["schema"] == "nilgrade/1"
    assert doc["params"] == ["1", "2", "0", "1", "3", "-2"]
    alg = Algebra.from_json(doc["algebra"])
    expect = family_a6(8, (1, 2, 0, 1, 3, -2), QI_FIELD)
    assert alg == expect


def test_construct_literal_forms(capsys):
    rc, doc, _ = run(capsys, "construct", "--family", "a6",
                     "--params", "1/2, -3, 1+2i, -i, 0, 2/3")
    assert rc == 0
    assert doc["params"] == ["1/2", "-3", "1+2i", "-i", "0", "2/3"]


def test_construct_nullfiliform(capsys):
    rc, doc, _ = run(capsys, "construct", "--family", "nullfiliform", "--n", "9")
    assert rc == 0
    assert doc["algebra"]["dim"] == 9
    assert "params" not in doc

    rc, _, err = run(capsys, "construct", "--family", "nullfiliform", "--params", "1")
    assert rc == 1
    assert err["error"]["kind"] == "ParamSyntax"


def test_construct_rep_with_gaussian_parameter(capsys):
    rc, doc, _ = run(capsys, "construct", "--family", "rep", "--rep", "teo.9")
    assert rc == 0
    assert doc["rep"] == "teo.9"
    assert doc["params"] == ["0", "1", "0", "i", "0", "1"]


def test_construct_rep_rejects_bad_ids_and_excluded_values(capsys):
    rc, _, err = run(capsys, "construct", "--family", "rep", "--rep", "teo.99")
    assert rc == 1
    assert err["error"]["kind"] == "ConstraintViolation"
    assert "teo.99" in err["error"]["message"]

    rc, _, err = run(capsys, "construct", "--family", "rep", "--rep", "teo.15",
                     "--params", "1")
    assert rc == 1
    assert err["error"]["kind"] == "ConstraintViolation"


def test_construct_rejects_degenerate_b4_tail(capsys):
    rc, _, err = run(capsys, "construct", "--family", "b4", "--params", "1,0,1,0")
    assert rc == 1
    assert err["error"]["kind"] == "DegenerateParams"


def test_construct_mod_p(capsys):
    rc, doc, _ = run(capsys, "construct", "--family", "a6",
                     "--params", "1,2,0,1,3,-2", "--mod", "13")
    assert rc == 0
    assert doc["algebra"]["field"] == {"kind": "Fp", "p": 13}


def test_bad_literal_names_the_token(capsys):
    rc, _, err = run(capsys, "construct", "--family", "a6",
                     "--params", "1,2,zebra,1,3,-2")
    assert rc == 1
    assert err["error"]["kind"] == "ParamSyntax"
    assert "zebra" in err["error"]["message"]

    rc, _, err = run(capsys, "construct", "--family", "a6", "--params", "1,2")
    assert rc == 1
    assert "expected 6" in err["error"]["message"]


# ---------------------------------------------------------------------------
# verify


def test_verify_reports_the_grading(capsys, tmp_path):
    path = write_algebra(capsys, tmp_path, "a.json",
                         "--family", "a6", "--params", "1,2,0,1,3,-2")
    rc, doc, _ = run(capsys, "verify", path)
    assert rc == 0
    assert doc["nilindex"] == 4
    assert doc["char_sequence"] == [4, 2, 1]
    assert doc["graded"] is True
    assert doc["degrees"] == [1, 2, 3, 4, 1, 2, 1]
    assert doc["witness"][0] == "1"


def test_verify_b4_degrees(capsys, tmp_path):
    path = write_algebra(capsys, tmp_path, "b.json",
                         "--family", "b4", "--params", "2,1,3,4")
    rc, doc, _ = run(capsys, "verify", path)
    assert rc == 0
    assert doc["degrees"] == [1, 2, 3, 4, 1, 2, 2]


def test_verify_accepts_a_bare_table_document(capsys, tmp_path):
    alg = family_a6(7, (0, 1, 0, 0, 0, 0), QI_FIELD)
    path = tmp_path / "bare.json"
    path.write_text(json.dumps(alg.to_json()))
    rc, doc, _ = run(capsys, "verify", str(path))
    assert rc == 0
    assert doc["graded"] is True


def test_verify_broken_table_lists_the_triples(capsys, tmp_path):
    path = write_algebra(capsys, tmp_path, "a.json",
                         "--family", "a6", "--params", "1,2,0,1,3,-2")
    doc = json.loads(open(path).read())
    doc["algebra"]["table"][0]["coeffs"][0][1]["re"] = "7/1"
    open(path, "w").write(json.dumps(doc))

    rc, _, err = run(capsys, "verify", path)
    assert rc == 1
    assert err["error"]["kind"] == "AssociativityViolated"
    triples = err["error"]["violations"]
    assert triples and all(len(t) == 3 for t in triples)


def test_verify_missing_and_malformed_files(capsys, tmp_path):
    rc, _, err = run(capsys, "verify", str(tmp_path / "nope.json"))
    assert rc == 1
    assert err["error"]["kind"] == "FileNotFoundError"

    bad = tmp_path / "mangled.json"
    bad.write_text("{not json")
    rc, _, err = run(capsys, "verify", str(bad))
    assert rc == 1
    assert err["error"]["kind"] == "JSONDecodeError"


# ---------------------------------------------------------------------------
# classify


def test_classify_reports_branch_and_flags(capsys):
    rc, doc, _ = run(capsys, "classify", "--family", "a6",
                     "--params", "0,1,0,1,0,0")
    assert rc == 0
    assert doc["representative"] == "A(0,1,0,1,0,0)"
    assert doc["branch"] == "a.1.1.2.2"
    assert doc["branch_trace"] == doc["branch"]
    assert doc["rep_id"] == "teo.5"
    assert "theorem-list-discrepancy" in doc["flags"]
    assert doc["invariants"]["I4"] == "-1"


def test_classify_from_file(capsys, tmp_path):
    path = write_algebra(capsys, tmp_path, "t3.json",
                         "--family", "a6", "--params", "1,1,0,0,0,0")
    rc, doc, _ = run(capsys, "classify", path)
    assert rc == 0
    assert doc["rep_id"] == "teo.3"
    assert doc["family"] == "a6"


def test_classify_witness_matrix(capsys):
    rc, doc, _ = run(capsys, "classify", "--family", "a6",
                     "--params", "0,1,0,2,0,0", "--witness")
    assert rc == 0
    W = doc["witness"]
    assert len(W) == 7 and all(len(row) == 7 for row in W)


def test_classify_b4(capsys):
    rc, doc, _ = run(capsys, "classify", "--family", "b4", "--params", "1,0,0,1")
    assert rc == 0
    assert doc["rep_id"] == "teo1.3"
    assert doc["representative"] == "A(1,0,0,1)"


def test_classify_continuous_parameter_is_reported(capsys):
    rc, doc, _ = run(capsys, "classify", "--family", "a6",
                     "--params", "1,1,0,0,1,5")
    assert rc == 0
    assert doc["rep_id"] == "teo.16"
    assert "delta" in doc["continuous_params"]


def test_classify_rejects_unrecognized_tables(capsys, tmp_path):
    alg = family_a6(7, (1, 0, 0, 0, 0, 0), QI_FIELD)
    blob = alg.to_json()
    # dropping a chain product leaves a table no family constructor emits
    blob["table"] = [e for e in blob["table"] if (e["i"], e["j"]) != (1, 2)]
    path = tmp_path / "odd.json"
    path.write_text(json.dumps(blob))
    rc, _, err = run(capsys, "classify", str(path))
    assert rc == 1
    assert err["error"]["kind"] == "UnclassifiedParameters"


# ---------------------------------------------------------------------------
# isomorphic


def test_isomorphic_exact_positive(capsys, tmp_path):
    a = write_algebra(capsys, tmp_path, "p.json",
                      "--family", "a6", "--params", "0,1,0,1,0,0")
    b = write_algebra(capsys, tmp_path, "q.json",
                      "--family", "a6", "--params", "0,1,0,2,0,0")
    rc, doc, _ = run(capsys, "isomorphic", a, b)
    assert rc == 0
    assert doc["isomorphic"] is True
    assert doc["rep_p"] == doc["rep_q"] == "teo.5"
    assert doc["verified"] is True
    assert len(doc["witness"]) == 7


def test_isomorphic_exact_negative(capsys, tmp_path):
    a = write_algebra(capsys, tmp_path, "p.json",
                      "--family", "a6", "--params", "0,1,0,1,0,0")
    b = write_algebra(capsys, tmp_path, "q.json",
                      "--family", "a6", "--params", "1,1,0,0,1,2")
    rc, doc, _ = run(capsys, "isomorphic", a, b)
    assert rc == 0
    assert doc["isomorphic"] is False
    assert doc["rep_p"] != doc["rep_q"]
    assert "witness" not in doc


def test_isomorphic_family_mismatch_is_a_verdict(capsys, tmp_path):
    a = write_algebra(capsys, tmp_path, "p.json",
                      "--family", "a6", "--params", "0,1,0,1,0,0")
    b = write_algebra(capsys, tmp_path, "q.json",
                      "--family", "b4", "--params", "2,1,3,4")
    rc, doc, _ = run(capsys, "isomorphic", a, b)
    assert rc == 0
    assert doc["isomorphic"] is False
    assert "families differ" in doc["reason"]


def test_isomorphic_dimension_mismatch_is_an_error(capsys, tmp_path):
    a = write_algebra(capsys, tmp_path, "p.json",
                      "--family", "a6", "--params", "0,1,0,1,0,0")
    b = write_algebra(capsys, tmp_path, "q.json",
                      "--family", "a6", "--n", "8", "--params", "0,1,0,1,0,0")
    rc, _, err = run(capsys, "isomorphic", a, b)
    assert rc == 1
    assert err["error"]["kind"] == "ConstraintViolation"


def test_isomorphic_approx_reports_residual_and_seed(capsys, tmp_path):
    a = write_algebra(capsys, tmp_path, "p.json",
                      "--family", "a6", "--params", "1,2,0,1,3,-2")
    rc, doc, _ = run(capsys, "isomorphic", a, a, "--mode", "approx",
                     "--seed", "7", "--tol", "1e-10")
    assert rc == 0
    assert doc["isomorphic"] is True
    assert doc["residual"] < 1e-10
    assert doc["seed"] == 7 and doc["tol"] == 1e-10
    cell = doc["witness"][0][0]
    assert isinstance(cell, list) and len(cell) == 2


def test_seed_env_var_is_honored_and_flag_wins(capsys, tmp_path, monkeypatch):
    a = write_algebra(capsys, tmp_path, "p.json",
                      "--family", "a6", "--params", "1,2,0,1,3,-2")
    monkeypatch.setenv("NILGRADE_SEED", "11")
    rc, doc, _ = run(capsys, "isomorphic", a, a, "--mode", "approx")
    assert rc == 0 and doc["seed"] == 11
    rc, doc, _ = run(capsys, "isomorphic", a, a, "--mode", "approx", "--seed", "3")
    assert rc == 0 and doc["seed"] == 3


# ---------------------------------------------------------------------------
# nonexist


def test_nonexist_refuted_scenario(capsys):
    rc, doc, _ = run(capsys, "nonexist", "--n", "7",
                     "--scenario", "r1=2,r2=1", "--field", "5")
    assert rc == 0
    assert doc["solutions_found"] == 0
    assert doc["complete"] is True
    assert "elapsed" not in doc


def test_nonexist_timing_flag_adds_elapsed(capsys):
    rc, doc, _ = run(capsys, "nonexist", "--scenario", "shape:2,4,1",
                     "--field", "13", "--timing")
    assert rc == 0
    assert doc["elapsed"] >= 0.0


def test_nonexist_budget_exhaustion_is_a_domain_error(capsys):
    rc, _, err = run(capsys, "nonexist", "--scenario", "r1=1,r2=1",
                     "--field", "5", "--budget", "5")
    assert rc == 1
    assert err["error"]["kind"] == "BudgetExhausted"


def test_nonexist_bad_scenario(capsys):
    rc, _, err = run(capsys, "nonexist", "--scenario", "r1=fast")
    assert rc == 1
    assert err["error"]["kind"] == "ConstraintViolation"


# ---------------------------------------------------------------------------
# plumbing


def test_output_is_byte_stable(capsys):
    args = ("classify", "--family", "a6", "--params", "1,1,0,0,1,5")
    main(list(args))
    first = capsys.readouterr().out
    main(list(args))
    assert capsys.readouterr().out == first


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
    capsys.readouterr()


@pytest.mark.skipif(shutil.which("nilgrade") is None, reason="script not on PATH")
def test_console_script_runs():
    out = subprocess.run(
        ["nilgrade", "classify", "--family", "a6", "--params", "0,1,0,1,0,0"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["branch"] == "a.1.1.2.2"


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "nilgrade.cli", "nonexist", "--scenario", "r1=1,r2=3"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["complete"] is True
