import json

import pytest

from cm2 import cli
from cm2.gk import GK2Unhandled

KEYS = {"disc", "pol", "entries", "exponents", "formula", "errors"}


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_polarizations_79(capsys):
    code, out, _ = run(capsys, "polarizations", "--disc", "79")
    assert code == 0
    assert out.split() == ["[3,7,w]", "[5,16,2w-1]", "[8,12,2w+3]"]


def test_pdr_json(capsys):
    code, out, _ = run(capsys, "pdr", "--disc", "163", "--pol", "6,7,0,1", "--json")
    assert code == 0
    (rec,) = json.loads(out)
    assert KEYS <= set(rec)
    assert rec["entries"][:2] == [{"p": 2, "e": 1}, {"p": 3, "e": 2}]
    assert rec["exponents"] == {"2": 12, "3": 24, "5": 12, "7": 12, "11": 12, "17": 12, "19": 12, "23": 12}
    # primes in numeric order
    assert list(rec["exponents"]) == ["2", "3", "5", "7", "11", "17", "19", "23"]


def test_json_is_deterministic(capsys):
    _, a, _ = run(capsys, "discriminant", "--disc", "43", "--json")
    _, b, _ = run(capsys, "discriminant", "--disc", "43", "--json")
    assert a == b
    for rec in json.loads(a):
        assert list(rec) == sorted(rec)


def test_bad_polarization_is_a_usage_error(capsys):
    # 6,7,1,1 is [6,7,w+1], which has determinant -1
    code, _, err = run(capsys, "pdr", "--disc", "163", "--pol", "6,7,1,1")
    assert code == 1
    assert "determinant" in err
    assert run(capsys, "pdr", "--disc", "163", "--pol", "6,7")[0] == 1
    assert run(capsys, "pdr", "--disc", "163", "--pol", "a,b,c,d")[0] == 1


def test_usage_errors(capsys):
    assert run(capsys, "gram", "--disc", "12")[0] == 1
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "pdr")[0] == 1


def test_gram_and_sieve(capsys):
    code, out, _ = run(capsys, "gram", "--disc", "163", "--pol", "6,7,0,1", "--json")
    assert code == 0
    (rec,) = json.loads(out)
    assert rec["det"] == 652
    assert "closed_q" in rec
    code, out, _ = run(capsys, "sieve", "--disc", "163", "--pol", "6,7,0,1", "--json")
    (rec,) = json.loads(out)
    assert rec["t_matrices"] == 19 and rec["t_matrices_congruent"] == 8
    assert rec["candidates"] == [2, 3, 5, 7, 11, 17, 19, 23]


def test_closed_formula_command(capsys):
    code, out, _ = run(capsys, "closed-formula", "--disc", "55", "--pol", "3,5,0,1", "--json")
    assert code == 0
    assert json.loads(out)[0]["formula"] == {"2": -12, "3": 48}
    code, out, _ = run(capsys, "closed-formula", "--disc", "55", "--pol", "3,5,0,1", "--char-convention", "n_over_d")
    assert out.split() == ["[3,5,w]", "2^-12", "3^48"]
    code, out, _ = run(capsys, "closed-formula", "--disc", "40", "--json")
    assert code == 0
    recs = json.loads(out)
    assert all(r["formula"] is None and r["errors"] for r in recs)


def test_verify_tables_small(capsys):
    code, out, _ = run(capsys, "verify-tables", "--disc-max", "45")
    assert code == 0
    assert out.strip().splitlines()[-1].endswith("rows match")


def test_verify_tables_empty_and_mismatch(capsys, tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"rows": []}))
    assert run(capsys, "verify-tables", "--data", str(empty))[0] == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"rows": [{"d": 8, "pol": [2, 2, 1, 1], "explicit": {"2": 24}, "formula": None}]}))
    code, out, _ = run(capsys, "verify-tables", "--data", str(bad))
    assert code == 2
    assert "MISMATCH" in out


def test_gk2_exit_code(capsys, monkeypatch):
    def boom(*a, **k):
        raise GK2Unhandled("forced")

    monkeypatch.setattr(cli, "pdr_report", boom)
    assert run(capsys, "pdr", "--disc", "43")[0] == 3


def test_conjecture_scan_small(capsys):
    code, out, _ = run(capsys, "conjecture-scan", "--disc-max", "44", "--json")
    assert code == 0
    rec = json.loads(out)
    assert rec["exceptions"] == [{"disc": 40, "pol": [2, 6, 1, 1], "p": 5}]
    assert rec["errors"] == []


def test_module_entry_point():
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "cm2.cli", "polarizations", "--disc", "8"], capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.strip() == "[2,2,w+1]"
