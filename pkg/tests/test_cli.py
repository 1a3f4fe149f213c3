import json
import subprocess
import sys

import pytest

from qcc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_roots(capsys):
    code, out, _ = run(capsys, "roots", "--quiver", "a2")
    assert code == 0
    assert out.splitlines()[1:] == ["(1,0)", "(1,1)", "(0,1)"]


def test_reineke(capsys):
    code, out, _ = run(capsys, "reineke", "--quiver", "a3")
    assert out.strip() == "(1,0,0) < (1,1,0) < (0,1,0) < (1,1,1) < (0,1,1) < (0,0,1)"


def test_kostant_json(capsys):
    code, out, _ = run(capsys, "kostant", "--quiver", "a2", "--gamma", "3,4", "--format", "json")
    data = json.loads(out)
    assert [p["multiplicities"] for p in data["partitions"]] == [[0, 3, 1], [1, 2, 2], [2, 1, 3], [3, 0, 4]]
    assert [p["open"] for p in data["partitions"]] == [True, False, False, False]


def test_class_a3_open_orbit(capsys):
    code, out, err = run(capsys, "class", "--quiver", "a3", "--partition", "0,0,1,1,0,0")
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "mode cohomology, method v2, codimension 0"
    assert lines[2] == ("a1_1*a2_1 + a1_1*a2_2 - 2*a1_1*a3_1 - a1_1 - a2_1^2 + a2_1*a3_1 - a2_2^2 "
                        "+ a2_2*a3_1 + a3_1 + 1")
    assert "computed in" in err


def test_class_zero_orbit_of_simple_root(capsys):
    code, out, _ = run(capsys, "class", "--quiver", "d4", "--gamma", "0,0,1,0", "--mode", "ktheory")
    assert out.splitlines()[-1] == "1"


def test_class_methods_agree(capsys):
    outs = []
    for method in ("v1", "v2"):
        code, out, _ = run(capsys, "class", "--quiver", "a3", "--partition", "1,0,0,2,0,1", "--mode", "k",
                           "--method", method, "--format", "json")
        outs.append(json.loads(out)["class"])
    assert outs[0] == outs[1]


def test_verify_commands(capsys):
    assert run(capsys, "verify", "sum", "--quiver", "a3", "--gamma", "1,2,1")[0] == 0
    assert run(capsys, "verify", "sum", "--quiver", "a3", "--gamma", "1,2,1", "--mode", "ktheory")[0] == 0
    code, out, _ = run(capsys, "verify", "dt", "--quiver", "a2", "--z1", "1,1;2,1", "--z2", "2,1;1,1",
                       "--cutoff", "3,3")
    assert code == 0 and out.startswith("PASS dt")
    code, out, _ = run(capsys, "verify", "conjecture", "--quiver", "d4", "--beta", "1,1,2,1")
    assert code == 0 and out.strip() == "PASS conjecture (1,1,2,1)"
    assert run(capsys, "verify", "associativity", "--quiver", "a2", "--trials", "3")[0] == 0


def test_table_cache(tmp_path, capsys, monkeypatch):
    cache = tmp_path / "d4.json"
    monkeypatch.setenv("QCC_TABLE_CACHE", str(cache))
    code, out, _ = run(capsys, "table", "--quiver", "d4", "--mode", "ktheory")
    assert code == 0 and cache.exists()
    assert "(1,1,2,1) [commutator]" in out
    code, out2, err = run(capsys, "class", "--quiver", "d4", "--gamma", "1,1,2,1", "--mode", "ktheory")
    assert code == 0 and "commutator (" not in err   # loaded, not rebuilt


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "roots", "--quiver", "missing")[0] == 2
    assert run(capsys, "kostant", "--quiver", "a2", "--gamma", "7,1")[0] == 2
    assert run(capsys, "kostant", "--quiver", "a2", "--gamma", "1,x")[0] == 2
    assert run(capsys, "class", "--quiver", "a2")[0] == 2
    assert run(capsys, "verify", "sum", "--quiver", "a2")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "verify", "dt", "--quiver", "a2", "--z1", "1,1;1,1", "--z2", "2,1;1,1",
               "--cutoff", "1,1")[0] == 2
    bad = tmp_path / "q.json"
    bad.write_text("{\n  \"vertices\": [1,\n")
    code, _, err = run(capsys, "roots", "--quiver", str(bad))
    assert code == 2 and "q.json:3:" in err


def test_verification_failure_exit_code(capsys, tmp_path, monkeypatch):
    from qcc import charclass as cc
    from qcc.cli import load_quiver
    from qcc.poly import LaurentPoly

    q = load_quiver("d4")
    t = cc.BasicClassTable(q)
    t.set((1, 1, 2, 1), "cohomology", LaurentPoly.one(), "sieve")
    path = tmp_path / "wrong.json"
    t.save(path)
    code, out, _ = run(capsys, "verify", "conjecture", "--quiver", "d4", "--beta", "1,1,2,1", "--table", str(path))
    assert code == 1
    assert out.startswith("FAIL conjecture (1,1,2,1)")


def test_output_is_reproducible():
    cmd = [sys.executable, "-m", "qcc.cli", "class", "--quiver", "d4", "--gamma", "1,1,2,1", "--mode", "ktheory"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a


def test_console_script():
    out = subprocess.run(["qcc", "roots", "--quiver", "e6"], capture_output=True, text=True)
    if out.returncode == 127:
        pytest.skip("console script not installed")
    assert out.stdout.splitlines()[0] == "36 positive roots of e6"
