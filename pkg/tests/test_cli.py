import json
import subprocess
import sys

import pytest

from monoidk import cli
from monoidk.abgroup import FgAbelianGroup

from conftest import DATA


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_validate_good_monoid(capsys):
    code, doc, err = run(capsys, "validate", "--monoid", DATA / "f1.json")
    assert code == 0 and doc["valid"] and doc["size"] == 2
    assert "wall time" in err


def test_validate_names_the_failing_triple(capsys):
    code, doc, _ = run(capsys, "validate", "--monoid", DATA / "bad_assoc.json")
    assert code == 1 and not doc["ok"]
    assert doc["violations"][0] == {"axiom": "associativity", "witness": ["x", "x", "x"]}


def test_parse_error_has_position(capsys):
    code, doc, err = run(capsys, "validate", "--monoid", DATA / "broken.json")
    assert code == 2 and doc is None
    assert "line 4, column 2" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["k1", "--bogus"],
        ["nope"],
        ["k1"],
        ["k1", "--monoid", "/no/such/file.json"],
        ["k2-ab", "--group", "free=x"],
        ["m-nf", "--d", "4", "--word", "Y7"],
        ["units", "--monoid", str(DATA / "bad_assoc.json")],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    assert cli.main(argv) == 2


def test_group_spec_normalization(capsys):
    code, doc, _ = run(capsys, "validate", "--group", "free=0;torsion=4,6")
    assert code == 0 and doc["group"] == {"free": 0, "torsion": [2, 12]}


def test_k2_ab_example(capsys):
    code, doc, _ = run(capsys, "k2-ab", "--group", "free=0;torsion=2")
    assert code == 0 and doc["group"] == {"free": 0, "torsion": [2, 2]}
    assert doc["provenance"]


def test_k1_and_check_k1(capsys):
    _, doc, _ = run(capsys, "k1", "--monoid", DATA / "z3.json")
    assert doc["group"] == {"free": 0, "torsion": [6]}
    code, doc, _ = run(capsys, "check-k1", "--monoid", DATA / "z2.json", "--n", "3")
    assert code == 0 and doc["ok"]


def test_pi2s(capsys):
    _, doc, _ = run(capsys, "pi2s", "--gab", "free=0;torsion=2", "--h2", "free=0;torsion=2")
    assert doc["group"] == {"free": 0, "torsion": [2, 2, 2]}


def test_check_homotopy(capsys):
    code, doc, _ = run(capsys, "check-homotopy", "--monoid", DATA / "sigma3.json")
    assert code == 0 and doc["ok"]


def test_e_membership(capsys):
    code, doc, _ = run(capsys, "e-membership", "--monoid", DATA / "z3.json", "--matrix", DATA / "swap_z3.json")
    # a 3-cycle with diagonal (g, g, g): even, and g^3 = e
    assert code == 0 and doc["in_elementary"]
    assert doc["permutation_even"] and doc["diagonal_product"] == "e"


def test_q_pi1(capsys):
    code, doc, _ = run(capsys, "q-pi1", "--monoid", DATA / "f1.json", "--rank-bound", "2")
    assert code == 0 and doc["ok"]


def test_m_nf_examples(capsys):
    _, doc, _ = run(capsys, "m-nf", "--d", "6", "--word", "X3 X2 a X2^-1")
    assert doc["standard_form"] == "a X2^0 X3^1"
    _, doc, _ = run(capsys, "m-nf", "--d", "5", "--word", "X2 X3 X2^-1 X3^-1")
    assert doc["identity"] and doc["standard_form"] == "1"


@pytest.mark.parametrize("d,code", [(0, 0), (3, 0), (4, 0), (6, 1)])
def test_m_check_exit_codes(capsys, d, code):
    assert cli.main(["m-check", "--d", str(d)]) == code
    capsys.readouterr()


def test_verify_all_on_f1(capsys):
    code, doc, _ = run(capsys, "verify", "--suite", "all", "--monoid", DATA / "f1.json")
    assert code == 0 and doc["failed"] == [] and doc["seed"] == 0


def test_output_is_byte_identical(capsys):
    argv = ["verify", "--suite", "aset", "--monoid", str(DATA / "z2.json"), "--seed", "7"]
    cli.main(argv)
    first = capsys.readouterr().out
    cli.main(argv)
    assert capsys.readouterr().out == first
    assert json.dumps(json.loads(first), sort_keys=True, indent=2) + "\n" == first


def test_inline_json_input(capsys):
    text = (DATA / "f1.json").read_text()
    code, doc, _ = run(capsys, "units", "--monoid", text)
    assert code == 0 and doc["order"] == 1


def test_parse_inputs():
    got = cli.parse_inputs(str(DATA / "f1.json"), str(DATA / "f1_pointed.json"), "free=1;torsion=2")
    assert got["monoid"].size == 2
    assert got["aset"].size == 3
    assert got["group"] == FgAbelianGroup(1, (2,))
    with pytest.raises(cli.InputError):
        cli.parse_inputs(str(DATA / "bad_assoc.json"))


def test_size_guard_env(capsys, monkeypatch):
    monkeypatch.setenv("MONOIDK_SIZE_GUARD", "10")
    code = cli.main(["check-k1", "--monoid", str(DATA / "z3.json"), "--n", "3"])
    capsys.readouterr()
    assert code == 2


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "monoidk.cli", "k2-ab", "--group", "free=0;torsion=3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["group"] == {"free": 0, "torsion": [2]}
