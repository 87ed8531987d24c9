import io
import json
import subprocess
import sys

import pytest

from queerkit import classical as cl
from queerkit.cli import run
from queerkit.freealg import element_from_json, element_to_json, parse_element
from queerkit.tensor_rep import SparseOperator, phi_r


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_dim():
    assert call("dim", "--n", "2", "--r", "2") == (0, "dim Q(2,2) = 32; dim Q0(2,2) = 8\n")
    code, text = call("dim", "--n", "3", "--r", "2", "--format", "json")
    assert json.loads(text) == {"n": 3, "r": 2, "dim": cl.dim_schur(3, 2), "dim_zero": cl.dim_schur_zero(3, 2)}


def test_nf_inline():
    assert call("nf", "--engine", "classical", "e1*f1") == (0, "f1*e1 + h1 - h2\n")


def test_nf_json_round_trip():
    x = parse_element("E1*F1")
    code, text = call("nf", "--format", "json", json.dumps(element_to_json(x)))
    assert code == 0
    y = element_from_json(json.loads(text))
    code2, text2 = call("nf", "E1*F1")
    assert str(y) == text2.strip()


def test_nf_schur_quotient():
    assert call("nf", "--r", "2", "1_(2,0)*Kbr(1;0;1)") == (0, "(q + q^-1)*1_(2,0)\n")


def test_nf_stdin(monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("e1*f1\n"))
    assert call("nf", "--engine", "classical") == (0, "f1*e1 + h1 - h2\n")


def test_basis():
    code, text = call("basis", "--n", "2", "--r", "2")
    lines = text.splitlines()
    assert code == 0 and lines[-1] == "32 basis elements"
    assert len(lines) == 33 and all(line.startswith("A0=") for line in lines[:-1])
    code, text = call("basis", "--n", "2", "--r", "2", "--format", "json", "--engine", "X")
    assert len(json.loads(text)) == 32


def test_rep_json():
    code, text = call("rep", "--r", "2", "--n", "2", "--format", "json", "hb1")
    assert code == 0
    assert SparseOperator.from_json(text) == phi_r(parse_element("hb1"), 2, 2)


def test_commutant():
    assert call("commutant", "--n", "2", "--r", "2") == (0, "supercommutant dim (2,2) = 32\n")
    code, text = call("commutant", "--n", "2", "--r", "2", "--engine", "X", "--q0", "5/3", "--format", "json")
    assert json.loads(text)["supercommutant_dim"] == 32


def test_corpus_subset():
    code, text = call("corpus", "--only", "q-ppoo")
    assert code == 0
    assert "0 failed" in text


def test_corpus_seed_is_deterministic():
    args = ("corpus", "--only", "q-div", "--n-max", "3", "--exp-max", "2", "--format", "json")
    plain = call(*args)
    seeded = call(*args, "--seed", "7")
    assert seeded == call(*args, "--seed", "7")
    assert json.loads(seeded[1]) == json.loads(plain[1])


def test_covercheck():
    code, text = call("covercheck")
    assert code == 0 and "MISSING" not in text


@pytest.mark.parametrize(
    "argv",
    [
        ("dim", "--n", "0", "--r", "1"),
        ("dim", "--n", "2", "--r", "-1"),
        ("rep", "--r", "1", "--q0", "0", "K1"),
        ("dim", "--n", "2"),
        ("nf", "--engine", "Y", "e1"),
        ("nf", "--engine", "L", "--r", "2", "E1"),
        ("nf", "1_(2,0)*K1"),
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert call(*argv)[0] == 2


@pytest.mark.parametrize("argv", [("nf", "e1 *"), ("nf", "zz3"), ("rep", "--r", "1", "--n", "1", "e1")])
def test_computation_errors_exit_1(argv, capsys):
    assert call(*argv)[0] == 1
    assert "queerkit" in capsys.readouterr().err


def test_fuel_override(monkeypatch, capsys):
    monkeypatch.setenv("QUEERKIT_FUEL", "1")
    assert call("nf", "--engine", "classical", "e1*f1*e1*f1")[0] == 1
    assert "FuelExhausted" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "queerkit", "dim", "--n", "1", "--r", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "dim Q(1,1) = 2; dim Q0(1,1) = 2\n"
