import io
import subprocess
import sys

import pytest

from qletf.cli import NEGATIVE, OK, USAGE, main
from qletf.proofs import dump_proof, worked_fixtures
from qletf.parsing import render

from test_algebra import EXPECTED_CONJ, ORDER


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_table_csv():
    code, text = run("table", "--op", "conj", "--format", "csv")
    lines = text.splitlines()
    assert code == OK and lines[0] == "a,b,value" and len(lines) == 37
    expected = [
        f"{ORDER[i]},{ORDER[j]},{v}"
        for i, row in enumerate(EXPECTED_CONJ) for j, v in enumerate(row.split())
    ]
    assert lines[1:] == expected


def test_table_text_has_all_ops():
    code, text = run("table")
    assert code == OK
    for op in ("conj", "disj", "neg", "circ"):
        assert op in text.splitlines()


def test_entails_countermodel():
    assert run("entails", "-p", "p", "-p", "~p", "-c", "q") == (NEGATIVE, "p=b q=n\n")
    assert run("entails", "-p", "@p", "-p", "p", "-p", "~p | q", "-c", "q") == (OK, "valid\n")


def test_eval_and_equiv():
    assert run("eval", "-f", "@@p", "-a", "p=n") == (OK, "T\n")
    assert run("equiv", "~~p", "p") == (OK, "equivalent\n")
    assert run("equiv", "p", "@p") == (NEGATIVE, "p=T0\n")


def test_nf_and_prenex():
    code, text = run("nf", "--cnf", "~(p | q)", "--verify")
    assert code == OK and text == "~p & ~q\nverified\n"
    code, text = run("prenex", "~forall x. P(x)", "--verify")
    assert code == OK and text.startswith("exists x1. ~P(x1)\n")


def test_model_check(tmp_path):
    model = tmp_path / "m.txt"
    model.write_text("domain: a b\nconst c = a\npred P/1 { a: T; b: b }\n")
    assert run("model-check", "-m", str(model), "-f", "forall x. P(x)") == (OK, "b designated\n")
    assert run("model-check", "-m", str(model), "-f", "@forall x. P(x)") == (NEGATIVE, "F not designated\n")


def test_fo_entails():
    code, text = run("fo-entails", "-p", "exists x. P(x)", "-c", "forall x. P(x)")
    assert code == NEGATIVE and text.startswith("domain: e1 e2")
    code, text = run("fo-entails", "-p", "forall x. P(x)", "-c", "P(c)", "--max-domain", "2")
    assert code == OK and "valid up to domain size 2" in text


def test_proof_check(tmp_path):
    fx = worked_fixtures()[0]
    proof = tmp_path / "p.proof"
    proof.write_text(dump_proof(fx.tree))
    prem = tmp_path / "premises.txt"
    prem.write_text("\n".join(render(p) for p in fx.premises) + "\n")
    code, text = run("proof-check", str(proof), "--premises", str(prem), "--system", fx.system)
    assert code == OK and text.startswith("ok:")
    code, text = run("proof-check", str(proof), "--goal", "p")
    assert code == NEGATIVE and "wrong conclusion" in text


def test_signature_file(tmp_path):
    sig = tmp_path / "sig.txt"
    sig.write_text("pred P/1\nconst c\n")
    assert run("entails", "--sig", str(sig), "-p", "P(c)", "-c", "P(c)")[0] == OK
    assert run("entails", "--sig", str(sig), "-p", "P(d)", "-c", "P(c)")[0] == USAGE


@pytest.mark.parametrize("argv", [
    ["eval", "-f", "p &", "-a", "p=T"],
    ["eval", "-f", "p", "-a", "p=X"],
    ["eval", "-f", "q", "-a", "p=T"],
    ["proof-check", "/nonexistent/file"],
    ["bogus"],
    ["entails", "-c", "p1 & p2 & p3", "--atom-bound", "2"],
])
def test_usage_errors(argv):
    assert run(*argv)[0] == USAGE


def test_deterministic_output():
    for argv in (["table"], ["entails", "-p", "p | q", "-c", "p & q"], ["nf", "@(p & q)"]):
        assert run(*argv) == run(*argv)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qletf", "entails", "-p", "p", "-p", "~p", "-c", "q"],
        capture_output=True, text=True,
    )
    assert proc.returncode == NEGATIVE and proc.stdout == "p=b q=n\n"
