import io
import json
import subprocess
import sys

import pytest

from conftest import corpus_text
from lieroid.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def model_file(tmp_path):
    def write(text, name="m.model"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_check_bundled_and_file(model_file):
    code, out = run("check", "heisenberg")
    assert code == 0 and out.count("PASS") == len(out.splitlines())
    path = model_file(corpus_text("fault_bracket"))
    code, out = run("check", path)
    assert code == 1 and out.startswith("FAIL")


def test_check_json():
    code, out = run("check", "plane_lcs", "--json")
    rows = [json.loads(l) for l in out.splitlines()]
    assert code == 0 and {r["verdict"] for r in rows} == {"PASS"}
    assert "seconds" not in rows[0]
    _, out = run("check", "plane_lcs", "--json", "--timing")
    assert "seconds" in json.loads(out.splitlines()[0])


def test_parse_and_usage_errors(model_file, capsys):
    assert run("check", model_file("tensor q : form(1) on H = e^1\n"))[0] == 2
    assert "line 1" in capsys.readouterr().err
    assert run("check", "/nonexistent/file.model")[0] == 2
    assert run("bogus")[0] == 2
    assert run("fuzz", "--rank", "9", "--count", "1")[0] == 2
    assert run("derive", "heisenberg", "gamma(H)")[0] == 2
    assert run("derive", "heisenberg", "no parens")[0] == 2
    assert run("derive", "heisenberg", "lie(Z)")[0] == 2


def test_classify():
    assert run("classify", "heisenberg", "H") == (0, "Lie\n")
    code, out = run("classify", "lie3_family", "affr", "--json")
    assert json.loads(out)["kind"] == "Lie"


def test_derive():
    code, out = run("derive", "heisenberg", "reeb(H, deta, eta)")
    assert (code, out) == (0, "reeb = (1)*e3\n")
    code, out = run("derive", "heisenberg", "lambda(H, pi, xi, g)")
    assert out == "lambda = (1)*e^3\n"
    code, out = run("derive", "heisenberg", "gamma(H, g)")
    assert "nabla_e1 e2 = (1/2)*e3" in out.splitlines()
    code, out = run("derive", "heisenberg", "jacobi(H, pi, xi)")
    assert out == "defect = 0\n"
    code, out = run("derive", "heisenberg", "compatible(H, pi, xi, g)", "--json")
    assert code == 0 and json.loads(out)
    code, out = run("derive", "fault_eta_xi", "acm(H, phi, xi, eta, g)")
    assert code == 1 and out.startswith("HYPOTHESIS_FAILED")


def test_fuzz_and_sample():
    code, out = run("fuzz", "--seed", "5", "--kind", "lie-algebra", "--count", "3")
    assert code == 0 and len(out.splitlines()) == 3
    code, out = run("fuzz", "--seed", "5", "--kind", "tangent-like", "--count", "2", "--points", "3", "--json")
    assert code == 0 and all("seed" in json.loads(l) for l in out.splitlines())
    code, out = run("sample", "plane_kaehler", "--points", "5")
    assert code == 0 and "PASS" in out


def test_checks_listing():
    code, out = run("checks")
    assert code == 0 and any(l.startswith("lck(") for l in out.splitlines())


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "lieroid.cli", "check", "fault_theta"],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and proc.stdout
