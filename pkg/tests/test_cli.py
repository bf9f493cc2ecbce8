import json
import shutil
import subprocess
import sys

import pytest

from svwhit.cli import main
from svwhit.modules import ModuleVector, basis_vector
from svwhit.parse import parse_expression
from svwhit.pbw import UEAElement

L_MINUS_1_W = json.dumps(basis_vector(lam=(1,)).to_json())


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_normal_form(capsys):
    code, out, _ = run(capsys, "normal-form", "L1*L-1")
    assert code == 0 and out.strip() == "-2*L0 + L-1*L1"
    code, out, _ = run(capsys, "normal-form", "3/2*Y-1", "--format", "json")
    assert json.loads(out) == [{"word": "Y-1", "coeff": "3/2"}]
    code, out, _ = run(capsys, "normal-form", "M0^2")
    assert out.strip() == "M0^2"


def test_round_trip_through_text(capsys):
    u = parse_expression("L2*Y-3*M1 + 5/3*L-1*L1*M0")
    code, out, _ = run(capsys, "normal-form", str(u))
    assert parse_expression(out.strip()) == u
    code, out, _ = run(capsys, "normal-form", str(u), "--format", "json")
    assert UEAElement.from_json(json.loads(out)) == u


def test_bracket(capsys):
    code, out, _ = run(capsys, "bracket", "L1", "L-1")
    assert code == 0 and out.strip() == "-2*L0"
    code, out, _ = run(capsys, "bracket", "Y0", "Y-2")
    assert out.strip() == "-2*M-1"


def test_act_and_dot_act(capsys, tmp_path):
    code, out, _ = run(capsys, "act", "M1", "--on", L_MINUS_1_W, "--m1", "1")
    assert code == 0 and out.strip() == "-M0*w + L-1*w"
    path = tmp_path / "v.json"
    path.write_text(L_MINUS_1_W)
    code, out, _ = run(capsys, "dot-act", "M1", "--on", str(path), "--m1", "1", "--format", "json")
    assert ModuleVector.from_json(json.loads(out)) == -basis_vector(k=1)
    code, out, _ = run(capsys, "act", "L0", "--on", "w", "--module", "verma", "--xi", "1", "--zeta", "2/3")
    assert out.strip() == "2/3*w"
    code, out, _ = run(capsys, "act", "M0", "--on", "w", "--module", "quotient", "--xi", "-4")
    assert out.strip() == "-4*w"


def test_solvers(capsys):
    code, out, _ = run(capsys, "whittaker-vectors", "--m1", "1", "--deg", "2", "--l0", "2", "--m0", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["dimension"] == 3
    assert data["truncation"] == {"D": "2", "D0": 2, "K": 2}
    assert data["module"]["type"] == "universal"
    code, out, _ = run(capsys, "singular-vectors", "--module", "verma", "--xi", "1", "--deg", "3")
    assert "dimension: 1" in out
    code, out, _ = run(capsys, "whittaker-vectors", "--deg", "3/2")
    assert code == 0 and "D=3/2" in out


def test_nilpotency(capsys):
    v = json.dumps(basis_vector(lam=(1, 1)).to_json())
    code, out, _ = run(capsys, "nilpotency", "L1", "--on", v, "--m1", "1")
    assert code == 0 and out.strip() == "3"
    code, out, _ = run(capsys, "nilpotency", "L1", "--on", v, "--m1", "1", "--bound", "2")
    assert code == 1 and "bound exceeded" in out


def test_closure(capsys, tmp_path):
    gens = tmp_path / "gens.json"
    gens.write_text(json.dumps([basis_vector(lam=(2,)).to_json()]))
    code, out, _ = run(
        capsys, "closure", "--gens", str(gens), "--module", "quotient", "--deg", "3", "--l0", "3", "--bound", "3", "--format", "json"
    )
    data = json.loads(out)
    assert code == 0 and data["dimension"] > 0
    for v in data["basis"]:
        assert all(t["index"] != {"k": 0, "mu": [], "nu": [], "lambda": []} for t in v)


@pytest.mark.parametrize(
    "argv",
    [
        ["normal-form", "L1 +"],
        ["normal-form", "L1 $"],
        ["whittaker-vectors", "--deg", "1/3"],
        ["whittaker-vectors"],
        ["act", "L1", "--on", "[not json"],
        ["act", "L1", "--on", '[{"index": {"word": "L-1"}, "coeff": "1"}]'],
        ["act", "L1", "--on", "w", "--module", "verma", "--m1", "1"],
        ["act", "L1", "--on", json.dumps(basis_vector(k=1).to_json()), "--module", "quotient"],
        ["dot-act", "L0", "--on", "w"],
        ["closure", "--gens", json.dumps(basis_vector(lam=(1,)).to_json()), "--deg", "1"],
        ["verify", "--only", "no-such-check"],
        ["frobnicate"],
        ["normal-form", "L1", "--eta1", "1/0"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_verify_subset_and_small_window(capsys):
    code, out, _ = run(capsys, "verify", "--deg", "0", "--m0", "0", "--only", "nonsingular-universal", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert data["checks"][0]["detail"] == "9 psi, dim 1 each"


def test_verify_negative_control(capsys):
    code, out, _ = run(capsys, "verify", "--only", "lie-axioms", "--corrupt-relations")
    assert code == 1 and out.startswith("FAIL lie-axioms")
    # the corruption does not leak into later runs
    code, out, _ = run(capsys, "verify", "--only", "lie-axioms", "--timings")
    assert code == 0 and out.startswith("PASS lie-axioms (")


def test_outputs_are_deterministic(capsys):
    argv = ["verify", "--only", "z-elements", "--only", "closed-form-product", "--seed", "5"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


@pytest.mark.skipif(shutil.which("sv") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["sv", "normal-form", "M1*L-1^2"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "M1*L-1^2"
    res = subprocess.run([sys.executable, "-m", "svwhit.cli", "bracket", "L2", "M-1"], capture_output=True, text=True)
    assert res.stdout.strip() == "-M1"
