import json
import shutil
import subprocess

import pytest

from polyreg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path, capsys):
    names = [
        "alternating-length",
        "letter-product",
        "even-length",
        "first-letter",
        "length-minus-one",
        "late-linear",
        "length-minus-one-transducer",
        "length-minus-one-transducer-alt",
        "square-difference",
    ]
    paths = {}
    for n in names:
        p = tmp_path / f"{n}.json"
        assert run(capsys, "example", n, "--out", str(p))[0] == 0
        paths[n] = str(p)
    return paths


def test_poly_classify_counterexample(capsys):
    code, out, _ = run(capsys, "poly", "classify", "Z*(X+Y)^2 + 2*(X-Y)^2")
    assert code == 0
    assert "class=PolyNNegMaximal verdict=yes" in out
    assert "class=PolyStrNNeg verdict=no witness={Z:0} monomial=-4*X*Y bound=2" in out
    assert "failing witness={Z:1} monomial=-2*X*Y" in out


def test_poly_classify_reads_files(tmp_path, capsys):
    p = tmp_path / "q.txt"
    p.write_text("C(X - 4, 1)*C(Y, 1)*C(Z, 1) + 8*C(Y, 2) + 8*C(Z, 2) + 4\n")
    code, out, _ = run(capsys, "poly", "classify", str(p))
    assert code == 0
    assert "class=IntegerValued verdict=yes" in out
    assert "class=StronglyNatural verdict=no witness={X:0} monomial=-4*Y*Z" in out


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "poly", "classify", "X+*")
    assert code == 1
    assert "position 2" in err


def test_series_classify(files, capsys):
    code, out, _ = run(capsys, "series", "classify", files["alternating-length"])
    assert code == 0
    assert "class=Commutative verdict=yes" in out
    assert "class=NPoly verdict=no" in out
    code, out, _ = run(capsys, "series", "classify", files["letter-product"])
    assert "class=NPoly verdict=yes" in out and "class=NSF verdict=yes" in out
    code, out, _ = run(capsys, "series", "classify", files["even-length"])
    assert "class=ZSF verdict=no" in out


def test_series_equiv_of_two_length_transducers(files, capsys):
    code, out, _ = run(capsys, "series", "equiv", files["length-minus-one-transducer"], files["length-minus-one-transducer-alt"])
    assert code == 0 and out.strip() == "class=Equivalent verdict=yes"
    code, out, _ = run(capsys, "series", "equiv", files["alternating-length"], files["even-length"])
    assert "verdict=no witness=ε left=0 right=1" in out


def test_series_eval(files, capsys):
    code, out, _ = run(capsys, "series", "eval", files["alternating-length"], "-", "aaa")
    assert out.splitlines() == ["word=ε value=0", "word=aaa value=-3"]


def test_decompose_non_commutative(files, capsys):
    code, out, _ = run(capsys, "series", "decompose", files["first-letter"])
    assert code == 1
    assert "not-commutative witness=ab/ba" in out


def test_decompose_inconclusive(files, capsys):
    code, out, _ = run(capsys, "series", "decompose", files["even-length"], "--max-omega", "1")
    assert code == 2
    assert "verdict=inconclusive" in out


def test_transducer_build(files, tmp_path, capsys):
    out_path = tmp_path / "t.json"
    code, out, _ = run(capsys, "transducer", "build", files["length-minus-one"], "--k", "1", "--out", str(out_path))
    assert code == 0
    assert "states=ε,a" in out and "class=Canonical verdict=yes" in out
    code, out, _ = run(capsys, "transducer", "build", files["late-linear"], "--k", "1")
    assert "class=CounterFree verdict=no counter=(ε,a)" in out
    assert "class=NSF verdict=yes" in out
    code, out, _ = run(capsys, "transducer", "verify", files["length-minus-one-transducer-alt"], files["length-minus-one"])
    assert "class=Canonical verdict=no" in out
    code, out, _ = run(capsys, "transducer", "counters", str(out_path))
    assert out.strip() == "class=CounterFree verdict=yes"


def test_transducer_cap(files, capsys):
    code, out, _ = run(capsys, "transducer", "build", files["square-difference"], "--k", "1", "--cap", "20")
    assert code == 2


def test_record_and_replay(files, tmp_path, capsys):
    rec = tmp_path / "run.json"
    code, _, _ = run(capsys, "series", "classify", files["square-difference"], "--record", str(rec))
    assert code == 0
    data = json.loads(rec.read_text())
    assert data["verdicts"]["NPoly"] == "no" and data["verdicts"]["ZSF"] == "yes"
    code, out, _ = run(capsys, "verify", str(rec))
    assert code == 0
    assert "replay verdicts=match certificates=match" in out


def test_verify_against_oracles(files, capsys):
    code, out, _ = run(capsys, "verify", files["letter-product"])
    assert code == 0
    assert "oracle=run-enumeration verdict=agree" in out


def test_missing_file(capsys):
    code, _, err = run(capsys, "series", "classify", "/nonexistent.json")
    assert code == 1 and "no such file" in err


@pytest.mark.skipif(shutil.which("polyreg") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["polyreg", "poly", "classify", "X^2 - 2*X + 2"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "class=StronglyNatural verdict=yes" in res.stdout
