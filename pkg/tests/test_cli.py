import json
import subprocess
import sys

import mpmath as mp
import pytest

from klab.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def run_json(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 0, err
    return json.loads(out)


def test_qexp_examples(capsys):
    assert run_json(["qexp", "delta", "--terms", "3"], capsys)["coeffs"] == ["0", "1", "-24", "252"]
    assert run_json(["qexp", "g12", "--terms", "1"], capsys)["coeffs"] == ["691/65520", "1"]
    assert run_json(["qexp", "delta2", "--terms", "2"], capsys)["coeffs"] == ["0", "0", "1"]
    assert run_json(["qexp", "delta-g12", "--terms", "1"], capsys)["coeffs"] == ["0", "691/65520"]
    assert run(["qexp", "delta", "--terms", "0"], capsys)[0] == 2


def test_qexp_unknown_form(capsys):
    code, out, err = run(["qexp", "eta", "--terms", "3"], capsys)
    assert code == 2 and out == "" and "unknown form" in err


def test_qexp_csv(capsys):
    code, out, _ = run(["--format", "csv", "qexp", "delta", "--terms", "2"], capsys)
    assert code == 0
    assert out == "n,coeff\n0,0\n1,1\n2,-24\n"
    code2, out2, _ = run(["qexp", "delta", "--terms", "2", "--format", "csv"], capsys)
    assert (code2, out2) == (code, out)


def test_arith(capsys):
    assert run_json(["arith", "sigma", "11", "2"], capsys)["value"] == "2049"
    assert run_json(["arith", "mobius", "30"], capsys)["value"] == "-1"
    assert run_json(["arith", "harmonic", "4"], capsys)["value"] == "25/12"


def test_specfun(capsys):
    v = run_json(["specfun", "e1", "1"], capsys)["value"]
    assert abs(mp.mpf(v) - mp.e1(1)) < mp.mpf("1e-16")
    v = run_json(["specfun", "kbessel", "1.5", "0.5"], capsys)["value"]
    assert abs(mp.mpf(v) - mp.besselk(1, mp.pi)) < mp.mpf("1e-17")
    w = run_json(["specfun", "wstar", "1", "--y", "1"], capsys)["value"]
    assert set(w) == {"re", "im"}


def test_k1_coeffs(capsys):
    obj = run_json(["k1", "coeffs", "--group", "sl2z", "--max-n", "2"], capsys)
    assert abs(mp.mpf(obj["k"]["1"]) - 6 / mp.pi) < mp.mpf("1e-16")
    assert abs(mp.mpf(obj["k"]["2"]) - 9 / mp.pi) < mp.mpf("1e-16")
    assert obj["gamma0_constant"] is None
    obj = run_json(["k1", "coeffs", "--group", "gamma0", "--level", "6", "--max-n", "6"], capsys)
    assert list(obj["k"]) == ["1", "2", "3", "4", "5", "6"]
    assert obj["gamma0_constant"] is not None
    code, _, err = run(["k1", "coeffs", "--group", "gamma0", "--level", "12", "--max-n", "3"], capsys)
    assert code == 2 and "square-free" in err
    code, _, _ = run(["k1", "coeffs", "--group", "gamma0", "--max-n", "3"], capsys)
    assert code == 2


def test_k1_eval_matches_closed_form(capsys):
    obj = run_json(["k1", "eval", "--group", "sl2z", "--x", "0", "--y", "1"], capsys)
    mp.mp.dps = 40
    q = mp.exp(-2 * mp.pi)
    delta = q * mp.qp(q) ** 24
    want = -mp.log(delta**2) / (4 * mp.pi) + 3 / mp.pi * (mp.euler - mp.log(4 * mp.pi))
    assert abs(mp.mpf(obj["value"]) - want) < mp.mpf("1e-15")
    assert mp.mpf(obj["error_bound"]) <= mp.mpf("1e-10")


def test_k1_eval_unmet_tolerance(capsys):
    code, out, err = run(["--tol", "1e-30", "k1", "eval", "--y", "0.1", "--max-n", "5"], capsys)
    assert code == 3 and out == "" and "N_max" in err


def test_lseries(capsys):
    obj = run_json(["lseries", "plusplus", "--form", "delta2", "--m", "1", "--s", "4"], capsys)
    assert list(obj)[-2:] == ["value", "error_bound"]
    code, _, err = run(["lseries", "minus", "--form", "delta", "--m", "1", "--s", "3"], capsys)
    assert code == 2 and "s > 3" in err


def test_holproj_dm(capsys):
    obj = run_json(["holproj", "dm", "--form", "delta2", "--m", "1", "--tol", "1e-10"], capsys)
    assert mp.mpf(obj["tail_error"]) <= mp.mpf("1e-10") * abs(mp.mpf(obj["d"]))


def test_holproj_decompose(capsys):
    obj = run_json(["holproj", "decompose", "--form", "delta2"], capsys)
    assert abs(mp.mpf(obj["c_delta2"]) - mp.mpf("-0.852857")) < mp.mpf("5e-7")
    assert abs(mp.mpf(obj["c_deltaG12"]) - mp.mpf("0.0000214526")) < mp.mpf("5e-11")
    obj = run_json(["holproj", "decompose", "--form", "delta-g12"], capsys)
    assert abs(mp.mpf(obj["c_delta2"]) - mp.mpf("0.220305")) < mp.mpf("5e-7")
    assert abs(mp.mpf(obj["c_deltaG12"]) - mp.mpf("-0.591762")) < mp.mpf("5e-7")
    code, _, _ = run(["holproj", "decompose", "--form", "delta"], capsys)
    assert code == 2


def test_holproj_project_csv(capsys):
    code, out, _ = run(["--format", "csv", "holproj", "project", "--form", "delta2", "--m-max", "3"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "m,d,tail_error" and len(out.splitlines()) == 4


def test_csv_rejected_for_scalars(capsys):
    code, out, err = run(["--format", "csv", "arith", "mobius", "6"], capsys)
    assert code == 2 and out == ""


def test_plain_format(capsys):
    code, out, _ = run(["--format", "plain", "arith", "harmonic", "3"], capsys)
    assert code == 0 and "value: 11/6" in out


def test_env_fallbacks(capsys, monkeypatch):
    monkeypatch.setenv("KLAB_PRECISION", "high")
    v = run_json(["specfun", "e1", "1"], capsys)["value"]
    monkeypatch.setenv("KLAB_PRECISION", "double")
    w = run_json(["--precision", "high", "specfun", "e1", "1"], capsys)["value"]
    assert v == w
    monkeypatch.setenv("KLAB_TOL", "1e-30")
    code, _, _ = run(["k1", "eval", "--y", "0.1", "--max-n", "5"], capsys)
    assert code == 3
    code, _, _ = run(["--tol", "1e-3", "k1", "eval", "--y", "0.1", "--max-n", "40"], capsys)
    assert code == 0
    monkeypatch.setenv("KLAB_PRECISION", "quad")
    code, _, err = run(["arith", "mobius", "6"], capsys)
    assert code == 2


def test_bad_tolerance(capsys):
    assert run(["--tol", "-1", "arith", "mobius", "6"], capsys)[0] == 2
    assert run(["--tol", "abc", "arith", "mobius", "6"], capsys)[0] == 2


def test_verify_specfun(capsys):
    code, out, err = run(["verify", "specfun"], capsys)
    obj = json.loads(out)
    assert code == 0 and obj["failed"] == 0
    assert any(c["name"].startswith("dK/ds at s=1") for c in obj["checks"])
    assert "PASS" in err


def test_verify_unknown_suite(capsys):
    assert run(["verify", "everything"], capsys)[0] == 2


def test_verify_failure_exit_code(capsys, monkeypatch):
    from klab import verify

    monkeypatch.setitem(verify.SUITES, "arith", lambda: [verify.Check("forced", False, "x")])
    code, out, _ = run(["verify", "arith"], capsys)
    assert code == 1 and json.loads(out)["failed"] == 1


def test_no_command(capsys):
    assert run([], capsys)[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["holproj", "decompose", "--form", "delta2"],
        ["k1", "coeffs", "--group", "gamma0", "--level", "6", "--max-n", "6"],
    ],
)
def test_byte_identical_subprocess(argv):
    cmd = [sys.executable, "-m", "klab", *argv]
    a = subprocess.run(cmd, capture_output=True, check=True)
    b = subprocess.run(cmd, capture_output=True, check=True)
    assert a.stdout == b.stdout and a.stdout


def test_subprocess_exit_codes():
    r = subprocess.run([sys.executable, "-m", "klab", "qexp", "nope", "--terms", "2"], capture_output=True)
    assert r.returncode == 2 and r.stdout == b""
