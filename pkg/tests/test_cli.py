import io

import numpy as np
import pytest

from tangle_roof.cli import RunConfig, main
from tangle_roof.qstate import PureState, catalog_lookup, read_state, write_state


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def values(text):
    out = {}
    for line in text.splitlines():
        key, sep, val = line.partition(" = ")
        try:
            out[key.strip()] = float(val)
        except ValueError:
            pass
    return out


def test_invariants_catalog_keys():
    code, text = run("invariants", "phi3")
    assert code == 0
    v = values(text)
    assert v["F3"] == 1.0 and v["F1"] == 0.0 and v["F2"] == 0.0
    code, text = run("invariants", "ghz3")
    assert code == 0 and values(text)["tau3"] == 1.0
    code, text = run("invariants", "w4")
    assert all(values(text)[k] == 0.0 for k in ("F1", "F2", "F3", "G1", "G2", "G3"))


def test_invariants_from_file(tmp_path):
    path = tmp_path / "bell.qstate"
    write_state(PureState(2, np.array([1, 0, 0, 1]) / np.sqrt(2)), path)
    code, text = run("invariants", str(path))
    assert code == 0
    assert values(text)["C"] == 1.0
    assert values(text)["EOF"] == pytest.approx(np.log(2))
    code, text = run("invariants", str(path), "--log-base", "2")
    assert values(text)["EOF"] == pytest.approx(1.0)


def test_invariants_errors(tmp_path):
    bad = tmp_path / "bad.qstate"
    bad.write_text("QSTATE 2\n0 1 0\n")
    assert run("invariants", str(bad))[0] == 2
    assert run("invariants", "no-such-state")[0] == 2
    five = tmp_path / "five.qstate"
    write_state(PureState(1, np.array([1.0, 0.0])), five)
    assert run("invariants", str(five))[0] == 3


def test_twelve_significant_digits():
    _, text = run("invariants", "phi2")
    assert "F1 = 0.888888888889" in text


def test_sweep_writes_csvs(tmp_path):
    env = tmp_path / "f1.envelope.csv"
    plot = tmp_path / "plot.py"
    code, text = run("sweep", "F1-rho1", "--p-points", "101", "--phi-points", "36",
                     "--out", str(env), "--plot-script", str(plot))
    assert code == 0 and "PASS" in text and "max deviation" in text
    rows = env.read_text().splitlines()
    assert rows[0] == "p,min,hull,reference" and len(rows) == 102
    hull, ref = np.loadtxt(env, delimiter=",", skiprows=1, usecols=(2, 3)).T
    assert np.max(np.abs(hull - ref)) < 5e-3
    curve = tmp_path / "f1.curve.csv"
    assert len(curve.read_text().splitlines()) == 1 + 101 * 36
    assert "matplotlib" in plot.read_text()


def test_sweep_is_byte_deterministic(tmp_path):
    outs = []
    for name in ("a", "b"):
        path = tmp_path / f"{name}.envelope.csv"
        code, text = run("sweep", "tau3-ghzw", "--p-points", "81", "--phi-points", "24", "--out", str(path))
        outs.append((path.read_bytes(), (tmp_path / f"{name}.curve.csv").read_bytes(), text.replace(str(tmp_path / name), "")))
    assert outs[0] == outs[1]


def test_sweep_zero_case(tmp_path):
    path = tmp_path / "z.envelope.csv"
    code, text = run("sweep", "F3-rho2", "--p-points", "51", "--phi-points", "12", "--out", str(path), "--no-curve")
    assert code == 0
    assert np.max(np.loadtxt(path, delimiter=",", skiprows=1, usecols=2)) < 1e-9
    assert not (tmp_path / "z.curve.csv").exists()


def test_sweep_errors(tmp_path):
    assert run("sweep", "F9-rho1")[0] == 4
    assert run("sweep", "F1-rho1", "--p-points", "1")[0] == 2
    assert run("sweep", "F1-rho1", "--p-points", "21", "--phi-points", "8", "--tol", "1e-30",
               "--out", str(tmp_path / "x.csv"))[0] == 5


def test_verify_examples():
    code, text = run("verify", "F1-rho1", "0.8")
    assert code == 0 and text.rstrip().endswith("PASS")
    assert values(text)["average"] == pytest.approx(0.416, abs=1e-12)
    code, text = run("verify", "F1-rho2", "0.95")
    assert code == 0 and "4 terms" in text
    code, text = run("verify", "G3-rho3", "0.7")
    assert code == 0 and values(text)["average"] == pytest.approx(0.25, abs=1e-12)


def test_verify_errors():
    assert run("verify", "G3-rho3", "0.3", "--form", "ramp")[0] == 4
    assert run("verify", "G3-rho3", "1.5")[0] == 4
    assert run("verify", "nope", "0.5")[0] == 4
    assert run("verify", "G3-rho3", "abc")[0] == 2


def test_tables():
    code, text = run("tables")
    assert code == 0 and text.rstrip().endswith("PASS")
    assert "phi2  (0.888888888889, 0, 0)" in text
    assert text.count("rho") >= 18


def test_bloch():
    code, text = run("bloch", "0", "0", "-1")
    assert code == 0 and "inside" in text and "W4            weight 1\n" in text
    code, text = run("bloch", "0", "0", "1")
    assert code == 0 and "outside" in text
    code, text = run("bloch", "0", "0", "0")
    assert "inside" in text and values(text)["F1 average"] < 1e-10
    assert run("bloch", "1", "1", "0")[0] == 2


def test_catalog(tmp_path):
    code, text = run("catalog")
    assert code == 0 and "phi1" in text and "w4" in text
    path = tmp_path / "phi1.qstate"
    assert run("catalog", "phi1", "--out", str(path))[0] == 0
    assert np.allclose(read_state(path).amplitudes, catalog_lookup("phi1").state.amplitudes)
    assert run("catalog", "zzz")[0] == 2


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("sweep", p_points=1)
    with pytest.raises(ValueError):
        RunConfig("sweep", tol=0.0)


def test_usage_error_exit_code():
    assert run()[0] == 2
    assert run("frobnicate")[0] == 2
