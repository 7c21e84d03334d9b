import json
import subprocess
import sys

import numpy as np
import pytest

from eulerheat import acceptance, cli, tables

BTRAVEL = ["eval", "--family", "b-travel", "--a", "1", "--b", "1", "--c1", "1", "--c2", "1"]


def _run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_btravel_csv(capsys):
    code, out, _ = _run(capsys, BTRAVEL + ["--x-min", "-20", "--x-max", "20", "--nx", "401"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "x,t,rho,v,T"
    assert all(ln.endswith(",") for ln in lines[1:])  # absent T is an empty field
    tab = tables.read_csv(out)
    assert tab["T"] is None
    assert np.all(np.diff(tab["rho"]) >= 0)
    assert tab["rho"][0] == pytest.approx(1.0, abs=1e-6)


def test_eval_deterministic(tmp_path, capsys):
    argv = ["eval", "--family", "c-gauss", "--gamma", "1", "--lam", "1", "--c1", "1", "--c2", "0", "--times", "1", "2"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert cli.main(argv + ["-o", str(a)]) == 0
    assert cli.main(argv + ["-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    tab = tables.read_csv(a.read_text())
    assert sorted(set(tab["t"])) == [1.0, 2.0]


def test_eval_json(capsys):
    code, out, _ = _run(capsys, BTRAVEL + ["--nx", "3", "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and doc["columns"] == ["x", "t", "rho", "v", "T"] and doc["data"]["T"] is None
    assert doc["meta"]["family"] == "b-travel"


def test_constraints_vdw(capsys):
    code, out, _ = _run(capsys, ["constraints", "--eos", "vdw", "--a", "1", "--b", "1", "--c", "1"])
    assert code == 0 and out.splitlines()[0] == "infeasible"


def test_constraints_json(capsys):
    code, out, _ = _run(capsys, ["constraints", "--eos", "virial", "--A", "1", "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and doc["feasible"] and doc["exponents"]["alpha"] == "1"


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["eval"],
        ["eval", "--family", "b-travel", "--lam", "1"],
        ["eval", "--family", "nope"],
        ["eval", "--family", "a-cubic", "--a", "-1"],
        ["constraints", "--eos", "vdw", "--n", "3"],
        ["collapse", "--family", "c-travel"],
        ["simulate", "--family", "a-cubic", "--cfl", "2"],
        ["--config", "/nonexistent.cfg", "eval"],
    ],
)
def test_config_errors_exit_2(capsys, argv):
    code, _, err = _run(capsys, argv)
    assert code == 2, err


def test_numerical_failure_exit_3(capsys):
    # the virial temperature vanishes at eta = pi / 2
    argv = ["eval", "--family", "d-virial", "--c1", "0", "--x-min", "1.5", "--x-max", "1.6", "--nx", "11"]
    code, _, err = _run(capsys, argv)
    assert code == 3 and "PoleError" in err


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "command = eval\n"
        "[family]\nname = b-travel\na = 1\nb = 1\nc1 = 1\nc2 = 1\n"
        "# grid\ngrid.x-min = -1\ngrid.x-max = 1\ngrid.nx = 5\n"
    )
    code, out, _ = _run(capsys, ["--config", str(cfg)])
    assert code == 0 and len(out.splitlines()) == 6
    code, out2, _ = _run(capsys, ["--config", str(cfg), "eval", "--nx", "3"])
    assert code == 0 and len(out2.splitlines()) == 4
    code_flags, out3, _ = _run(capsys, BTRAVEL + ["--x-min", "-1", "--x-max", "1", "--nx", "5"])
    assert out3 == out


def test_config_file_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("[family]\nname = b-travel\nbogus = 3\n")
    code, _, err = _run(capsys, ["--config", str(cfg), "eval"])
    assert code == 2 and "bogus" in err


def test_simulate_writes_snapshots(tmp_path, capsys):
    out = tmp_path / "sim.csv"
    argv = ["simulate", "--family", "a-cubic", "--c1", "0.5", "--c3", "0.5", "--lam", "0.1",
            "--nx", "20", "--t-end", "1.02", "--outputs", "1.01", "-o", str(out)]
    assert cli.main(argv) == 0
    tab = tables.read_csv(out.read_text())
    assert sorted(set(tab["t"])) == [1.0, 1.01, 1.02]


def test_collapse_json(capsys):
    code, out, _ = _run(capsys, ["collapse", "--family", "d-virial", "--times", "1", "2", "4"])
    assert code == 0 and json.loads(out)["max_pairwise_deviation"] < 1e-10


def test_erratum_file(tmp_path, capsys):
    path = tmp_path / "erratum.json"
    code, _, _ = _run(capsys, ["erratum", "-o", str(path)])
    doc = json.loads(path.read_text())
    assert code == 0 and len(doc["entries"]) == 8


def test_verify_suite_exit_codes(monkeypatch, capsys):
    code, out, _ = _run(capsys, ["verify", "--suite", "constraints"])
    assert code == 0 and "[PASS] criterion 10" in out
    monkeypatch.setitem(acceptance.CRITERIA, 10, ("forced failure", lambda: (False, {})))
    code, out, _ = _run(capsys, ["verify", "--suite", "constraints"])
    assert code == 1 and "[FAIL]" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "eulerheat", "constraints", "--eos", "polytropic", "--n", "3"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("feasible")
