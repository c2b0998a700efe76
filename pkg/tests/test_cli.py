import json
import subprocess
import sys

import pytest

from vertex19 import cli, reporting
from vertex19.errors import ConfigError, IoError
from vertex19.reporting import CheckResult, Command, Report, RunConfig, emit, run


def _cfg(**kw):
    kw.setdefault("command", Command.VERIFY_YBE)
    kw.setdefault("samples", 3)
    kw.setdefault("seed", 5)
    return RunConfig(**kw)


def test_run_is_deterministic_and_timing_free():
    t1 = emit(run(_cfg()), "-")
    t2 = emit(run(_cfg()), "-")
    assert t1 == t2
    assert '"timing' not in t1


def test_report_roundtrip(tmp_path):
    report = run(_cfg())
    path = tmp_path / "report.json"
    text = emit(report, str(path))
    assert path.read_text() == text
    assert text.endswith("\n")
    data = json.loads(text)
    assert data["passed"] is True
    assert data["config"]["command"] == "verify-ybe"
    assert all(r["passed"] for r in data["results"])


def test_emit_unwritable_path_raises():
    report = run(_cfg())
    with pytest.raises(IoError):
        emit(report, "/no-such-dir/report.json")


def test_canonical_rejects_floats():
    report = Report(config=_cfg(), results=[CheckResult("x", True)], backend_stats={"t": 1.5})
    with pytest.raises(ConfigError):
        report.canonical_dict()


def test_run_validations():
    with pytest.raises(ConfigError):
        run(_cfg(samples=0))
    with pytest.raises(ConfigError):
        run(_cfg(command=Command.SOLVE, L=4, samples=None))
    with pytest.raises(ConfigError):
        run(_cfg(command=Command.VERIFY_STRUCTURE, L=5, samples=None))
    with pytest.raises(ConfigError):
        run(_cfg(command=Command.SOLVE, backend="float64", L=1, samples=None))
    with pytest.raises(ConfigError):
        run(_cfg(command=Command.VERIFY_STRUCTURE, L=2, mu=("2",), samples=None))
    with pytest.raises(ConfigError):
        run(_cfg(command=Command.COMPUTE, target="z", L=2, points=("5",), samples=None))
    with pytest.raises(ConfigError):
        run(_cfg(command=Command.COMPUTE, target="q", L=1, samples=None))
    with pytest.raises(ConfigError):
        run(_cfg(command=Command.VERIFY_STRUCTURE, p="1", samples=None))  # degenerate anisotropy
    with pytest.raises(ConfigError):
        Command.parse("frobnicate")


def test_thread_env(monkeypatch):
    monkeypatch.setenv("V19_THREADS", "3")
    report = run(_cfg())
    assert report.config.threads == 3
    assert json.loads(emit(report, "-"))["config"]["threads"] == 3
    monkeypatch.setenv("V19_THREADS", "many")
    with pytest.raises(ConfigError):
        run(_cfg())


def test_compute_command_agreement(tmp_path):
    path = tmp_path / "z.json"
    rc = cli.main(
        ["compute", "z", "--L", "1", "--mu", "3", "--x", "5", "--output", str(path)]
    )
    assert rc == 0
    data = json.loads(path.read_text())
    assert data["results"][0]["name"] == "engines_agree"
    assert data["results"][0]["passed"] is True

    rc = cli.main(["compute", "fbar", "--L", "1", "--seed", "4", "--output", str(path)])
    assert rc == 0
    assert json.loads(path.read_text())["passed"] is True


def test_solve_command_reports_coefficients(tmp_path):
    path = tmp_path / "s.json"
    rc = cli.main(["solve", "--L", "1", "--mu", "3", "--output", str(path)])
    assert rc == 0
    data = json.loads(path.read_text())
    names = [r["name"] for r in data["results"]]
    assert names[:3] == ["kernel_dim_one", "normalized_by_constant", "z_reconstruction"]
    assert data["backend_stats"]["phi"]["0,1"] == "-1/3"
    assert data["backend_stats"]["kappa"] != "0/1"


def test_cli_exit_codes(monkeypatch, tmp_path):
    assert cli.main(["verify-ybe", "--samples", "2", "--output", str(tmp_path / "a")]) == 0
    assert cli.main(["solve", "--L", "5"]) == 2
    assert cli.main(["verify-structure", "--p", "0"]) == 2

    def fail_run(config):
        return Report(config=config, results=[CheckResult("forced", False)])

    monkeypatch.setattr(reporting, "run", fail_run)
    assert cli.main(["verify-ybe", "--output", str(tmp_path / "b")]) == 1

    with pytest.raises(SystemExit) as exc:
        cli.main(["compute", "w"])
    assert exc.value.code == 2


def test_installed_entry_point():
    proc = subprocess.run(
        ["v19", "verify-ybe", "--samples", "2", "--seed", "1"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    data = json.loads(proc.stdout)
    assert data["passed"] is True
    assert "elapsed" in proc.stderr


def test_module_entry_matches_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "vertex19.cli", "verify-ybe", "--samples", "2", "--seed", "1"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["passed"] is True


def test_tables_command_single_q(tmp_path):
    path = tmp_path / "t.json"
    rc = cli.main(["tables", "--model", "fz", "--q-samples", "1", "--output", str(path)])
    assert rc == 0
    data = json.loads(path.read_text())
    assert data["results"][0]["name"] == "tables[q=4/1]"
    assert data["results"][0]["detail"] == "64/64 entries match"


def test_verify_algebra_command(tmp_path):
    path = tmp_path / "alg.json"
    rc = cli.main(
        ["verify-algebra", "--L", "1", "--samples", "1", "--seed", "2", "--output", str(path)]
    )
    assert rc == 0
    data = json.loads(path.read_text())
    names = {r["name"] for r in data["results"]}
    assert "aa_commute[0]" in names
    assert any(n.startswith("phi_z_h.") for n in names)
