"""
Интеграционные тесты командной строки и реестра запусков
"""

import json
from pathlib import Path

import pandas as pd
import pytest

from ratchet_abatement.application.use_cases.record_run import RecordRunUseCase
from ratchet_abatement.domain.errors import SolverError, VerificationError
from ratchet_abatement.infrastructure.database.session import get_session
from ratchet_abatement.presentation.cli import main as cli


def _config(path: Path, document) -> str:
    path.write_text(json.dumps(document), encoding="utf-8")
    return str(path)


def _run(command: str, config: str, out: Path, *extra: str) -> int:
    return cli.main([command, "--config", config, "--out", str(out), *extra])


def _run_dir(out: Path, command: str) -> Path:
    (run_dir,) = [p for p in out.iterdir() if p.is_dir() and p.name.startswith(command + "-")]
    return run_dir


def _history(out: Path):
    with get_session(f"sqlite:///{(out / 'runs.sqlite').as_posix()}") as session:
        return [(r.command, r.status, r.exit_code) for r in RecordRunUseCase(session).history()]


def test_solve_writes_artifacts(isolated_env, run_document):
    out = isolated_env / "out"
    code = _run("solve", _config(isolated_env / "run.json", run_document), out)
    assert code == 0

    run_dir = _run_dir(out, "solve")
    expected = ("config.json", "thresholds.csv", "value_curve.csv", "hjb_report.csv", "summary.json")
    for name in expected:
        assert (run_dir / name).is_file()

    summary = json.loads((run_dir / "summary.json").read_text(encoding="utf-8"))
    assert summary["verified"] is True
    assert summary["zero_threshold_region"] == "NoZeroInterval"
    assert summary["config"]["model"]["lambda"] == 1.5
    assert summary["config"]["mc"]["tail_tol"] is not None

    thresholds = pd.read_csv(run_dir / "thresholds.csv")
    assert len(thresholds) == 21
    assert _history(out) == [("solve", "ok", 0)]


def test_config_error_writes_nothing(isolated_env, run_document):
    run_document["model"]["q"] = 0.0
    out = isolated_env / "out"
    code = _run("solve", _config(isolated_env / "run.json", run_document), out)
    assert code == 2
    assert not out.exists()


def test_zero_sigma_is_config_error(isolated_env, run_document):
    run_document["model"]["sigma"] = 0.0
    out = isolated_env / "out"
    path = _config(isolated_env / "run.json", run_document)
    assert _run("simulate", path, out) == 2
    assert not out.exists()


def test_simulate_is_reproducible(isolated_env, run_document):
    run_document["mc"]["tail_tol"] = 1e-2
    run_document["simulate"] = {"strategy": "multi_threshold", "trace_path": 3}
    path = _config(isolated_env / "run.json", run_document)

    contents = []
    for out in (isolated_env / "a", isolated_env / "b"):
        assert _run("simulate", path, out, "--seed", "21") == 0
        run_dir = _run_dir(out, "simulate")
        contents.append({p.name: p.read_bytes() for p in sorted(run_dir.iterdir())})

    assert contents[0] == contents[1]
    assert set(contents[0]) == {"config.json", "estimate.json", "path_trace.csv"}

    estimate = json.loads(contents[0]["estimate.json"])
    assert estimate["seed"] == 21
    assert estimate["config"]["mc"]["seed"] == 21
    assert estimate["value"]["n_paths"] == 64


def test_seed_changes_run_directory(isolated_env, run_document):
    run_document["mc"]["tail_tol"] = 1e-2
    run_document["simulate"] = {"strategy": "constant"}
    path = _config(isolated_env / "run.json", run_document)
    out = isolated_env / "out"
    assert _run("simulate", path, out, "--seed", "1") == 0
    assert _run("simulate", path, out, "--seed", "2") == 0
    assert len([p for p in out.iterdir() if p.is_dir()]) == 2
    assert [row[1] for row in _history(out)] == ["ok", "ok"]


def test_compare_and_converge(isolated_env, run_document):
    run_document["mc"]["tail_tol"] = 1e-2
    run_document["compare"] = {"strategies": ["multi_threshold", "barrier", "no_emission"]}
    path = _config(isolated_env / "run.json", run_document)
    out = isolated_env / "out"

    assert _run("compare", path, out) == 0
    compare_dir = _run_dir(out, "compare")
    table = pd.read_csv(compare_dir / "comparison.csv")
    assert list(table["strategy"]) == ["multi_threshold", "barrier", "no_emission"]
    assert (compare_dir / "threshold_curves.csv").is_file()
    payload = json.loads((compare_dir / "comparison.json").read_text(encoding="utf-8"))
    assert "ordering_ok" in payload["diagnostics"]

    assert _run("converge", path, out) == 0
    converge_dir = _run_dir(out, "converge")
    frame = pd.read_csv(converge_dir / "convergence.csv")
    assert list(frame["n_fine"]) == [10, 20]
    summary = json.loads((converge_dir / "convergence.json").read_text(encoding="utf-8"))
    assert summary["monotone_ok"] is True


def test_numeric_failure_exit_code(isolated_env, run_document, monkeypatch):
    def failing(config, writer, settings):
        raise SolverError(7, ArithmeticError("overflow"))

    monkeypatch.setitem(cli.COMMAND_HANDLERS, "solve", failing)
    out = isolated_env / "out"
    path = _config(isolated_env / "run.json", run_document)
    assert _run("solve", path, out) == 3
    assert _history(out) == [("solve", "failed", 3)]


def test_verification_failure_exit_code(isolated_env, run_document, monkeypatch):
    def failing(config, writer, settings):
        raise VerificationError(["HJB: 1 точек с нарушениями"])

    monkeypatch.setitem(cli.COMMAND_HANDLERS, "solve", failing)
    out = isolated_env / "out"
    path = _config(isolated_env / "run.json", run_document)
    assert _run("solve", path, out) == 4
    assert _history(out) == [("solve", "verification_failed", 4)]


def test_output_dir_from_environment(isolated_env, run_document, monkeypatch):
    monkeypatch.setenv("RATCHET_OUTPUT_DIR", str(isolated_env / "env-out"))
    path = _config(isolated_env / "run.json", run_document)
    assert cli.main(["converge", "--config", path]) == 0
    assert _run_dir(isolated_env / "env-out", "converge").is_dir()


def test_missing_subcommand():
    with pytest.raises(SystemExit):
        cli.main([])
