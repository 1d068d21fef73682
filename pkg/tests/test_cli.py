import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pandas as pd
import pytest

from certifier.checks.registry import all_nodes, build_check_graph
from certifier.controllers.config_controller import SEED_VARIABLE
from certifier.utils.configuration import RunConfig

ROOT = Path(__file__).resolve().parent.parent

SMALL_CONFIG = """\
# kept small so the run stays quick
t_max = 3
formula_t_max = 4
s_values = 1
random_instances = 1
n_values = 1, 2
epsilons = 1.0, 0.5
e_max = 64
trig_samples = 500
dense_qubits = 5
"""

pytestmark = pytest.mark.slow


def certify(*args, env=None):
    environ = {key: value for key, value in os.environ.items() if key != SEED_VARIABLE}
    environ.update(env or {})
    return subprocess.run(
        [sys.executable, "main.py", *args],
        cwd=ROOT,
        env=environ,
        capture_output=True,
        text=True,
        timeout=600,
    )


def outcome_lines(stdout: str):
    return [line for line in stdout.splitlines() if line.startswith("m=")]


def test_simulate_exact_phase():
    result = certify("simulate", "--t", "3", "--phase", "5/2^3")

    assert result.returncode == 0, result.stderr
    assert outcome_lines(result.stdout) == ["m=5 prob=1.0"]
    assert "b_f=5 b_r=5" in result.stdout


def test_simulate_spread_phase():
    result = certify("simulate", "--t", "3", "--phase", "0.3")

    assert result.returncode == 0, result.stderr
    lines = outcome_lines(result.stdout)
    assert len(lines) == 8

    probs = {int(line.split()[0][2:]): float(line.split()[1][5:]) for line in lines}
    assert max(probs, key=probs.get) == 2
    assert sum(probs.values()) == pytest.approx(1.0, abs=1e-10)


def test_simulate_json_with_seeded_instance(tmp_path):
    out = tmp_path / "simulate.json"
    result = certify("simulate", "--t", "4", "--s", "2", "--phase", "3/10", "--format", "json", "--out", str(out), env={SEED_VARIABLE: "9"})

    assert result.returncode == 0, result.stderr
    summary = json.loads(out.read_text(encoding="utf-8"))
    assert summary["phase"] == "3/10"
    assert summary["b_f"] == 4
    assert summary["tolerances"][0]["original"] is None
    assert sum(row["prob"] for row in summary["outcomes"]) == pytest.approx(1.0, abs=1e-9)


def test_simulate_csv_carries_the_tolerance_table(tmp_path):
    out = tmp_path / "simulate.csv"
    result = certify("simulate", "--t", "4", "--phase", "0.3", "--format", "csv", "--out", str(out), "-q")

    assert result.returncode == 0, result.stderr
    outcomes, detail = out.read_bytes().decode("utf-8").split("\r\n\r\n")

    assert pd.read_csv(io.StringIO(outcomes))["prob"].sum() == pytest.approx(1.0, abs=1e-9)
    table = pd.read_csv(io.StringIO(detail))
    assert list(table.columns) == ["b_f", "b_r", "delta_bf", "delta_br", "e", "success", "tight", "original"]
    assert set(table["b_f"]) == {4}
    assert set(table["b_r"]) == {5}
    assert list(table["e"]) == list(range(1, 7))


@pytest.mark.parametrize("phase", ["1/2^70", "3/2^63", "300000000000000001/1000000000000000009"])
def test_simulate_huge_denominators(phase):
    result = certify("simulate", "--t", "3", "--phase", phase)

    assert result.returncode == 0, result.stderr
    assert len(outcome_lines(result.stdout)) >= 1


@pytest.mark.parametrize(
    "args",
    [
        ("simulate", "--t", "3", "--phase", "1.2"),
        ("simulate", "--t", "14", "--s", "1", "--phase", "0.3"),
        ("simulate", "--t", "3"),
        ("sweep", "--e-max", "1"),
        ("verify", "--include", "no_such_check"),
        ("frobnicate",),
    ],
)
def test_usage_errors_exit_two(args):
    assert certify(*args).returncode == 2


def test_malformed_config_exits_two(tmp_path):
    path = tmp_path / "bad.conf"
    path.write_text("t_max = 3\nthis line has no separator\n", encoding="utf-8")

    result = certify("verify", "--config", str(path))
    assert result.returncode == 2
    assert "expected" in result.stderr


def test_sweep_csv(tmp_path):
    out = tmp_path / "sweep.csv"
    result = certify("sweep", "--e-max", "4", "--out", str(out))

    assert result.returncode == 0, result.stderr
    raw = out.read_bytes().decode("utf-8")
    assert raw.startswith("e,tight,original\r\n1,0.75,\r\n")

    df = pd.read_csv(out)
    assert list(df["e"]) == [1, 2, 3, 4]


def test_checks_listing():
    result = certify("checks")

    assert result.returncode == 0, result.stderr
    lines = result.stdout.splitlines()
    assert len(lines) == len(all_nodes())
    assert lines[0].split()[0] == build_check_graph(RunConfig.get_default()).topological_order()[0]


def test_verify_include_runs_the_closure(tmp_path):
    config = tmp_path / "small.conf"
    config.write_text(SMALL_CONFIG, encoding="utf-8")
    out = tmp_path / "report.json"

    result = certify("verify", "--config", str(config), "--include", "qpe_exact", "--seed", "4", "--out", str(out), "-q")

    assert result.returncode == 0, result.stderr
    report = json.loads(out.read_text(encoding="utf-8"))
    names = {r["name"] for r in report["results"]}

    assert names == build_check_graph(RunConfig.get_default()).prerequisite_closure(["qpe_exact"])
    assert all(r["status"] == "pass" for r in report["results"])
    assert report["seed"] == 4
    assert report["config"]["include"] == ["qpe_exact"]


def test_verify_is_deterministic(tmp_path):
    config = tmp_path / "small.conf"
    config.write_text(SMALL_CONFIG, encoding="utf-8")

    contents = []
    for workers in ("1", "3"):
        out = tmp_path / f"report-{workers}.json"
        args = ("verify", "--config", str(config), "--include", "qpe_best_guarantee", "--out", str(out), "--workers", workers)
        assert certify(*args, env={SEED_VARIABLE: "21"}).returncode == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        report.pop("timestamp")
        report["config"].pop("workers")
        report["config"].pop("out")
        for r in report["results"]:
            r.pop("elapsed_ms")
        assert report["seed"] == 21
        contents.append(report)

    assert contents[0] == contents[1]
