import json
import math

import pandas as pd
import pytest

from certifier.cli import sweep_frame
from certifier.controllers.file_controller import FileController
from certifier.utils.check_status import CheckStatus
from certifier.utils.configuration import ConfigError, OutputFormat, RunConfig
from certifier.utils.phase import Phase
from certifier.utils.report import CheckReport, CheckResult, Tally


def sample_report() -> CheckReport:
    tally = Tally()
    tally.within(1e-13, 1e-12, t=3)
    tally.within(2e-12, 1e-12, t=4, phi=Phase.rational(3, 10))
    return CheckReport(
        results=[
            CheckResult("_unitary_U", CheckStatus.PASS, 12, 1e-11, None, 3.5),
            CheckResult.from_tally("_eigen_uu", tally, 1.25),
            CheckResult.skipped("phase_kickback", ["_eigen_uu"]),
        ],
        config=RunConfig.get_default().to_json(),
        seed=7,
        timestamp="2026-01-01T00:00:00+00:00",
    )


def test_tally_keeps_worst_margin_and_first_failure():
    tally = Tally()

    assert tally.within(0.0, 1e-10, t=1)
    assert not tally.at_most(0.6, 0.5, t=2)
    assert not tally.at_least(0.1, 0.4, t=3)
    assert tally.holds(True, t=4)

    assert tally.instances == 4
    assert tally.failures == 2
    assert tally.worst_margin == pytest.approx(-0.3)
    assert tally.failing_params == {"t": 2}
    assert not tally.passed


def test_tally_strictness_and_nan():
    tally = Tally()

    assert not tally.strictly_above(0.5, 0.5, 1e-12, e=2)
    assert tally.strictly_above(0.6, 0.5, 1e-12, e=3)
    assert not tally.record(math.nan, e=4)
    assert tally.failures == 2


def test_empty_tally_is_noted():
    result = CheckResult.from_tally("x", Tally(), 0.0)

    assert result.status == CheckStatus.PASS
    assert result.worst_margin is None
    assert "no instances" in result.note


def test_failing_params_are_plain_values():
    result = sample_report().result("_eigen_uu")

    assert result.status == CheckStatus.FAIL
    assert result.failing_params == {"t": 4, "phi": "3/10"}
    json.dumps(result.to_json())


def test_report_json_round_trip(tmp_path):
    report = sample_report()
    path = str(tmp_path / "reports" / "report.json")

    FileController.write_report(report, path, OutputFormat.JSON)
    loaded = FileController.read_report(path)

    assert loaded == report
    assert not loaded.passed
    assert [r.name for r in loaded.failed] == ["_eigen_uu"]


def test_content_drops_wall_clock_fields():
    report = sample_report()
    other = CheckReport(
        results=[CheckResult.from_json({**r.to_json(), "elapsed_ms": 99.0}) for r in report.results],
        config=report.config,
        seed=report.seed,
        timestamp="2030-05-05T00:00:00+00:00",
    )

    assert other.content() == report.content()
    assert other.to_json() != report.to_json()


def test_text_report():
    text = sample_report().to_text()
    lines = text.splitlines()

    assert lines[0].startswith("PASS  _unitary_U")
    assert lines[1].startswith("FAIL  _eigen_uu")
    assert lines[2].startswith("SKIP  phase_kickback")
    assert "_eigen_uu" in lines[2]
    assert lines[-1] == "1 passed, 1 failed, 1 skipped (seed 7)"


def test_report_csv(tmp_path):
    path = tmp_path / "report.csv"
    FileController.write_report(sample_report(), str(path), OutputFormat.CSV)

    df = pd.read_csv(path, keep_default_na=False)
    assert list(df["status"]) == ["pass", "fail", "skipped"]
    assert df.loc[1, "failing_params"] == "t=4, phi=3/10"


def test_sweep_csv_layout(tmp_path):
    path = tmp_path / "sweep.csv"
    FileController.write_table(sweep_frame(3), str(path), OutputFormat.CSV)

    raw = path.read_bytes().decode("utf-8")
    lines = raw.split("\r\n")

    assert lines[0] == "e,tight,original"
    assert lines[1] == "1,0.75,"
    assert lines[2] == "2,0.3125,0.5"
    assert raw.endswith("\r\n")
    assert "\n" not in raw.replace("\r\n", "")


def test_sweep_values():
    df = sweep_frame(64)

    assert len(df) == 64
    assert pd.isna(df.loc[0, "original"])
    later = df[df["e"] >= 2]
    assert (later["tight"] < later["original"]).all()
    assert df["tight"].is_monotonic_decreasing


def test_xlsx_tables_are_readable(tmp_path):
    path = str(tmp_path / "sheets.xlsx")
    FileController.write_table(sweep_frame(4), path, OutputFormat.XLSX)

    df = pd.read_excel(path, sheet_name=FileController.SHEET_NAME, engine="openpyxl")
    assert list(df.columns) == ["e", "tight", "original"]
    assert list(df["e"]) == [1, 2, 3, 4]


def test_xlsx_needs_a_path():
    with pytest.raises(ConfigError):
        FileController.write_table(sweep_frame(2), None, OutputFormat.XLSX)


def test_text_to_stdout(capsys):
    FileController.write_text("hello\n", None)
    assert capsys.readouterr().out == "hello\n"


def test_csv_sections_are_separated_by_an_empty_line(tmp_path):
    path = tmp_path / "sections.csv"
    first = pd.DataFrame({"m": [0, 1], "prob": [0.25, 0.75]})
    second = pd.DataFrame({"b_f": [1], "e": [1], "original": [None]})
    FileController.write_csv_sections([first, second], str(path))

    raw = path.read_bytes().decode("utf-8")
    assert raw == "m,prob\r\n0,0.25\r\n1,0.75\r\n\r\nb_f,e,original\r\n1,1,\r\n"
