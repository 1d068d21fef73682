import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import numpy as np
import pandas as pd

from .check_status import CheckStatus
from .phase import Phase

REPORT_VERSION = "1.0"


def _plain(value):
    """Turns grid parameters into JSON-native values."""
    if isinstance(value, (Phase, Fraction)):
        return str(value)
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


class Tally:
    """Collects per-instance margins for one check.

    A margin is the signed slack of the verified relation: nonnegative when
    the relation holds, negative by how much it is violated otherwise.
    """

    def __init__(self):
        self.instances = 0
        self.failures = 0
        self.worst_margin = math.inf
        self.failing_params: Optional[dict] = None
        self.notes: List[str] = []

    def record(self, margin: float, passed: Optional[bool] = None, **params) -> bool:
        margin = float(margin)
        passed = margin >= 0 if passed is None else bool(passed)

        self.instances += 1
        if math.isnan(margin):
            passed = False
        else:
            self.worst_margin = min(self.worst_margin, margin)

        if not passed:
            self.failures += 1
            if self.failing_params is None:
                self.failing_params = {key: _plain(value) for key, value in params.items()}

        return passed

    def within(self, error: float, tol: float, **params) -> bool:
        return self.record(tol - error, **params)

    def at_most(self, value: float, bound: float, slack: float = 0.0, **params) -> bool:
        return self.record(bound + slack - value, **params)

    def at_least(self, value: float, bound: float, slack: float = 0.0, **params) -> bool:
        return self.record(value + slack - bound, **params)

    def strictly_above(self, value: float, bound: float, strict_margin: float, **params) -> bool:
        margin = value - bound
        return self.record(margin, passed=margin > strict_margin, **params)

    def holds(self, condition: bool, **params) -> bool:
        return self.record(0.0, passed=bool(condition), **params)

    def note(self, text: str) -> None:
        self.notes.append(text)

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass
class CheckResult:
    name: str
    status: CheckStatus
    instances_run: int = 0
    worst_margin: Optional[float] = None
    failing_params: Optional[dict] = None
    elapsed_ms: float = 0.0
    note: str = ""

    @staticmethod
    def from_tally(name: str, tally: Tally, elapsed_ms: float) -> "CheckResult":
        status = CheckStatus.PASS if tally.passed else CheckStatus.FAIL
        notes = list(tally.notes)
        if tally.instances == 0:
            notes.append("no instances in the configured grid")

        return CheckResult(
            name=name,
            status=status,
            instances_run=tally.instances,
            worst_margin=None if math.isinf(tally.worst_margin) else tally.worst_margin,
            failing_params=tally.failing_params,
            elapsed_ms=elapsed_ms,
            note="; ".join(notes),
        )

    @staticmethod
    def skipped(name: str, blocked_by: List[str]) -> "CheckResult":
        return CheckResult(name, CheckStatus.SKIPPED, note=f"prerequisite not passed: {', '.join(blocked_by)}")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": self.status.value,
            "instances": self.instances_run,
            "worst_margin": self.worst_margin,
            "failing_params": self.failing_params,
            "elapsed_ms": self.elapsed_ms,
            "note": self.note,
        }

    @staticmethod
    def from_json(json: dict) -> "CheckResult":
        return CheckResult(
            name=json["name"],
            status=CheckStatus(json["status"]),
            instances_run=json["instances"],
            worst_margin=json["worst_margin"],
            failing_params=json["failing_params"],
            elapsed_ms=json["elapsed_ms"],
            note=json.get("note", ""),
        )


@dataclass
class CheckReport:
    results: List[CheckResult]
    config: dict
    seed: int
    timestamp: str
    version: str = REPORT_VERSION

    @property
    def failed(self) -> List[CheckResult]:
        return [result for result in self.results if result.status == CheckStatus.FAIL]

    @property
    def passed(self) -> bool:
        return not self.failed

    def result(self, name: str) -> CheckResult:
        for result in self.results:
            if result.name == name:
                return result
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "seed": self.seed,
            "timestamp": self.timestamp,
            "config": self.config,
            "results": [result.to_json() for result in self.results],
        }

    @staticmethod
    def from_json(json: dict) -> "CheckReport":
        return CheckReport(
            results=[CheckResult.from_json(result) for result in json["results"]],
            config=json["config"],
            seed=json["seed"],
            timestamp=json["timestamp"],
            version=json["version"],
        )

    def content(self) -> dict:
        """The report without its wall-clock fields."""
        json = self.to_json()
        json.pop("timestamp")
        for result in json["results"]:
            result.pop("elapsed_ms")
        return json

    def to_frame(self) -> pd.DataFrame:
        rows = [result.to_json() for result in self.results]
        frame = pd.DataFrame(rows, columns=["name", "status", "instances", "worst_margin", "failing_params", "elapsed_ms", "note"])
        frame["failing_params"] = frame["failing_params"].map(lambda p: "" if p is None else ", ".join(f"{k}={v}" for k, v in p.items()))
        return frame

    def to_text(self) -> str:
        lines = []
        for result in self.results:
            margin = "-" if result.worst_margin is None else f"{result.worst_margin:.3e}"
            line = f"{result.status.get_status_label():<4}  {result.name:<44} {result.instances_run:>8}  {margin:>10}"
            if result.note:
                line += f"  {result.note}"
            lines.append(line)

        counts = {status: sum(r.status == status for r in self.results) for status in CheckStatus}
        lines.append(
            f"{counts[CheckStatus.PASS]} passed, {counts[CheckStatus.FAIL]} failed, "
            f"{counts[CheckStatus.SKIPPED]} skipped (seed {self.seed})"
        )
        return "\n".join(lines) + "\n"
