import argparse
import logging
import os
from typing import List, Optional

import pandas as pd

from .checks.registry import build_check_graph, registry_listing
from .controllers.config_controller import SEED_VARIABLE, ConfigController
from .controllers.file_controller import FileController
from .controllers.harness_controller import HarnessController
from .utils.analytic import ErrorTolerance, PhaseGeometry, failure_bounds, success_prob
from .utils.circuit import output_distribution
from .utils.configuration import ConfigError, OutputFormat, RunConfig
from .utils.graph import CheckGraph
from .utils.instances import diagonal_instance, random_instance
from .utils.linalg import DomainError, ensure_within_cap
from .utils.path import is_path_exists_or_creatable
from .utils.phase import Phase

logger = logging.getLogger(__name__)

PROBABILITY_FLOOR = 1e-12
FORMATS = [output_format.value for output_format in OutputFormat]


def create_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat 'key = value' configuration file")
    common.add_argument("--seed", type=int, help=f"base seed (falls back to ${SEED_VARIABLE}, then the config)")
    common.add_argument("--format", choices=FORMATS, help="output format")
    common.add_argument("--out", metavar="PATH", help="output file; stdout when omitted")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="log every step")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="log warnings and errors only")

    parser = argparse.ArgumentParser(
        prog="qpe-certify",
        description="Numerical certification of the quantum phase estimation guarantees.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    verify = subparsers.add_parser("verify", parents=[common], help="run the check suite and write a report")
    verify.add_argument("--t-max", dest="t_max", type=int, help="largest first-register width for simulated checks")
    verify.add_argument("--include", help="comma separated checks to run, with their prerequisites")
    verify.add_argument("--exclude", help="comma separated checks to drop, with their dependents")
    verify.add_argument("--workers", type=int, help="parallel checks; 0 uses every core")

    sweep = subparsers.add_parser("sweep", parents=[common], help="tight and original failure bounds per e")
    sweep.add_argument("--e-max", dest="e_max", type=int, help="largest e in the sweep")

    simulate = subparsers.add_parser("simulate", parents=[common], help="outcome distribution of one instance")
    simulate.add_argument("--t", type=int, required=True, help="first-register width")
    simulate.add_argument("--s", type=int, default=1, help="second-register width")
    simulate.add_argument("--phase", required=True, help="eigenphase as a/2^q, p/q or a decimal in [0, 1)")

    subparsers.add_parser("checks", parents=[common], help="list the registered checks and their prerequisites")

    return parser


def _overrides(args: argparse.Namespace) -> dict:
    keys = ("seed", "t_max", "include", "exclude", "format", "out", "workers", "e_max")
    return {key: getattr(args, key, None) for key in keys}


def _output_path(path: Optional[str]) -> Optional[str]:
    if path is not None and not is_path_exists_or_creatable(path):
        raise ConfigError(f"output path {path} is not writable")
    return path


def cmd_verify(config: RunConfig) -> int:
    graph = build_check_graph(config)
    logger.info("running %d checks with seed %d", len(graph), config.seed)

    report = HarnessController.run_suite(graph, config.seed, config)
    FileController.write_report(report, config.out, config.output_format)

    if report.failed:
        logger.warning("%d check(s) failed: %s", len(report.failed), ", ".join(r.name for r in report.failed))
        return 1
    return 0


def sweep_frame(e_max: int) -> pd.DataFrame:
    if e_max < 2:
        raise DomainError(f"the sweep needs e_max >= 2, got {e_max}")

    rows = []
    for e in range(1, e_max + 1):
        bounds = failure_bounds(e)
        rows.append({"e": e, "tight": bounds.tight, "original": bounds.original})
    return pd.DataFrame(rows, columns=["e", "tight", "original"])


def cmd_sweep(e_max: int, output: Optional[str], output_format: OutputFormat = OutputFormat.CSV) -> int:
    df = sweep_frame(e_max)
    FileController.write_table(df, _output_path(output), output_format)
    return 0


def _simulated_tables(t: int, s: int, phase: Phase, seed: Optional[int]):
    ensure_within_cap(t + s)
    if seed is None:
        instance = diagonal_instance(s, phase, t=t)
    else:
        instance = random_instance(s, phase, seed, t=t)

    dist = output_distribution(instance)
    outcomes = pd.DataFrame(
        [{"m": m, "prob": round(float(p), 12)} for m, p in enumerate(dist.probs) if p > PROBABILITY_FLOOR],
        columns=["m", "prob"],
    )

    tolerances = []
    for e in ErrorTolerance.domain(t):
        bounds = failure_bounds(e)
        tolerances.append({"e": e, "success": success_prob(dist, phase, e), "tight": bounds.tight, "original": bounds.original})
    tolerances = pd.DataFrame(tolerances, columns=["e", "success", "tight", "original"])

    return PhaseGeometry.of(phase, t), outcomes, tolerances


def cmd_simulate(t: int, s: int, phase: str, seed: Optional[int], output_format: OutputFormat, out: Optional[str] = None) -> int:
    """Lists the outcomes of one instance: diagonal, or random when a seed is given."""
    phi = Phase.parse(phase)
    geometry, outcomes, tolerances = _simulated_tables(t, s, phi, seed)
    out = _output_path(out)

    summary = {
        "t": t,
        "s": s,
        "phase": phi.label(),
        "b_f": geometry.b_f,
        "b_r": geometry.b_r,
        "delta_bf": geometry.delta_bf,
        "delta_br": geometry.delta_br,
    }

    match output_format:
        case OutputFormat.TEXT:
            lines = [f"m={row.m} prob={float(row.prob)!r}" for row in outcomes.itertuples()]
            lines.append(" ".join(f"{key}={value}" for key, value in summary.items() if key not in ("t", "s", "phase")))
            for row in tolerances.itertuples():
                original = "-" if pd.isna(row.original) else f"{float(row.original)!r}"
                lines.append(f"e={row.e} success={float(row.success)!r} tight={float(row.tight)!r} original={original}")
            FileController.write_text("\n".join(lines) + "\n", out)
        case OutputFormat.JSON:
            summary["outcomes"] = outcomes.to_dict(orient="records")
            summary["tolerances"] = [
                {key: (None if key == "original" and pd.isna(value) else value) for key, value in row.items()}
                for row in tolerances.to_dict(orient="records")
            ]
            FileController.write_json(summary, out)
        case OutputFormat.CSV:
            detail = tolerances.copy()
            for position, key in enumerate(("b_f", "b_r", "delta_bf", "delta_br")):
                detail.insert(position, key, summary[key])
            FileController.write_csv_sections([outcomes, detail], out)
        case OutputFormat.XLSX:
            if out is None:
                raise ConfigError("the xlsx format needs an output path")
            FileController.write_sheets(
                {"Outcomes": outcomes, "Tolerances": tolerances, "Summary": pd.DataFrame([summary])},
                out,
            )
    return 0


def cmd_checks(graph: CheckGraph, out: Optional[str] = None) -> int:
    FileController.write_text(registry_listing(graph), _output_path(out))
    return 0


def _format(args: argparse.Namespace, default: OutputFormat) -> OutputFormat:
    return default if args.format is None else OutputFormat.from_label(args.format)


def _seed(args: argparse.Namespace) -> Optional[int]:
    if args.seed is not None:
        return args.seed
    raw = os.environ.get(SEED_VARIABLE)
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{SEED_VARIABLE} must be an integer, got {raw!r}")
    return None


def run(args: argparse.Namespace) -> int:
    match args.command:
        case "verify":
            config = ConfigController(args.config).get_configuration(_overrides(args))
            return cmd_verify(config)
        case "sweep":
            config = ConfigController(args.config).get_configuration(dict(e_max=args.e_max))
            return cmd_sweep(config.e_max, args.out, _format(args, OutputFormat.CSV))
        case "simulate":
            return cmd_simulate(args.t, args.s, args.phase, _seed(args), _format(args, OutputFormat.TEXT), args.out)
        case "checks":
            return cmd_checks(build_check_graph(RunConfig.get_default()), args.out)


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    return create_parser().parse_args(argv)
