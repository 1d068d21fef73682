import logging
import os
import time
from concurrent.futures import FIRST_COMPLETED, Future, ThreadPoolExecutor, wait
from datetime import datetime, timezone
from typing import Dict, Optional

from ..checks.context import CheckContext
from ..utils.check_status import CheckStatus
from ..utils.configuration import RunConfig
from ..utils.graph import CheckGraph, CheckNode
from ..utils.report import CheckReport, CheckResult

logger = logging.getLogger(__name__)


class HarnessController:
    @staticmethod
    def run_node(node: CheckNode, config: RunConfig, seed: int) -> CheckResult:
        """Runs one check; an exception inside the runner is a failed result, not a crash."""
        ctx = CheckContext.for_node(config, seed, node.name)
        start = time.perf_counter()
        try:
            tally = node.runner(ctx)
        except Exception as exc:
            elapsed_ms = (time.perf_counter() - start) * 1000
            logger.exception("check %s raised", node.name)
            return CheckResult(node.name, CheckStatus.FAIL, elapsed_ms=elapsed_ms, note=f"{type(exc).__name__}: {exc}")

        return CheckResult.from_tally(node.name, tally, (time.perf_counter() - start) * 1000)

    @staticmethod
    def _log_result(result: CheckResult):
        margin = "-" if result.worst_margin is None else f"{result.worst_margin:.3e}"
        logger.info(
            "%s %s (%d instances, worst margin %s, %.0f ms)",
            result.name,
            result.status.get_status_label(),
            result.instances_run,
            margin,
            result.elapsed_ms,
        )

        match result.status:
            case CheckStatus.FAIL:
                logger.warning("%s failed at %s %s", result.name, result.failing_params, result.note)
            case CheckStatus.SKIPPED:
                logger.warning("%s skipped: %s", result.name, result.note)

    @staticmethod
    def run_suite(graph: CheckGraph, seed: int, config: Optional[RunConfig] = None, workers: Optional[int] = None) -> CheckReport:
        """Runs every node once its prerequisites are done; the report keeps the topological order."""
        config = RunConfig.get_default() if config is None else config
        order = graph.topological_order()
        workers = config.workers if workers is None else workers
        workers = workers or os.cpu_count() or 1

        results: Dict[str, CheckResult] = {}
        pending = list(order)
        running: Dict[Future, str] = {}

        def settle(result: CheckResult):
            results[result.name] = result
            HarnessController._log_result(result)

        with ThreadPoolExecutor(max_workers=workers) as executor:
            while pending or running:
                for name in list(pending):
                    node = graph.node(name)
                    if any(prerequisite not in results for prerequisite in node.prerequisites):
                        continue

                    pending.remove(name)
                    blocked = [p for p in node.prerequisites if results[p].status.blocks_dependents()]
                    if blocked:
                        settle(CheckResult.skipped(name, blocked))
                    else:
                        running[executor.submit(HarnessController.run_node, node, config, seed)] = name

                if not running:
                    continue

                done, _ = wait(running, return_when=FIRST_COMPLETED)
                for future in done:
                    running.pop(future)
                    settle(future.result())

        return CheckReport(
            results=[results[name] for name in order],
            config=config.to_json(),
            seed=seed,
            timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        )
