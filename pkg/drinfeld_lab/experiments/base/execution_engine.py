"""
Experiment Execution Engine

Runs one experiment per call: validates the parameters, builds the module,
executes the experiment in a worker thread under the configured timeout,
maps failures to exit statuses and writes the report.
"""

import asyncio
import logging
import os
import tempfile
import time
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from drinfeld_lab.core.config import get_settings
from drinfeld_lab.core.serialization import canonical_json, to_jsonable

from ..utils.error_handler import get_error_handler, handle_experiment_error
from ..utils.progress_tracker import create_progress_tracker
from .data_models import ExperimentConfig, ExperimentReport, ExperimentStatus, ProgressStage
from .experiment import Experiment, ExperimentContext, ExperimentTimeoutError
from .experiment_registry import ExperimentRegistry, get_registry

logger = logging.getLogger(__name__)


class ExperimentEngine:
    """
    Asynchronous execution engine for experiments.

    The algebra is synchronous and CPU-bound; the engine keeps the event
    loop free by running it in a thread, and place sweeps inside it may fan
    out to a process pool.
    """

    def __init__(self, registry: Optional[ExperimentRegistry] = None):
        self._registry = registry or get_registry()
        self._runs = 0
        self._failures = 0

    def prepare(self, config: ExperimentConfig) -> Tuple[Experiment, ExperimentContext]:
        """Instantiate the experiment, validate its parameters and build the module."""
        self._registry.discover_experiments()
        experiment = self._registry.get_experiment_class(config.kind)()
        tracker = create_progress_tracker(config.kind.value)
        tracker.start_stage(ProgressStage.VALIDATING)
        parameters = experiment.validate_parameters(config)
        module = config.module.build(config.q)
        return experiment, ExperimentContext(config, parameters, module, tracker)

    async def run(self, config: ExperimentConfig, output: Optional[Union[str, Path]] = None) -> ExperimentReport:
        """
        Run an experiment to completion.

        Args:
            config: validated experiment config
            output: report path; defaults to config.output, no file when both are unset

        Returns:
            The report, also written to the output path
        """
        settings = get_settings()
        report = ExperimentReport(
            config=config.canonical(),
            config_hash=config.config_hash,
            tool_version=settings.app_version,
            status=ExperimentStatus.RUNNING,
        )
        start = time.perf_counter()
        self._runs += 1
        logger.info(f"Starting {config.kind.value} experiment ({config.config_hash[:12]}, {config.workers} workers)")

        context: Optional[ExperimentContext] = None
        experiment: Optional[Experiment] = None
        try:
            experiment, context = self.prepare(config)
            try:
                payload = await asyncio.wait_for(
                    asyncio.to_thread(self._execute, experiment, context),
                    timeout=settings.experiment_timeout_seconds,
                )
            except asyncio.TimeoutError:
                logger.warning(
                    f"{config.kind.value} experiment timed out after {settings.experiment_timeout_seconds}s; "
                    "its worker thread keeps running detached until the computation returns"
                )
                raise ExperimentTimeoutError(
                    f"experiment exceeded {settings.experiment_timeout_seconds}s",
                    config.kind.value,
                    {"timeout_seconds": settings.experiment_timeout_seconds},
                )
            report.payload = to_jsonable(payload)
            report.verdicts = experiment.verdicts(report.payload)
            report.skips = experiment.skips(report.payload)
            report.exit_status = max((v.exit_status for v in report.verdicts), default=0)
            report.status = ExperimentStatus.COMPLETED

        except Exception as e:
            self._failures += 1
            if context is not None:
                context.progress.report_error(e, {"kind": config.kind.value})
            if experiment is not None and context is not None:
                experiment.on_error(context, e)
            info = handle_experiment_error(e, config.kind.value)
            report.status = ExperimentStatus.FAILED
            report.error_message = info.technical_message
            report.error_category = info.category.value
            report.error_details = {**info.details, "suggested_actions": info.suggested_actions}
            report.exit_status = info.exit_status
            if info.verdict is not None:
                report.verdicts = [info.verdict]

        report.wall_time_seconds = time.perf_counter() - start
        if context is not None:
            context.progress.complete(report.status.value)
            logger.debug(f"Performance: {context.progress.get_performance_stats()}")

        target = output or config.output
        if target:
            self.write_report(report, target)
        logger.info(report.summary())
        return report

    def _execute(self, experiment: Experiment, context: ExperimentContext) -> Dict[str, Any]:
        experiment.pre_execute(context)
        context.progress.start_stage(ProgressStage.COMPUTING)
        payload = experiment.execute(context)
        experiment.post_execute(context, payload)
        return payload

    @staticmethod
    def write_report(report: ExperimentReport, path: Union[str, Path]) -> Path:
        """Write the report as canonical JSON, atomically."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=".report-", suffix=".json")
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(canonical_json(report.model_dump(mode="json")))
            handle.write("\n")
        os.replace(tmp_name, path)
        logger.info(f"Report written to {path}")
        return path

    def get_engine_stats(self) -> Dict[str, Any]:
        """Get engine statistics"""
        return {
            "runs": self._runs,
            "failures": self._failures,
            "registered_experiments": [k.value for k in self._registry.list_experiments()],
            "registry": self._registry.get_registry_stats(),
            "errors": get_error_handler().get_error_statistics(),
        }


# Global execution engine instance
_global_engine: Optional[ExperimentEngine] = None


def get_execution_engine() -> ExperimentEngine:
    """Get the global execution engine"""
    global _global_engine
    if _global_engine is None:
        _global_engine = ExperimentEngine()
    return _global_engine
