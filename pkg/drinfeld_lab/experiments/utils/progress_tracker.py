"""
Progress Tracking Utilities

Stage and progress tracking for experiments. Experiments run in a worker
thread, so updates are synchronous and go to the log: stage changes at info
level, per-item progress at debug level.
"""

import logging
import time
from typing import Any, Dict, List, Optional

from drinfeld_lab.experiments.base.data_models import ProgressStage

logger = logging.getLogger(__name__)


class ExperimentProgressTracker:
    """
    Progress tracker for a single experiment run.

    Records stage durations and the number of processed items so the engine
    can attach performance statistics to the report log.
    """

    def __init__(self, name: str, log_every: int = 10):
        self.name = name
        self.log_every = max(1, log_every)

        self.start_time = time.time()
        self.stage_start_times: Dict[ProgressStage, float] = {}
        self.stage_durations: Dict[ProgressStage, float] = {}

        self.items_processed = 0
        self.errors_encountered = 0

        self.current_stage = ProgressStage.INITIALIZING
        self.current_progress = 0.0
        self.current_message = ""
        self.history: List[ProgressStage] = []

    def start_stage(self, stage: ProgressStage, message: str = ""):
        """Start a new progress stage"""
        now = time.time()

        if self.current_stage in self.stage_start_times:
            self.stage_durations[self.current_stage] = now - self.stage_start_times[self.current_stage]

        self.current_stage = stage
        self.stage_start_times[stage] = now
        self.current_message = message
        self.current_progress = 0.0
        self.history.append(stage)
        logger.info(f"[{self.name}] {stage.value}{': ' + message if message else ''}")

    def update_progress(self, current: int, total: int, message: str = ""):
        """Update progress within the current stage"""
        self.current_progress = (current / total * 100) if total > 0 else 0
        self.current_message = message or self.current_message
        self.items_processed = max(self.items_processed, current)
        if current == total or current % self.log_every == 0:
            logger.debug(f"[{self.name}] {self.current_stage.value} {current}/{total} {self.current_message}")

    def complete(self, message: str = ""):
        """Close the current stage and mark the run completed"""
        self.start_stage(ProgressStage.COMPLETED, message)
        self.current_progress = 100.0

    def report_error(self, error: Exception, context: Optional[Dict[str, Any]] = None):
        """Report an error during processing"""
        self.errors_encountered += 1
        logger.debug(f"[{self.name}] error in {self.current_stage.value}: {error} {context or ''}")

    def get_total_elapsed_time(self) -> float:
        """Get total elapsed time since start"""
        return time.time() - self.start_time

    def get_performance_stats(self) -> Dict[str, Any]:
        """Get performance statistics"""
        return {
            "total_elapsed_seconds": self.get_total_elapsed_time(),
            "items_processed": self.items_processed,
            "errors_encountered": self.errors_encountered,
            "stage_durations": {stage.value: d for stage, d in self.stage_durations.items()},
            "current_stage": self.current_stage.value,
            "current_progress_percentage": self.current_progress,
        }


def create_progress_tracker(name: str) -> ExperimentProgressTracker:
    """Create a progress tracker for one experiment run"""
    return ExperimentProgressTracker(name)
