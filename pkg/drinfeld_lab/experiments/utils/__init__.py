"""
Experiment Framework Utils Module

Progress tracking and error classification for experiment runs.
"""

from .progress_tracker import (
    ExperimentProgressTracker,
    create_progress_tracker,
)

from .error_handler import (
    ErrorCategory,
    ErrorInfo,
    ExperimentErrorClassifier,
    ExperimentErrorHandler,
    get_error_handler,
    handle_experiment_error,
)

__all__ = [
    # Progress tracking
    "ExperimentProgressTracker",
    "create_progress_tracker",

    # Error handling
    "ErrorCategory",
    "ErrorInfo",
    "ExperimentErrorClassifier",
    "ExperimentErrorHandler",
    "get_error_handler",
    "handle_experiment_error",
]
