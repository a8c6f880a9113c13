"""
Error Handling Framework

Classifies exceptions raised while running an experiment into categories,
each with an exit status, a verdict to record (when the failure itself is
an outcome, such as too few places) and suggested actions for the user.
"""

import logging
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Type

from pydantic import ValidationError

from drinfeld_lab.core.exceptions import (
    AmbientCapError,
    BadReductionError,
    CacheError,
    ConfigurationError,
    DomainError,
    DrinfeldLabException,
    EnumerationCapError,
    NonEtaleError,
    TorsionGeneratorError,
    UnderSampleError,
)
from drinfeld_lab.experiments.base.data_models import Verdict
from drinfeld_lab.experiments.base.experiment import ExperimentError, ExperimentTimeoutError

logger = logging.getLogger(__name__)


class ErrorCategory(str, Enum):
    """Error categories for classification"""
    CONFIGURATION = "configuration"
    DOMAIN = "domain"
    SAMPLING = "sampling"
    ENUMERATION = "enumeration"
    TIMEOUT = "timeout"
    INTERNAL = "internal"


EXIT_STATUS = {
    ErrorCategory.CONFIGURATION: 3,
    ErrorCategory.DOMAIN: 3,
    ErrorCategory.SAMPLING: 2,
    ErrorCategory.ENUMERATION: 2,
    ErrorCategory.TIMEOUT: 2,
    ErrorCategory.INTERNAL: 4,
}


@dataclass
class ErrorInfo:
    """Classified error information"""
    error: Exception
    category: ErrorCategory
    exit_status: int
    user_message: str
    technical_message: str
    suggested_actions: List[str]
    verdict: Optional[Verdict] = None
    details: Dict[str, Any] = field(default_factory=dict)
    timestamp: datetime = field(default_factory=lambda: datetime.now(timezone.utc))


class ExperimentErrorClassifier:
    """
    Classifier for experiment errors.

    Rules are matched in order against the exception type, so subclasses
    must come before their bases.
    """

    RULES: List[Tuple[Type[BaseException], ErrorCategory, Optional[Verdict], str]] = [
        (ValidationError, ErrorCategory.CONFIGURATION, None, "The experiment configuration is invalid."),
        (ConfigurationError, ErrorCategory.CONFIGURATION, None, "The experiment configuration is invalid."),
        (NonEtaleError, ErrorCategory.CONFIGURATION, None, "The level meets the characteristic of the module."),
        (
            TorsionGeneratorError,
            ErrorCategory.DOMAIN,
            None,
            "A generator of M is a torsion point; M must be torsion-free.",
        ),
        (BadReductionError, ErrorCategory.DOMAIN, None, "The module has bad reduction at the requested place."),
        (DomainError, ErrorCategory.DOMAIN, None, "The requested computation is outside its domain."),
        (UnderSampleError, ErrorCategory.SAMPLING, Verdict.UNDER_SAMPLE, "Too few usable places for the test."),
        (EnumerationCapError, ErrorCategory.ENUMERATION, Verdict.INCONCLUSIVE, "An enumeration exceeded its cap."),
        (AmbientCapError, ErrorCategory.ENUMERATION, Verdict.INCONCLUSIVE, "The torsion needs too large a field."),
        (ExperimentTimeoutError, ErrorCategory.TIMEOUT, Verdict.INCONCLUSIVE, "The experiment timed out."),
        (CacheError, ErrorCategory.INTERNAL, None, "The cache could not be used."),
    ]

    @classmethod
    def classify_error(cls, error: Exception) -> ErrorInfo:
        """
        Classify an error.

        Args:
            error: Exception to classify

        Returns:
            ErrorInfo with category, exit status and suggested actions
        """
        category, verdict, user_message = ErrorCategory.INTERNAL, None, "An unexpected error occurred."
        for error_type, rule_category, rule_verdict, message in cls.RULES:
            if isinstance(error, error_type):
                category, verdict, user_message = rule_category, rule_verdict, message
                break

        details: Dict[str, Any] = {}
        if isinstance(error, (DrinfeldLabException, ExperimentError)):
            details = dict(error.details)
        elif isinstance(error, ValidationError):
            details = {"errors": [f"{'.'.join(str(x) for x in e['loc'])}: {e['msg']}" for e in error.errors()]}

        message = error.message if isinstance(error, (DrinfeldLabException, ExperimentError)) else str(error)
        return ErrorInfo(
            error=error,
            category=category,
            exit_status=EXIT_STATUS[category],
            user_message=user_message,
            technical_message=f"{type(error).__name__}: {message}",
            suggested_actions=cls._get_suggested_actions(category),
            verdict=verdict,
            details=details,
        )

    @classmethod
    def _get_suggested_actions(cls, category: ErrorCategory) -> List[str]:
        """Get suggested actions for an error category"""
        if category == ErrorCategory.CONFIGURATION:
            return [
                "Check the config file against the parameters listed by `drinfeld-lab <kind> --help`",
                "Choose a level prime to the characteristic of the module",
            ]
        elif category == ErrorCategory.DOMAIN:
            return ["Check the module coefficients and the generators of M"]
        elif category == ErrorCategory.SAMPLING:
            return ["Raise the place degree bound to include more places"]
        elif category in (ErrorCategory.ENUMERATION, ErrorCategory.TIMEOUT):
            return [
                "Lower the level or the bounds",
                "Raise the caps through the DRINFELD_LAB_* environment variables",
            ]
        else:
            return ["Re-run with --log-level DEBUG and inspect the traceback"]


class ExperimentErrorHandler:
    """
    Error handler for experiment runs.

    Classifies, logs and keeps a bounded history of handled errors.
    """

    def __init__(self):
        self.error_history: List[ErrorInfo] = []
        self.max_history_size = 100

    def handle_error(self, error: Exception, experiment: str = "unknown") -> ErrorInfo:
        error_info = ExperimentErrorClassifier.classify_error(error)
        self._log_error(error_info, experiment)
        self.error_history.append(error_info)
        if len(self.error_history) > self.max_history_size:
            self.error_history = self.error_history[-self.max_history_size:]
        return error_info

    def _log_error(self, error_info: ErrorInfo, experiment: str):
        """Log error with appropriate level"""
        message = f"{experiment}: {error_info.category.value} error: {error_info.technical_message}"
        if error_info.category == ErrorCategory.INTERNAL:
            logger.error(message, exc_info=error_info.error)
        elif error_info.verdict is not None:
            logger.warning(message)
        else:
            logger.error(message)

    def get_error_statistics(self) -> Dict[str, Any]:
        """Get error counts by category"""
        by_category: Dict[str, int] = {}
        for info in self.error_history:
            by_category[info.category.value] = by_category.get(info.category.value, 0) + 1
        return {"total_errors": len(self.error_history), "errors_by_category": by_category}


# Global error handler instance
_global_error_handler = ExperimentErrorHandler()


def get_error_handler() -> ExperimentErrorHandler:
    """Get the global error handler"""
    return _global_error_handler


def handle_experiment_error(error: Exception, experiment: str = "unknown") -> ErrorInfo:
    """Convenience function to classify and log an experiment error"""
    return get_error_handler().handle_error(error, experiment)
