"""
Abstract Experiment Base Class

This module defines the abstract base class that every experiment kind
inherits from, the context handed to a running experiment, and the
exceptions raised by the framework itself.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, ClassVar, Dict, List, Optional, Sequence, Tuple, Type

from pydantic import BaseModel, ValidationError

from drinfeld_lab.algebra.fields import Element
from drinfeld_lab.algebra.poly import Poly, Var
from drinfeld_lab.arithmetic.drinfeld import DrinfeldModule
from drinfeld_lab.core.exceptions import ConfigurationError, DomainError

from .data_models import (
    BaseKind,
    ExperimentConfig,
    ExperimentInfo,
    ModuleSpec,
    SkipRecord,
    ValidationResult,
    Verdict,
)

if TYPE_CHECKING:
    from ..utils.progress_tracker import ExperimentProgressTracker

logger = logging.getLogger(__name__)


@dataclass
class ExperimentContext:
    """
    Everything an experiment needs while it runs: the validated config and
    parameters, the module built from the config, the worker count and a
    progress tracker.
    """

    config: ExperimentConfig
    parameters: BaseModel
    module: DrinfeldModule
    progress: "ExperimentProgressTracker"

    @property
    def workers(self) -> int:
        return self.config.workers

    @property
    def seed(self) -> int:
        return self.config.seed

    def poly(self, data: Sequence[Any], var: Optional[Var] = None) -> Poly:
        """A polynomial over F_q from its ascending coefficient list."""
        return Poly.decode(self.module.fq, data, var or self.module.var)

    def theta_poly(self, data: Sequence[Any]) -> Poly:
        return Poly.decode(self.module.fq, data, Var.THETA)

    def level(self, data: Sequence[Any], var: Optional[Var] = None) -> Poly:
        """A monic level of positive degree."""
        a = self.poly(data, var)
        if a.degree < 1:
            raise DomainError("a level must have positive degree", {"level": list(data)})
        return a.monic()

    def element(self, data: Any) -> Element:
        """An element of the field of definition of the module."""
        return self.module.base_field.decode(data)

    def elements(self, data: Sequence[Any]) -> List[Element]:
        return [self.element(x) for x in data]

    def build_module(self, spec: ModuleSpec) -> DrinfeldModule:
        return spec.build(self.config.q)


class Experiment(ABC):
    """
    Abstract base class for experiments.

    Subclasses declare a pydantic `parameters_model` for their [parameters]
    table and the bases they accept, and implement `execute` and `verdicts`.
    """

    parameters_model: ClassVar[Type[BaseModel]]
    bases: ClassVar[Tuple[BaseKind, ...]] = (BaseKind.RATIONAL, BaseKind.FINITE)

    def __init__(self):
        metadata = getattr(self.__class__, "_experiment_metadata", {})
        self.kind = metadata.get("kind")
        self.description = metadata.get("description", "")
        self.version = metadata.get("version", "1.0.0")

    def get_experiment_info(self) -> ExperimentInfo:
        """
        Get experiment metadata and capabilities.

        Returns:
            ExperimentInfo built from the registration metadata
        """
        return ExperimentInfo(
            kind=self.kind,
            description=self.description,
            version=self.version,
            bases=list(self.bases),
            parameters_schema=self.get_parameters_schema(),
        )

    def get_parameters_schema(self) -> Dict[str, Any]:
        """JSON schema of the [parameters] table"""
        return self.parameters_model.model_json_schema()

    def validate_parameters(self, config: ExperimentConfig) -> BaseModel:
        """
        Parse and check the parameters of a config.

        Raises:
            ConfigurationError: if the parameters do not fit the experiment
        """
        if config.module.base not in self.bases:
            raise ConfigurationError(
                f"{config.kind.value} experiments need a {' or '.join(b.value for b in self.bases)} base",
                {"base": config.module.base.value},
            )
        try:
            parameters = self.parameters_model.model_validate(config.parameters)
        except ValidationError as e:
            raise ConfigurationError(
                f"invalid parameters for {config.kind.value}",
                {"errors": [f"{'.'.join(str(x) for x in err['loc'])}: {err['msg']}" for err in e.errors()]},
            )

        result = self.check_parameters(parameters, config)
        for warning in result.warnings:
            logger.warning(f"{config.kind.value}: {warning}")
        if not result.is_valid:
            raise ConfigurationError(f"invalid parameters for {config.kind.value}", {"errors": result.errors})
        return parameters

    def check_parameters(self, parameters: BaseModel, config: ExperimentConfig) -> ValidationResult:
        """Semantic checks beyond the schema. Override in subclasses if needed."""
        return ValidationResult()

    @abstractmethod
    def execute(self, context: ExperimentContext) -> Dict[str, Any]:
        """
        Run the experiment.

        Args:
            context: Validated config, parameters and module

        Returns:
            JSON-ready payload; identical inputs must give an identical payload
        """

    @abstractmethod
    def verdicts(self, payload: Dict[str, Any]) -> List[Verdict]:
        """Verdicts read off a payload"""

    def skips(self, payload: Dict[str, Any]) -> List[SkipRecord]:
        """Places the experiment left out, with reasons"""
        return [SkipRecord(**s) for s in payload.get("skips", [])]

    # Optional hooks that subclasses can override

    def pre_execute(self, context: ExperimentContext) -> None:
        """Called before execute()"""
        pass

    def post_execute(self, context: ExperimentContext, payload: Dict[str, Any]) -> None:
        """Called after a successful execute()"""
        pass

    def on_error(self, context: ExperimentContext, error: Exception) -> None:
        """Called when execute() raises"""
        pass


class ExperimentError(Exception):
    """Base exception for framework errors"""

    def __init__(self, message: str, experiment: Optional[str] = None, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.experiment = experiment
        self.details = details or {}
        super().__init__(message)


class ExperimentNotFoundError(ExperimentError):
    """No experiment is registered for a kind"""
    pass


class ExperimentTimeoutError(ExperimentError):
    """Experiment exceeded the configured timeout"""
    pass
