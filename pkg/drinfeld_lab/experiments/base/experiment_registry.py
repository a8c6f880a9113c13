"""
Experiment Registry

Maps experiment kinds to their implementation classes. Experiment modules
under drinfeld_lab.experiments.tasks register themselves with the
`register_experiment` decorator when imported; `discover_experiments`
imports every module of that package.
"""

import importlib
import inspect
import logging
import pkgutil
from typing import Any, Dict, List, Optional, Set, Type, Union

from .data_models import ExperimentInfo, ExperimentKind, ValidationResult
from .experiment import Experiment, ExperimentNotFoundError

logger = logging.getLogger(__name__)

TASKS_PACKAGE = "drinfeld_lab.experiments.tasks"


class ExperimentRegistry:
    """
    Registry for experiment kinds with discovery and validation.
    """

    def __init__(self):
        self._experiments: Dict[ExperimentKind, Type[Experiment]] = {}
        self._experiment_info: Dict[ExperimentKind, ExperimentInfo] = {}
        self._experiment_metadata: Dict[ExperimentKind, Dict[str, Any]] = {}
        self._registered_modules: Set[str] = set()

    def register_experiment(
        self,
        experiment_class: Type[Experiment],
        kind: Union[ExperimentKind, str],
        description: Optional[str] = None,
        version: str = "1.0.0",
        **metadata,
    ) -> bool:
        """
        Register an experiment class.

        Args:
            experiment_class: class inheriting from Experiment
            kind: experiment kind it implements
            description: one-line description shown by the CLI
            version: experiment version
            **metadata: additional metadata

        Returns:
            True if registration successful, False otherwise
        """
        try:
            if not issubclass(experiment_class, Experiment):
                logger.error(f"Experiment class {experiment_class.__name__} must inherit from Experiment")
                return False

            kind = ExperimentKind(kind)
            existing = self._experiments.get(kind)
            if existing is experiment_class:
                return True
            if existing is not None:
                existing_version = self._experiment_info[kind].version
                if version > existing_version:
                    logger.info(f"Updating experiment '{kind.value}' from v{existing_version} to v{version}")
                else:
                    logger.error(f"Experiment '{kind.value}' v{version} conflicts with existing v{existing_version}")
                    return False

            try:
                info = experiment_class().get_experiment_info()
            except Exception as e:
                logger.error(f"Failed to get experiment info for {experiment_class.__name__}: {e}")
                return False

            self._experiments[kind] = experiment_class
            self._experiment_info[kind] = info
            self._experiment_metadata[kind] = {
                "kind": kind.value,
                "description": description or info.description,
                "version": version,
                "class_name": experiment_class.__name__,
                "module": experiment_class.__module__,
                **metadata,
            }
            logger.debug(f"Registered experiment: {kind.value} v{version}")
            return True

        except Exception as e:
            logger.error(f"Failed to register experiment {experiment_class.__name__}: {e}")
            return False

    def unregister_experiment(self, kind: Union[ExperimentKind, str]) -> bool:
        kind = ExperimentKind(kind)
        if kind not in self._experiments:
            logger.warning(f"Experiment '{kind.value}' not found for unregistration")
            return False
        del self._experiments[kind]
        del self._experiment_info[kind]
        del self._experiment_metadata[kind]
        logger.info(f"Unregistered experiment: {kind.value}")
        return True

    def get_experiment_class(self, kind: Union[ExperimentKind, str]) -> Type[Experiment]:
        """
        Get the experiment class for a kind.

        Raises:
            ExperimentNotFoundError: if nothing is registered for the kind
        """
        experiment_class = self._experiments.get(ExperimentKind(kind))
        if experiment_class is None:
            raise ExperimentNotFoundError(f"no experiment registered for '{ExperimentKind(kind).value}'")
        return experiment_class

    def get_experiment_info(self, kind: Union[ExperimentKind, str]) -> Optional[ExperimentInfo]:
        return self._experiment_info.get(ExperimentKind(kind))

    def list_experiments(self) -> List[ExperimentKind]:
        """Registered kinds in declaration order"""
        return [kind for kind in ExperimentKind if kind in self._experiments]

    def list_experiment_info(self) -> List[ExperimentInfo]:
        return [self._experiment_info[kind] for kind in self.list_experiments()]

    def validate_experiment(self, kind: Union[ExperimentKind, str]) -> ValidationResult:
        """
        Validate a registered experiment.

        Args:
            kind: experiment kind to validate

        Returns:
            ValidationResult with any issues found
        """
        result = ValidationResult(is_valid=True)
        kind = ExperimentKind(kind)
        if kind not in self._experiments:
            result.add_error(f"Experiment '{kind.value}' not found")
            return result

        experiment_class = self._experiments[kind]
        if inspect.isabstract(experiment_class):
            result.add_error(f"{experiment_class.__name__} does not implement every abstract method")
        if getattr(experiment_class, "parameters_model", None) is None:
            result.add_error(f"{experiment_class.__name__} declares no parameters model")
        info = self._experiment_info[kind]
        if not info.description:
            result.add_warning("Experiment info missing description")
        return result

    def discover_experiments(self, package_path: str = TASKS_PACKAGE) -> int:
        """
        Import every module of a package and register the experiments in it.

        Returns:
            Number of experiments registered by this call
        """
        discovered_count = 0
        try:
            package = importlib.import_module(package_path)
        except ImportError:
            logger.warning(f"Experiments package '{package_path}' not found - skipping discovery")
            return 0

        for _, module_name, ispkg in pkgutil.iter_modules(package.__path__):
            full_module_name = f"{package_path}.{module_name}"
            if ispkg or full_module_name in self._registered_modules:
                continue
            try:
                module = importlib.import_module(full_module_name)
            except Exception as e:
                logger.error(f"Failed to load module '{full_module_name}': {e}")
                continue
            self._registered_modules.add(full_module_name)

            for _, obj in inspect.getmembers(module, inspect.isclass):
                if issubclass(obj, Experiment) and obj is not Experiment and obj.__module__ == full_module_name:
                    metadata = getattr(obj, "_experiment_metadata", None)
                    if metadata is None:
                        logger.warning(f"{obj.__name__} has no registration metadata - skipping")
                        continue
                    if self.register_experiment(obj, **metadata):
                        discovered_count += 1

        logger.debug(f"Experiment discovery completed: {discovered_count} experiments in '{package_path}'")
        return discovered_count

    def get_registry_stats(self) -> Dict[str, Any]:
        """Get registry statistics"""
        return {
            "total_experiments": len(self._experiments),
            "registered_modules": len(self._registered_modules),
            "experiments_by_version": {
                kind.value: metadata.get("version", "unknown") for kind, metadata in self._experiment_metadata.items()
            },
        }


# Global registry instance
_global_registry = ExperimentRegistry()


def get_registry() -> ExperimentRegistry:
    """Get the global experiment registry"""
    return _global_registry


def register_experiment(
    kind: Union[ExperimentKind, str],
    description: Optional[str] = None,
    version: str = "1.0.0",
    **metadata,
):
    """
    Decorator for registering experiments.

    Usage:
        @register_experiment(
            kind=ExperimentKind.TORSION,
            description="Torsion counts of reductions",
            version="1.0.0",
        )
        class TorsionExperiment(Experiment):
            pass
    """

    def decorator(experiment_class: Type[Experiment]):
        experiment_class._experiment_metadata = {
            "kind": ExperimentKind(kind),
            "description": description,
            "version": version,
            **metadata,
        }
        try:
            get_registry().register_experiment(experiment_class, kind, description, version, **metadata)
        except Exception as e:
            logger.warning(f"Failed to register experiment {experiment_class.__name__} via decorator: {e}")
        return experiment_class

    return decorator


# Convenience functions
def list_experiments() -> List[ExperimentKind]:
    """List all registered experiment kinds"""
    return get_registry().list_experiments()


def get_experiment_class(kind: Union[ExperimentKind, str]) -> Type[Experiment]:
    """Get experiment class by kind"""
    return get_registry().get_experiment_class(kind)


def get_experiment_info(kind: Union[ExperimentKind, str]) -> Optional[ExperimentInfo]:
    """Get experiment info by kind"""
    return get_registry().get_experiment_info(kind)


def discover_experiments() -> int:
    """Discover all experiment kinds"""
    return get_registry().discover_experiments()
