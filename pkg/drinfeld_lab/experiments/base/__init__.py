"""
Experiment Framework Base Module

This module provides the core infrastructure for experiments: data models,
the abstract experiment class, the registry, config loading and the
execution engine.
"""

from .data_models import (
    # Enums
    BaseKind,
    ExperimentKind,
    ExperimentStatus,
    ProgressStage,
    Verdict,

    # Data models
    ModuleSpec,
    ExperimentConfig,
    ExperimentParameters,
    ValidationResult,
    SkipRecord,
    ExperimentReport,
    ExperimentInfo,
)

from .experiment import (
    Experiment,
    ExperimentContext,
    ExperimentError,
    ExperimentNotFoundError,
    ExperimentTimeoutError,
)

from .experiment_registry import (
    ExperimentRegistry,
    get_registry,
    register_experiment,
    list_experiments,
    get_experiment_class,
    get_experiment_info,
    discover_experiments,
)

from .config_loader import (
    read_config_file,
    parse_config,
    load_config,
)

from .execution_engine import (
    ExperimentEngine,
    get_execution_engine,
)

__all__ = [
    # Enums
    "BaseKind",
    "ExperimentKind",
    "ExperimentStatus",
    "ProgressStage",
    "Verdict",

    # Data models
    "ModuleSpec",
    "ExperimentConfig",
    "ExperimentParameters",
    "ValidationResult",
    "SkipRecord",
    "ExperimentReport",
    "ExperimentInfo",

    # Experiment base
    "Experiment",
    "ExperimentContext",
    "ExperimentError",
    "ExperimentNotFoundError",
    "ExperimentTimeoutError",

    # Registry
    "ExperimentRegistry",
    "get_registry",
    "register_experiment",
    "list_experiments",
    "get_experiment_class",
    "get_experiment_info",
    "discover_experiments",

    # Config files
    "read_config_file",
    "parse_config",
    "load_config",

    # Execution engine
    "ExperimentEngine",
    "get_execution_engine",
]
