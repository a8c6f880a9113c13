"""
Experiment Framework

Configuration-driven experiments on Drinfeld modules. Each experiment kind
is a class registered under an ExperimentKind; the engine validates a
config, runs the experiment and writes a report whose payload is
deterministic given the config.

## Quick Start

```python
from drinfeld_lab.experiments import get_execution_engine, load_config

config = load_config("configs/image_rank2_t.toml")
report = await get_execution_engine().run(config)
print(report.summary())
```

## Components

- **Base Classes**: Abstract experiment interface and data models
- **Registry**: Experiment discovery and registration
- **Execution Engine**: Threaded execution with timeouts and report writing
- **Progress Tracking**: Stage and progress logging
- **Error Handling**: Exception classification into exit statuses
"""

from .base import (
    # Abstract base classes
    Experiment,
    ExperimentContext,

    # Data models
    ModuleSpec,
    ExperimentConfig,
    ExperimentReport,
    ExperimentInfo,
    SkipRecord,
    ValidationResult,

    # Enums
    BaseKind,
    ExperimentKind,
    ExperimentStatus,
    ProgressStage,
    Verdict,

    # Registry
    ExperimentRegistry,
    get_registry,
    register_experiment,
    list_experiments,
    get_experiment_class,
    get_experiment_info,
    discover_experiments,

    # Config files
    load_config,
    parse_config,

    # Execution engine
    ExperimentEngine,
    get_execution_engine,

    # Exceptions
    ExperimentError,
    ExperimentNotFoundError,
    ExperimentTimeoutError,
)

from .utils import (
    ErrorCategory,
    ErrorInfo,
    ExperimentErrorClassifier,
    handle_experiment_error,
    ExperimentProgressTracker,
)

__all__ = [
    # Core framework
    "Experiment",
    "ExperimentContext",
    "ModuleSpec",
    "ExperimentConfig",
    "ExperimentReport",
    "ExperimentInfo",
    "SkipRecord",
    "ValidationResult",
    "BaseKind",
    "ExperimentKind",
    "ExperimentStatus",
    "ProgressStage",
    "Verdict",

    # Registry and execution
    "ExperimentRegistry",
    "get_registry",
    "register_experiment",
    "list_experiments",
    "get_experiment_class",
    "get_experiment_info",
    "discover_experiments",
    "load_config",
    "parse_config",
    "ExperimentEngine",
    "get_execution_engine",

    # Exceptions
    "ExperimentError",
    "ExperimentNotFoundError",
    "ExperimentTimeoutError",

    # Utilities
    "ErrorCategory",
    "ErrorInfo",
    "ExperimentErrorClassifier",
    "handle_experiment_error",
    "ExperimentProgressTracker",
]
