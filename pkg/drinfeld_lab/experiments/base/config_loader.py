"""
Experiment config files

TOML documents with top-level `kind`, `q`, `seed`, optional `workers` and
`output`, a [module] table and a [parameters] table. Command-line flags
override top-level keys.
"""

import logging

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import ValidationError

from drinfeld_lab.core.config import get_settings
from drinfeld_lab.core.exceptions import ConfigurationError

from .data_models import ExperimentConfig

logger = logging.getLogger(__name__)


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    try:
        with open(path, "rb") as handle:
            return tomllib.load(handle)
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}", {"path": str(path)})
    except tomllib.TOMLDecodeError as e:
        raise ConfigurationError(f"config file is not valid TOML: {e}", {"path": str(path)})


def parse_config(raw: Dict[str, Any], overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """
    Validate a raw config document.

    Overrides with a value of None are ignored; `workers` falls back to the
    DRINFELD_LAB_DEFAULT_WORKERS setting; a `kind` override must agree
    with the file when the file names one.
    """
    data = dict(raw)
    data.setdefault("workers", get_settings().default_workers)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key == "kind" and data.get("kind") not in (None, value):
            raise ConfigurationError(
                f"config is a '{data['kind']}' experiment, not '{value}'",
                {"config_kind": data["kind"], "command": value},
            )
        data[key] = value

    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(
            "invalid experiment config",
            {"errors": [f"{'.'.join(str(x) for x in err['loc'])}: {err['msg']}" for err in e.errors()]},
        )


def load_config(path: Union[str, Path], **overrides: Any) -> ExperimentConfig:
    config = parse_config(read_config_file(path), overrides)
    logger.debug(f"Loaded {config.kind.value} config from {path} ({config.config_hash[:12]})")
    return config
