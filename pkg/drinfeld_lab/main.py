"""
drinfeld-lab command line

One subcommand per experiment kind, each reading a TOML config, plus
`cache inspect` and `cache clear`. The exit status of an experiment run is
the one recorded in its report.
"""

import argparse
import asyncio
import json
import logging
import sys
from typing import List, Optional

from drinfeld_lab.core.cache import get_cache
from drinfeld_lab.core.config import get_settings
from drinfeld_lab.experiments.base import get_execution_engine, get_registry, load_config
from drinfeld_lab.experiments.utils import handle_experiment_error

logger = logging.getLogger(__name__)


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="experiment config (TOML)")
    common.add_argument("--out", default=None, help="report path; overrides `output` in the config")
    common.add_argument("--workers", type=int, default=None, help="worker processes for place sweeps")
    common.add_argument("--seed", type=int, default=None, help="overrides `seed` in the config")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ERROR or CRITICAL")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drinfeld-lab", description="Finite-level experiments on Drinfeld modules")
    parser.add_argument("--version", action="version", version=f"%(prog)s {get_settings().app_version}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = _common_flags()
    registry = get_registry()
    registry.discover_experiments()
    for info in registry.list_experiment_info():
        subparsers.add_parser(info.kind.value, parents=[common], help=info.description)

    cache_parser = subparsers.add_parser("cache", help="inspect or clear the persistent cache")
    cache_parser.add_argument("action", choices=["inspect", "clear"])
    cache_parser.add_argument("--log-level", default=None)
    return parser


def configure_logging(level: Optional[str]) -> None:
    settings = get_settings()
    name = (level or settings.log_level).upper()
    logging.basicConfig(level=getattr(logging, name, logging.INFO), format=settings.log_format)


def run_cache(action: str) -> int:
    cache = get_cache()
    if action == "clear":
        removed = cache.clear()
        print(f"removed {removed} cache entries from {cache.root}")
        return 0
    print(json.dumps(cache.inspect(), indent=2, sort_keys=True))
    return 0


def run_experiment(args: argparse.Namespace) -> int:
    try:
        config = load_config(
            args.config,
            kind=args.command,
            seed=args.seed,
            workers=args.workers,
            output=args.out,
        )
    except Exception as e:
        info = handle_experiment_error(e, args.command)
        print(f"{args.command}: {info.user_message}: {info.technical_message}", file=sys.stderr)
        for error in info.details.get("errors", []):
            print(f"  {error}", file=sys.stderr)
        return info.exit_status

    report = asyncio.run(get_execution_engine().run(config))
    print(report.summary())
    return report.exit_status


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    for problem in get_settings().validate_environment():
        logger.warning(f"Settings: {problem}")
    if args.command == "cache":
        return run_cache(args.action)
    return run_experiment(args)


if __name__ == "__main__":
    sys.exit(main())
