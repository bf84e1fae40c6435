# functions/batch/common.py
"""
Shared plumbing for the batch pipelines.

- setup(): load parameters, configure root logging, create output dirs.
- guarded(): map failures to exit codes (2 = config/validation, 1 = functional).
- report_header(): the versioned header every JSON report starts with.
- add_synthesis_arguments() / synthesis_overrides(): the tree/n/strategy/variant flags
  shared by `gen` and `verify`.
"""

from __future__ import annotations

import argparse
from typing import Any, Callable, Dict, Optional

from pydantic import ValidationError

from functions.utils.config import ParametersConfig, ensure_dirs, load_parameters
from functions.utils.logging import configure_logging, get_logger

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def setup(parameters_path: str) -> ParametersConfig:
    params = load_parameters(parameters_path)
    configure_logging(
        level=params.logging.level,
        log_file=params.logging.log_file,
        silence_noisy_logs=params.logging.silence_noisy_logs,
    )
    ensure_dirs(params)
    return params


def guarded(command: str, fn: Callable[[], int]) -> int:
    logger = get_logger(__name__)
    try:
        return fn()
    except (ValidationError, ValueError, FileNotFoundError) as e:
        logger.error("%s: %s", command, e)
        return EXIT_CONFIG


def report_header(command: str, config: Dict[str, Any], seed: Optional[int]) -> Dict[str, Any]:
    return {"schema": SCHEMA_VERSION, "command": command, "config": config, "seed": seed}


def add_synthesis_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--parameters-path", default="configs/parameters.yaml")
    parser.add_argument("--tree", default=None, help="brent-kung | sklansky | kogge-stone | han-carlson | ladner-fischer")
    parser.add_argument("--n", type=int, required=True, help="Operand width (power of two).")
    parser.add_argument("--strategy", default=None, help="toffoli | and")
    parser.add_argument("--uncompute", action=argparse.BooleanOptionalAction, default=None)
    parser.add_argument("--p-in-place", action=argparse.BooleanOptionalAction, default=None)
    variant = parser.add_mutually_exclusive_group()
    variant.add_argument("--subtract", action="store_true")
    variant.add_argument("--ling", action="store_true", help="Ling-expanded Kogge-Stone adder.")
    variant.add_argument("--modular", action="store_true", help="Modular adder (a + b) mod N.")


def synthesis_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Keyword arguments for build_target() taken from parsed flags."""
    if args.ling:
        variant = "ling"
    elif args.subtract:
        variant = "subtract"
    else:
        variant = "add"
    return {
        "tree": args.tree,
        "n": args.n,
        "strategy": args.strategy,
        "uncompute": args.uncompute,
        "p_in_place": args.p_in_place,
        "variant": variant,
        "modular": bool(args.modular),
    }


def progress(logger: Any, tag: str, done: int, total: int, every: int) -> None:
    if done == 1 or (every > 0 and done % every == 0) or done == total:
        logger.info("%s: progress %d/%d (%0.1f%%)", tag, done, total, (done / total * 100.0 if total else 100.0))


__all__ = [
    "SCHEMA_VERSION",
    "EXIT_OK",
    "EXIT_FAILURE",
    "EXIT_CONFIG",
    "setup",
    "guarded",
    "report_header",
    "add_synthesis_arguments",
    "synthesis_overrides",
    "progress",
]
