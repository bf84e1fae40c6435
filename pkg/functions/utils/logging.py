# functions/utils/logging.py
"""
Logging Utilities — One Root Configuration for Synthesis, Verification and Sweeps

Intent
- Give every module and batch pipeline the same log format through a single
  entrypoint, `configure_logging()`.
- Correlate the records of one pipeline run via `run_id` (injected into LogRecord).
- Optionally mute INFO/DEBUG chatter from third-party libraries pulled in by the
  report writers and the test stack (markdown, numexpr via pandas, hypothesis).

What this module guarantees
- Idempotent root configuration: repeated calls never duplicate handlers.
- Stable format: timestamp | level | logger name | message.
- Optional log file next to the stream handler.
- When silencing is on, noisy namespaces are disabled and a `NoisyLibFilter`
  is installed on the root logger and on every root handler; WARNING+ always passes.

Primary API
- configure_logging(level="INFO", log_file=None, *, silence_noisy_logs=False) -> None
- get_logger(name, run_id=None) -> logging.Logger
  Lazily configures logging with defaults if nothing configured it yet.

Operational notes
- Modules never attach handlers; handlers live on root.
- Synthesis code logs circuit sizes at DEBUG; pipelines log progress at INFO.

External dependencies
- Python stdlib: `logging`, `pathlib`
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import List, Optional

_DEFAULT_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
_DEFAULT_DATEFMT = "%Y-%m-%d %H:%M:%S"

_CONFIGURED = False
_CURRENT_LOG_FILE: Optional[str] = None
_SILENCE_NOISY_LOGS: Optional[bool] = None  # None = never set explicitly

# Only namespaces that are consistently noisy at INFO/DEBUG.
_NOISY_PREFIXES: List[str] = [
    "markdown",
    "MARKDOWN",
    "numexpr",
    "hypothesis",
]


class RunIdFilter(logging.Filter):
    """Inject run_id into log records."""

    def __init__(self, run_id: Optional[str] = None) -> None:
        super().__init__()
        self.run_id = run_id

    def filter(self, record: logging.LogRecord) -> bool:
        record.run_id = self.run_id
        return True


class NoisyLibFilter(logging.Filter):
    """Drop records below `min_level` from noisy namespaces while enabled."""

    def __init__(self, *, enabled: bool, prefixes: List[str], min_level: int) -> None:
        super().__init__()
        self.enabled = enabled
        self.prefixes = prefixes
        self.min_level = min_level

    def filter(self, record: logging.LogRecord) -> bool:
        if not self.enabled or record.levelno >= self.min_level:
            return True
        return not _matches(record.name or "", self.prefixes)


def _matches(name: str, prefixes: List[str]) -> bool:
    return any(name == p or name.startswith(p + ".") for p in prefixes)


def _install_noisy_filters(*, enabled: bool) -> None:
    """Refresh the NoisyLibFilter on root and on every root handler."""
    root = logging.getLogger()
    targets: List[logging.Filterer] = [root, *root.handlers]
    for t in targets:
        for f in list(t.filters):
            if isinstance(f, NoisyLibFilter):
                t.removeFilter(f)
        t.addFilter(NoisyLibFilter(enabled=enabled, prefixes=list(_NOISY_PREFIXES), min_level=logging.WARNING))


def _apply_noisy_silencing(silence: bool) -> None:
    manager_dict = logging.Logger.manager.loggerDict  # type: ignore[attr-defined]
    names = set(_NOISY_PREFIXES) | {n for n in manager_dict if _matches(n, _NOISY_PREFIXES)}

    for name in sorted(names):
        lg = logging.getLogger(name)
        if silence:
            lg.disabled = True
            lg.propagate = False
            for h in list(lg.handlers):
                lg.removeHandler(h)
        else:
            lg.disabled = False
            lg.setLevel(logging.INFO)
            lg.propagate = True

    _install_noisy_filters(enabled=silence)


def configure_logging(
    level: str = "INFO",
    log_file: Optional[str] = None,
    *,
    silence_noisy_logs: bool = False,
) -> None:
    """
    Configure root logging (idempotent for handlers).

    A new FileHandler may be added on a later call, so the noisy filters are
    re-installed even when the silencing flag did not change.
    """
    global _CONFIGURED, _CURRENT_LOG_FILE, _SILENCE_NOISY_LOGS

    root = logging.getLogger()
    root_level = getattr(logging, level.upper(), None)
    if not isinstance(root_level, int):
        raise ValueError(f"Invalid log level: {level}")
    root.setLevel(root_level)

    formatter = logging.Formatter(fmt=_DEFAULT_FORMAT, datefmt=_DEFAULT_DATEFMT)

    has_stream = any(
        isinstance(h, logging.StreamHandler) and not isinstance(h, logging.FileHandler) for h in root.handlers
    )
    if not has_stream:
        sh = logging.StreamHandler()
        sh.setFormatter(formatter)
        root.addHandler(sh)

    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        target = Path(log_file).resolve()
        has_file = any(
            isinstance(h, logging.FileHandler) and Path(h.baseFilename).resolve() == target for h in root.handlers
        )
        if not has_file:
            fh = logging.FileHandler(log_file, encoding="utf-8")
            fh.setFormatter(formatter)
            root.addHandler(fh)
        _CURRENT_LOG_FILE = log_file

    if _SILENCE_NOISY_LOGS is None or _SILENCE_NOISY_LOGS != silence_noisy_logs:
        _apply_noisy_silencing(silence_noisy_logs)
        _SILENCE_NOISY_LOGS = silence_noisy_logs
    else:
        _install_noisy_filters(enabled=bool(_SILENCE_NOISY_LOGS))

    _CONFIGURED = True


def get_logger(name: str, run_id: Optional[str] = None) -> logging.Logger:
    if not _CONFIGURED:
        configure_logging(level="INFO", log_file=None, silence_noisy_logs=False)

    logger = logging.getLogger(name)
    if run_id is not None and not any(
        isinstance(f, RunIdFilter) and f.run_id == run_id for f in logger.filters
    ):
        logger.addFilter(RunIdFilter(run_id=run_id))
    return logger


__all__ = ["get_logger", "configure_logging", "RunIdFilter", "NoisyLibFilter"]
