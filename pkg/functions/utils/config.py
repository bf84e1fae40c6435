# functions/utils/config.py
"""
Config Loader — Prefix-Tree Adder Toolkit (Typed YAML Configs)

Intent
- Load + validate configs/parameters.yaml into typed pydantic models.
- Resolve the verification seed from flag / environment / config.
- Ensure output directories exist.

What this module guarantees
- Strict validation: invalid configs fail fast with actionable pydantic errors
  ("<group>.<field> must ...").
- Unicode whitespace hardening: NBSP/BOM/narrow NBSP are normalized before YAML parsing.
- Backwards compatibility (limited): `sweep.n_values` accepts a comma-separated
  string ("4,8,16") besides a YAML list.
- Deterministic defaults: omitted keys take model defaults.

Config models
- ProjectConfig: name
- SynthesisConfig: tree, strategy (canonical names), uncompute, p_in_place (CLI defaults)
- VerifyConfig: seed, trials, exhaustive_max_n (<= 10), batch_size, max_workers, progress_log_every
- SweepConfig: n_values (powers of two), radix (optional, > 2), measured_max_n
- LoggingConfig: level, log_file, silence_noisy_logs
- OutputsConfig: artifacts_dir, circuits_dir, reports_dir, sweep_csv, sweep_markdown, sweep_html

Primary functions
- load_parameters(path="configs/parameters.yaml") -> ParametersConfig
- resolve_seed(flag, params) -> int  (flag > QPREFIX_SEED > verify.seed)
- ensure_dirs(params) -> None

External dependencies
- PyYAML: yaml.safe_load
- Pydantic v2: BaseModel, validators, model_validate
- python-dotenv: load_dotenv (QPREFIX_SEED from a local .env)
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from functions.utils.logging import get_logger

SEED_ENV = "QPREFIX_SEED"
EXHAUSTIVE_CEILING = 10

# canonical names; the batch layer turns them into TreeKind / Strategy
TREE_NAMES = {
    "brent-kung": "brent-kung",
    "bk": "brent-kung",
    "sklansky": "sklansky",
    "sk": "sklansky",
    "kogge-stone": "kogge-stone",
    "ks": "kogge-stone",
    "han-carlson": "han-carlson",
    "hc": "han-carlson",
    "ladner-fischer": "ladner-fischer",
    "lf": "ladner-fischer",
}
STRATEGY_NAMES = {
    "toffoli": "toffoli",
    "toffoli_only": "toffoli",
    "s1": "toffoli",
    "and": "and",
    "logical_and": "and",
    "s2": "and",
}


# -----------------------------
# Parameter models
# -----------------------------
class ProjectConfig(BaseModel):
    name: str = "qprefix"


class SynthesisConfig(BaseModel):
    tree: str = "sklansky"
    strategy: str = "and"
    uncompute: bool = True
    p_in_place: bool = False

    @field_validator("tree", mode="before")
    @classmethod
    def _parse_tree(cls, v: Any) -> str:
        key = str(v).strip().lower().replace("_", "-")
        if key not in TREE_NAMES:
            raise ValueError(f"synthesis.tree must be one of {sorted(set(TREE_NAMES.values()))}, got {v!r}")
        return TREE_NAMES[key]

    @field_validator("strategy", mode="before")
    @classmethod
    def _parse_strategy(cls, v: Any) -> str:
        key = str(v).strip().lower().replace("-", "_")
        if key not in STRATEGY_NAMES:
            raise ValueError(f"synthesis.strategy must be toffoli/s1 or and/s2, got {v!r}")
        return STRATEGY_NAMES[key]


class VerifyConfig(BaseModel):
    seed: int = 7
    trials: int = 1000
    exhaustive_max_n: int = EXHAUSTIVE_CEILING
    batch_size: int = 4096
    max_workers: int = 4
    progress_log_every: int = 8

    @field_validator("trials", "batch_size", "max_workers", "progress_log_every")
    @classmethod
    def _validate_positive_int(cls, v: int, info) -> int:
        if v <= 0:
            raise ValueError(f"verify.{info.field_name} must be > 0")
        return v

    @field_validator("exhaustive_max_n")
    @classmethod
    def _validate_exhaustive(cls, v: int) -> int:
        if v < 2 or v > EXHAUSTIVE_CEILING:
            raise ValueError(f"verify.exhaustive_max_n must be within [2, {EXHAUSTIVE_CEILING}]")
        return v


class SweepConfig(BaseModel):
    n_values: List[int] = Field(default_factory=lambda: [4, 8, 16, 32, 64, 128, 256, 512, 1024])
    radix: Optional[int] = None
    measured_max_n: int = 64

    @field_validator("n_values", mode="before")
    @classmethod
    def _parse_n_values(cls, v: Any) -> Any:
        if isinstance(v, str):
            return [int(s) for s in v.replace(" ", "").split(",") if s]
        return v

    @field_validator("n_values")
    @classmethod
    def _validate_n_values(cls, v: List[int]) -> List[int]:
        if not v:
            raise ValueError("sweep.n_values must not be empty")
        for n in v:
            if n < 2 or n & (n - 1):
                raise ValueError(f"sweep.n_values: {n}: n must be a power of two")
        return sorted(set(v))

    @field_validator("radix")
    @classmethod
    def _validate_radix(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v <= 2:
            raise ValueError("sweep.radix must be > 2")
        return v

    @field_validator("measured_max_n")
    @classmethod
    def _validate_measured(cls, v: int) -> int:
        if v < 0:
            raise ValueError("sweep.measured_max_n must be >= 0")
        return v


class LoggingConfig(BaseModel):
    level: str = "INFO"
    log_file: Optional[str] = None
    silence_noisy_logs: bool = True

    @field_validator("level")
    @classmethod
    def _validate_level(cls, v: str) -> str:
        if v.upper() not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError("logging.level must be one of DEBUG/INFO/WARNING/ERROR/CRITICAL")
        return v.upper()


class OutputsConfig(BaseModel):
    artifacts_dir: str = "artifacts"
    circuits_dir: str = "artifacts/circuits"
    reports_dir: str = "artifacts/reports"

    sweep_csv: str = "artifacts/reports/comparison_sweep.csv"
    sweep_markdown: str = "artifacts/reports/comparison_sweep.md"
    sweep_html: str = "artifacts/reports/comparison_sweep.html"


class ParametersConfig(BaseModel):
    project: ProjectConfig = Field(default_factory=ProjectConfig)
    synthesis: SynthesisConfig = Field(default_factory=SynthesisConfig)
    verify: VerifyConfig = Field(default_factory=VerifyConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    outputs: OutputsConfig = Field(default_factory=OutputsConfig)

    @model_validator(mode="before")
    @classmethod
    def _backward_compat_keys(cls, data: Any) -> Any:
        """Accept `synth` as an alias group for `synthesis`."""
        if isinstance(data, dict) and "synthesis" not in data and isinstance(data.get("synth"), dict):
            data = dict(data)
            data["synthesis"] = data.pop("synth")
        return data


# -----------------------------
# YAML helpers
# -----------------------------
def _load_yaml(path: str) -> Dict[str, Any]:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"YAML file not found: {path}")

    text = p.read_text(encoding="utf-8")
    # sanitize before YAML parse (NBSP / BOM / narrow NBSP)
    for ch in ["\u00A0", "\u2007", "\u202F", "\uFEFF"]:
        text = text.replace(ch, " ")

    data = yaml.safe_load(text) or {}
    if not isinstance(data, dict):
        raise ValueError(f"YAML root must be a mapping/object: {path}")
    return data


def load_parameters(path: str = "configs/parameters.yaml") -> ParametersConfig:
    logger = get_logger(__name__)
    raw = _load_yaml(path)
    try:
        params = ParametersConfig.model_validate(raw)
    except ValidationError as e:
        logger.error("Invalid parameters.yaml: %s", e)
        raise
    return params


def resolve_seed(flag: Optional[int], params: ParametersConfig) -> int:
    if flag is not None:
        return int(flag)
    load_dotenv(override=False)
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError as e:
            raise ValueError(f"{SEED_ENV} must be an integer, got {env!r}") from e
    return params.verify.seed


def ensure_dirs(params: ParametersConfig) -> None:
    for d in [params.outputs.artifacts_dir, params.outputs.circuits_dir, params.outputs.reports_dir]:
        Path(d).mkdir(parents=True, exist_ok=True)


__all__ = [
    "SEED_ENV",
    "EXHAUSTIVE_CEILING",
    "ParametersConfig",
    "SweepConfig",
    "load_parameters",
    "resolve_seed",
    "ensure_dirs",
]
