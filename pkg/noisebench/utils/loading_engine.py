"""Loading YAML bench configurations with environment expansion, and parsing parameter overrides."""

from __future__ import annotations
import os
from typing import Any, Iterable
from pathlib import Path
from dataclasses import dataclass

import yaml
from dotenv import load_dotenv
from loguru import logger

from noisebench.utils.errors import ParameterError


THREADS_ENV_VAR = "NOISEBENCH_THREADS"
DEFAULT_MAX_THREADS = 8

CONFIG_KEYS = frozenset({"input", "seed", "clip", "threads", "noise", "filters", "outputs"})
OUTPUT_KEYS = frozenset({"csv", "markdown", "dump_dir", "log_dir"})


def _expand_env_vars(obj: Any) -> Any:
    """Recursively expand environment variables in nested structures."""
    if isinstance(obj, dict):
        return {k: _expand_env_vars(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_expand_env_vars(i) for i in obj]
    if isinstance(obj, str):
        return os.path.expandvars(obj)
    return obj


def load_config(config_path: str | Path) -> dict[str, Any]:
    """Convenience wrapper returning ``ConfigLoader(config_path).load()``."""
    return ConfigLoader(Path(config_path)).load()


@dataclass(slots=True)
class ConfigLoader:
    path: Path

    def load(self) -> dict[str, Any]:
        load_dotenv()

        if not self.path.is_file():
            logger.error(f"Configuration file not found: {self.path}")
            raise FileNotFoundError(self.path)

        try:
            text = self.path.read_text(encoding="utf-8")
            logger.debug(f"Read configuration from {self.path}")
            config = yaml.safe_load(os.path.expandvars(text)) or {}
        except yaml.YAMLError as exc:
            logger.error(f"Error parsing YAML {self.path}: {exc}")
            raise ParameterError(f"invalid YAML in {self.path}: {exc}") from exc

        if not isinstance(config, dict):
            raise ParameterError(f"configuration {self.path} must be a mapping at the top level")
        _check_config_shape(config, self.path)
        logger.debug(f"Configuration loaded successfully from {self.path}")
        return _expand_env_vars(config)


def _check_config_shape(config: dict[str, Any], path: Path) -> None:
    unknown = sorted(set(config) - CONFIG_KEYS)
    if unknown:
        raise ParameterError(f"unknown key(s) {', '.join(unknown)} in {path}")
    for section in ("noise", "filters"):
        table = config.get(section) or {}
        if not isinstance(table, dict) or not all(isinstance(v, dict) for v in table.values()):
            raise ParameterError(f"'{section}' in {path} must map kinds to parameter mappings")
    outputs = config.get("outputs") or {}
    if not isinstance(outputs, dict):
        raise ParameterError(f"'outputs' in {path} must be a mapping")
    unknown_outputs = sorted(set(outputs) - OUTPUT_KEYS)
    if unknown_outputs:
        raise ParameterError(f"unknown output key(s) {', '.join(unknown_outputs)} in {path}")


def _parse_scalar(text: str) -> int | float | str:
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def parse_param_overrides(items: Iterable[str] | None) -> dict[str, dict[str, Any]]:
    """Turn repeated ``kind.field=value`` strings into ``{kind: {field: value}}``."""
    overrides: dict[str, dict[str, Any]] = {}
    for item in items or ():
        target, sep, raw_value = item.partition("=")
        kind, dot, name = target.strip().partition(".")
        if not sep or not dot or not kind or not name or not raw_value.strip():
            raise ParameterError(f"override '{item}' must look like kind.field=value")
        overrides.setdefault(kind, {})[name.strip()] = _parse_scalar(raw_value.strip())
    return overrides


def merge_overrides(*layers: dict[str, dict[str, Any]] | None) -> dict[str, dict[str, Any]]:
    """Later layers win field by field."""
    merged: dict[str, dict[str, Any]] = {}
    for layer in layers:
        for kind, params in (layer or {}).items():
            merged.setdefault(kind, {}).update(params or {})
    return merged


def resolve_thread_count(explicit: int | None = None) -> int:
    """Worker threads: an explicit value, else NOISEBENCH_THREADS, else min(8, cpu count)."""
    if explicit is not None:
        if isinstance(explicit, bool) or not isinstance(explicit, int) or explicit < 1:
            raise ParameterError(f"thread count must be a positive integer, got {explicit!r}")
        return explicit
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None or not raw.strip():
        return min(DEFAULT_MAX_THREADS, os.cpu_count() or 1)
    try:
        threads = int(raw)
    except ValueError:
        raise ParameterError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}") from None
    if threads < 1:
        raise ParameterError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}")
    return threads
