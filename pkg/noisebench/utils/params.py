"""Building frozen parameter records from loosely typed overrides (flags, YAML, ``kind.field=value``)."""

from __future__ import annotations
from typing import Any, Mapping
from dataclasses import fields, asdict

from noisebench.utils.errors import ParameterError


def _coerce(record_name: str, name: str, default: Any, value: Any) -> Any:
    if isinstance(value, bool):
        raise ParameterError(f"{record_name}.{name} does not accept a boolean, got {value!r}")
    if isinstance(default, int):
        try:
            number = float(value)
        except (TypeError, ValueError):
            raise ParameterError(f"{record_name}.{name} must be an integer, got {value!r}") from None
        if not number.is_integer():
            raise ParameterError(f"{record_name}.{name} must be an integer, got {value!r}")
        return int(number)
    if isinstance(default, float) or default is None:
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ParameterError(f"{record_name}.{name} must be a number, got {value!r}") from None
    return str(value)


def build_params(record_cls: type, overrides: Mapping[str, Any] | None = None) -> Any:
    """Instantiate ``record_cls`` with its defaults replaced by ``overrides``; unknown fields are rejected."""
    overrides = dict(overrides or {})
    known = {f.name: f for f in fields(record_cls)}
    unknown = sorted(set(overrides) - set(known))
    if unknown:
        raise ParameterError(
            f"unknown parameter(s) {', '.join(unknown)} for {record_cls.kind}; expected one of {', '.join(known)}"
        )
    kwargs = {
        name: _coerce(record_cls.kind, name, known[name].default, value) for name, value in overrides.items()
    }
    return record_cls(**kwargs)


def describe_params(record: Any) -> str:
    """Compact ``field=value`` rendering used in logs and reports."""
    parts = []
    for name, value in asdict(record).items():
        parts.append(f"{name}={value:g}" if isinstance(value, float) else f"{name}={value}")
    return ", ".join(parts)


def require(condition: bool, message: str) -> None:
    if not condition:
        raise ParameterError(message)
