"""Flat ``key = value`` sweep configuration files.

Lines are ``key = value``; ``#`` starts a comment; lists are comma
separated. Numeric fields also accept the constants ``e`` and ``pi``.
"""
from __future__ import annotations

import math
from pathlib import Path

from .exceptions import ConfigError

_CONSTANTS = {"e": math.e, "pi": math.pi}
_FLOAT = {"a", "b", "t_max", "periods"}
_FLOAT_LIST = {"gamma", "n"}
_INT = {"t_steps", "seed", "workers", "samples"}
_BOOL = {"normalize_time"}
_STR = {"state", "out"}
KNOWN_KEYS = _FLOAT | _FLOAT_LIST | _INT | _BOOL | _STR


def parse_number(text: str, key: str = "value", line: int | None = None) -> float:
    raw = text.strip()
    where = f"line {line}, " if line is not None else ""
    if raw.lower() in _CONSTANTS:
        return _CONSTANTS[raw.lower()]
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{where}{key}: cannot parse {raw!r} as a number") from None
    if not math.isfinite(value):
        raise ConfigError(f"{where}{key}: value must be finite")
    return value


def parse_value(key: str, raw: str, line: int | None = None):
    where = f"line {line}, " if line is not None else ""
    if key in _FLOAT:
        return parse_number(raw, key, line)
    if key in _FLOAT_LIST:
        items = [s for s in raw.split(",") if s.strip()]
        if not items:
            raise ConfigError(f"{where}{key}: empty list")
        values = [parse_number(s, key, line) for s in items]
        return values
    if key in _INT:
        try:
            return int(raw.strip())
        except ValueError:
            raise ConfigError(f"{where}{key}: expected an integer, got {raw.strip()!r}") from None
    if key in _BOOL:
        val = raw.strip().lower()
        if val in ("1", "true", "yes", "on"):
            return True
        if val in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{where}{key}: expected a boolean, got {raw.strip()!r}")
    return raw.strip()


def parse_config_text(text: str) -> dict:
    out: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {body!r}")
        key, raw = (s.strip() for s in body.split("=", 1))
        key = key.replace("-", "_")
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = parse_value(key, raw, lineno)
    return out


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config_text(text)
