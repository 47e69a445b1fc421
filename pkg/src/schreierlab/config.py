"""Enumeration capacities.

Defaults can be overridden per process with the environment variable
``SCHREIERLAB_CAPACITY``, e.g. ``SCHREIERLAB_CAPACITY="schreier_support=24,zv_support=16"``.
Every override is clamped to a hard ceiling and logged.
"""

from __future__ import annotations

import logging
import os
from dataclasses import asdict, dataclass, replace

from .errors import ConfigError

log = logging.getLogger(__name__)

ENV_VAR = "SCHREIERLAB_CAPACITY"


@dataclass(frozen=True)
class Capacity:
    schreier_support: int = 22
    enum_window: int = 22
    zv_support: int = 18
    exact_arity: int = 6
    sign_set: int = 8
    tensor_window: int = 10
    functionals: int = 200_000


CEILING = Capacity(
    schreier_support=40,
    enum_window=30,
    zv_support=24,
    exact_arity=8,
    sign_set=12,
    tensor_window=14,
    functionals=2_000_000,
)


def _parse_override(text: str) -> dict[str, int]:
    out = {}
    fields = set(asdict(Capacity()))
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in fields:
            raise ConfigError(f"bad {ENV_VAR} entry {item!r}; known keys: {sorted(fields)}")
        try:
            out[key] = int(value)
        except ValueError:
            raise ConfigError(f"bad {ENV_VAR} value {value!r} for {key}") from None
    return out


def apply_overrides(text: str, base: Capacity | None = None) -> Capacity:
    """Apply ``key=value,...`` overrides, clamping each to its ceiling."""
    cap = base or Capacity()
    if not text:
        return cap
    changes = _parse_override(text)
    for key, value in list(changes.items()):
        ceiling = getattr(CEILING, key)
        if value < 1:
            raise ConfigError(f"capacity {key} must be positive, got {value}")
        if value > ceiling:
            log.warning("%s=%d exceeds hard ceiling, clamped to %d", key, value, ceiling)
            changes[key] = ceiling
        elif value > getattr(cap, key):
            log.warning("%s raised to %d; enumeration cost grows exponentially", key, value)
    return replace(cap, **changes)


def capacity_from_env(environ=None) -> Capacity:
    environ = os.environ if environ is None else environ
    return apply_overrides(environ.get(ENV_VAR, ""))


_current = None


def capacity() -> Capacity:
    global _current
    if _current is None:
        _current = capacity_from_env()
    return _current


def set_capacity(cap: Capacity | None) -> None:
    """Install ``cap`` for this process (``None`` re-reads the environment)."""
    global _current
    _current = cap
