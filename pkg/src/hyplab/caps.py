"""Resource caps and the error types shared by every module."""

from __future__ import annotations

import contextlib
import contextvars
import dataclasses
import os
from dataclasses import dataclass
from typing import Iterator


class HyplabError(Exception):
    """Base class for errors raised by the engine."""


class InputError(HyplabError, ValueError):
    """Malformed or mathematically invalid input (CLI exit code 2)."""


class ResourceError(HyplabError, RuntimeError):
    """A configured cap was exceeded (CLI exit code 3)."""


@dataclass(frozen=True)
class Caps:
    order: int = 2048
    subgroup_order: int = 64
    subgroup_count: int = 10000
    assoc_scan: int = 512
    module_order: int = 4096
    oracle_module_order: int = 64


DEFAULT_CAPS = Caps()

# env/CLI spelling -> field name
CAP_KEYS = {
    "order": "order",
    "subgroups": "subgroup_order",
    "subgroup-order": "subgroup_order",
    "count": "subgroup_count",
    "subgroup-count": "subgroup_count",
    "assoc": "assoc_scan",
    "module": "module_order",
    "module-order": "module_order",
    "oracle": "oracle_module_order",
}

_current: contextvars.ContextVar[Caps] = contextvars.ContextVar("hyplab_caps", default=DEFAULT_CAPS)


def current_caps() -> Caps:
    return _current.get()


@contextlib.contextmanager
def use_caps(caps: Caps) -> Iterator[Caps]:
    token = _current.set(caps)
    try:
        yield caps
    finally:
        _current.reset(token)


def parse_caps(text: str, base: Caps = DEFAULT_CAPS) -> Caps:
    """Parse ``"order=1024,subgroups=32"`` into a :class:`Caps` derived from *base*."""
    updates = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, value = part.partition("=")
        key = key.strip().lower()
        if not sep or key not in CAP_KEYS:
            raise InputError(f"bad cap setting {part!r}")
        try:
            number = int(value)
        except ValueError:
            raise InputError(f"cap {key} must be an integer, got {value!r}") from None
        if number < 0:
            raise InputError(f"cap {key} must be non-negative")
        updates[CAP_KEYS[key]] = number
    return dataclasses.replace(base, **updates)


def caps_from_env(environ=None) -> Caps:
    environ = os.environ if environ is None else environ
    text = environ.get("HYPLAB_CAPS", "")
    return parse_caps(text) if text else DEFAULT_CAPS
