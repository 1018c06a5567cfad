"""Enumeration limits, overridable through the ``PFLAB_LIMITS`` variable.

The variable holds comma separated ``name=value`` pairs, for example
``PFLAB_LIMITS="decomposition_vertices=16,orientation_edges=30"``.
"""

from __future__ import annotations

import dataclasses
import os

from .errors import DomainError, ResourceError


@dataclasses.dataclass(frozen=True)
class Limits:
    decomposition_vertices: int = 14
    isomorphism_vertices: int = 12
    orientation_edges: int = 24
    cyclomatic: int = 10
    ring_dimension: int = 24
    pfaffian_order: int = 24


def parse_limits(text: str, base: Limits | None = None) -> Limits:
    base = base or Limits()
    if not text.strip():
        return base
    names = {f.name for f in dataclasses.fields(Limits)}
    updates = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in names:
            raise DomainError(f"bad PFLAB_LIMITS entry {item!r}")
        try:
            updates[key] = int(value)
        except ValueError:
            raise DomainError(f"bad PFLAB_LIMITS value {item!r}") from None
    return dataclasses.replace(base, **updates)


def current() -> Limits:
    return parse_limits(os.environ.get("PFLAB_LIMITS", ""))


def check(value: int, limit: int, what: str) -> None:
    if value > limit:
        raise ResourceError(f"{what} = {value} exceeds the configured limit {limit}")
