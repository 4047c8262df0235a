"""Enumeration caps and shared error types."""

from __future__ import annotations

import os

DEFAULT_CAP = 1 << 20


class CapExceeded(RuntimeError):
    """An enumeration would exceed the configured cap.

    Raised instead of stalling; carries the offending count and the cap.
    """

    def __init__(self, what: str, count: int, cap: int):
        super().__init__(f"{what}: {count} exceeds cap {cap}")
        self.what = what
        self.count = count
        self.cap = cap


def get_cap(explicit: int | None = None) -> int:
    """Resolve the enumeration cap: explicit argument, then UAG_CAP, then default."""
    if explicit is not None:
        return explicit
    env = os.environ.get("UAG_CAP")
    if env is not None:
        return int(env)
    return DEFAULT_CAP


def check_cap(what: str, count: int, cap: int | None = None) -> int:
    cap = get_cap(cap)
    if count > cap:
        raise CapExceeded(what, count, cap)
    return count
