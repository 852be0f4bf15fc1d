"""Counters for the expensive cryptographic operations.

Pairings and group exponentiations are tallied inside the curve layer;
bulk field operations are tallied at the protocol call sites that perform
them. Counting is disabled by default and costs a single attribute check
per instrumented call when off.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from dataclasses import dataclass, field

CLASSES = ("pairings", "g1_exp", "g2_exp", "gt_exp", "field_ops")


@dataclass
class OpCounters:
    """Monotone per-class operation counters."""

    pairings: int = 0
    g1_exp: int = 0
    g2_exp: int = 0
    gt_exp: int = 0
    field_ops: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def add(self, kind: str, amount: int = 1) -> None:
        with self._lock:
            setattr(self, kind, getattr(self, kind) + amount)

    def snapshot(self) -> dict[str, int]:
        with self._lock:
            return {k: getattr(self, k) for k in CLASSES}

    def reset(self) -> None:
        with self._lock:
            for k in CLASSES:
                setattr(self, k, 0)

    @property
    def crypto_ops(self) -> int:
        """Pairings plus all group exponentiations (field ops excluded)."""
        snap = self.snapshot()
        return sum(v for k, v in snap.items() if k != "field_ops")


class _State:
    enabled = False
    counters = OpCounters()


_state = _State()


def record(kind: str, amount: int = 1) -> None:
    if _state.enabled:
        _state.counters.add(kind, amount)


def enabled() -> bool:
    return _state.enabled


@contextmanager
def counting():
    """Enable counting within the block and yield the live counters.

    Nested blocks share one tally; the returned object is reset on entry
    of the outermost block only.
    """
    outermost = not _state.enabled
    if outermost:
        _state.counters.reset()
        _state.enabled = True
    try:
        yield _state.counters
    finally:
        if outermost:
            _state.enabled = False
