"""Learned xor-clauses: candidates from parity explanations, filtering, and a bounded store."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .xor_algebra import BOTTOM, XorClause, xor_sum


def derive_learnable(lit: int, pexpl: XorClause) -> XorClause:
    """The clause ``pexpl ⇔ lit`` as one xor-clause (``lit == 0`` stands for ⊥)."""
    target = BOTTOM if lit == 0 else XorClause.unit(lit)
    return xor_sum(pexpl, target)


def current_level_count(c: XorClause, level_of: Callable[[int], int], current: int) -> int:
    return sum(1 for v in c.vars if level_of(v) == current)


def conservative_filter(c: XorClause, level_of: Callable[[int], int], current: int) -> tuple:
    """``(accept, no_current_level_vars)``: accept iff at most one variable sits on ``current``."""
    k = current_level_count(c, level_of, current)
    return k <= 1, k == 0


@dataclass
class LearnedXorDb:
    originals: Iterable[XorClause] = ()
    capacity: Optional[float] = None
    growth: float = 1.1
    decay: float = 0.95
    known: set = field(default_factory=set, init=False)
    activity: dict = field(default_factory=dict, init=False)
    handles: dict = field(default_factory=dict, init=False)
    reductions: int = field(default=0, init=False)
    _inc: float = field(default=1.0, init=False)

    def __post_init__(self) -> None:
        self.known = set(self.originals)
        if self.capacity is None:
            self.capacity = float(max(1000, len(self.known)))

    def __len__(self) -> int:
        return len(self.activity)

    def __contains__(self, c: XorClause) -> bool:
        return c in self.activity

    def clauses(self) -> list:
        return list(self.activity)

    def is_new(self, c: XorClause) -> bool:
        return not c.is_top and c not in self.known

    def add(self, c: XorClause, handle=None) -> bool:
        if not self.is_new(c):
            return False
        self.known.add(c)
        self.activity[c] = self._inc
        self.handles[c] = handle
        return True

    def bump(self, c: XorClause) -> None:
        if c in self.activity:
            self.activity[c] += self._inc
            if self.activity[c] > 1e100:
                for k in self.activity:
                    self.activity[k] *= 1e-100
                self._inc *= 1e-100

    def decay_all(self) -> None:
        self._inc /= self.decay

    def on_restart(self) -> None:
        self.capacity *= self.growth

    def reduce(self, pinned: Iterable[XorClause] = ()) -> list:
        """Drop the least active unpinned clauses until the store fits; returns them."""
        excess = len(self.activity) - int(self.capacity)
        if excess <= 0:
            return []
        pinned = set(pinned)
        order = sorted((a, i, c) for i, (c, a) in enumerate(self.activity.items()) if c not in pinned)
        removed = [c for _, _, c in order[:excess]]
        for c in removed:
            del self.activity[c]
            self.known.discard(c)
        if removed:
            self.reductions += 1
        return removed
