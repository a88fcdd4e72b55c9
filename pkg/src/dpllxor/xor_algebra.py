"""Xor-clause algebra: normal form, substitution, xor-sum, evaluation, CNF.

Literals are DIMACS-style ints (``v`` / ``-v`` for a variable ``v >= 1``).

An :class:`XorClause` is stored as a linear equation over GF(2):
``vars[0] ^ vars[1] ^ ... == rhs``.  In the usual textual notation an
xor-clause ``x1 ⊕ ... ⊕ xn`` is true iff an odd number of its atoms are
true, i.e. ``rhs = True``; a trailing ``⊕ ⊤`` term flips that, giving
``rhs = False``.  This is the only place the mapping is defined:

    x1 ⊕ x2          <->  XorClause((1, 2), True)
    x1 ⊕ x2 ⊕ ⊤      <->  XorClause((1, 2), False)
    ()  (= ⊥)        <->  XorClause((), True)
    ⊤                <->  XorClause((), False)
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Optional, Sequence

OrClause = tuple  # tuple[int, ...]

MAX_CLAUSIFY_VARS = 20


class ClausifyError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class XorClause:
    vars: tuple
    rhs: bool

    def __post_init__(self) -> None:
        vs = self.vars
        for a, b in zip(vs, vs[1:]):
            if a >= b:
                raise ValueError(f"xor-clause vars must be strictly ascending: {vs}")
        if vs and vs[0] < 1:
            raise ValueError(f"variable ids start at 1: {vs}")

    @classmethod
    def of(cls, vars: Iterable[int], rhs: bool = True) -> "XorClause":
        """Build from atoms that may repeat; repeated atoms cancel."""
        odd: set = set()
        for v in vars:
            odd ^= {v}
        return cls(tuple(sorted(odd)), bool(rhs))

    @classmethod
    def unit(cls, lit: int) -> "XorClause":
        return cls((abs(lit),), lit > 0)

    def __len__(self) -> int:
        return len(self.vars)

    @property
    def is_bottom(self) -> bool:
        return not self.vars and self.rhs

    @property
    def is_top(self) -> bool:
        return not self.vars and not self.rhs

    @property
    def is_unary(self) -> bool:
        return len(self.vars) == 1

    def as_literal(self) -> int:
        """The literal a unary clause stands for (``x ⊕ ⊤`` is ``¬x``)."""
        if len(self.vars) != 1:
            raise ValueError(f"not a unary xor-clause: {self}")
        v = self.vars[0]
        return v if self.rhs else -v

    def __str__(self) -> str:
        if not self.vars:
            return "⊥" if self.rhs else "⊤"
        body = " ⊕ ".join(f"x{v}" for v in self.vars)
        return body if self.rhs else body + " ⊕ ⊤"


TOP = XorClause((), False)
BOTTOM = XorClause((), True)


def normalize(lits: Iterable[int]) -> XorClause:
    """Normal form of the xor of ``lits`` (each negation flips the parity)."""
    odd: set = set()
    rhs = True
    for lit in lits:
        if lit == 0:
            raise ValueError("literal 0 is not a variable")
        if lit < 0:
            rhs = not rhs
        odd ^= {abs(lit)}
    return XorClause(tuple(sorted(odd)), rhs)


def xor_sum(c1: XorClause, c2: XorClause) -> XorClause:
    """The ⊕-Gen consequence ``c1 ⊕ c2 ⊕ ⊤``: the sum of both equations."""
    a, b = c1.vars, c2.vars
    if not a:
        return XorClause(b, c1.rhs != c2.rhs)
    if not b:
        return XorClause(a, c1.rhs != c2.rhs)
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        x, y = a[i], b[j]
        if x < y:
            out.append(x)
            i += 1
        elif y < x:
            out.append(y)
            j += 1
        else:
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return XorClause(tuple(out), c1.rhs != c2.rhs)


def substitute(c: XorClause, atom: int, d: XorClause) -> XorClause:
    """``c[atom/d]``: replace the single occurrence of ``atom`` by the term ``d``.

    The term ``d`` has truth value ``(⊕ d.vars) ⊕ d.rhs ⊕ 1``; substituting
    ``TOP`` fixes the atom to true and ``BOTTOM`` fixes it to false.
    """
    if atom not in c.vars:
        return c
    rest = XorClause(tuple(v for v in c.vars if v != atom), c.rhs)
    return xor_sum(rest, XorClause(d.vars, not d.rhs))


def evaluate(c: XorClause, pi: Mapping[int, bool]) -> Optional[bool]:
    """True/False when ``pi`` assigns every atom of ``c``, else ``None``."""
    acc = False
    for v in c.vars:
        val = pi.get(v)
        if val is None:
            return None
        acc ^= bool(val)
    return acc == c.rhs


def evaluate_or(c: Sequence[int], pi: Mapping[int, bool]) -> Optional[bool]:
    undetermined = False
    for lit in c:
        val = pi.get(abs(lit))
        if val is None:
            undetermined = True
        elif val == (lit > 0):
            return True
    return None if undetermined else False


def or_clause(lits: Iterable[int]) -> OrClause:
    """Drop duplicate literals, keep first-occurrence order."""
    seen = set()
    out = []
    for lit in lits:
        if lit == 0:
            raise ValueError("literal 0 is not a variable")
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return tuple(out)


def is_tautology(c: Sequence[int]) -> bool:
    s = set(c)
    return any(-lit in s for lit in s)


def clausify_xor(c: XorClause) -> list:
    """CNF translation: one or-clause per assignment falsifying ``c``.

    Yields ``2**(n-1)`` clauses of ``n`` literals; ``⊥`` gives ``[()]`` and
    the tautology ``⊤`` gives ``[]``.
    """
    n = len(c.vars)
    if n > MAX_CLAUSIFY_VARS:
        raise ClausifyError(
            f"xor-clause over {n} variables exceeds {MAX_CLAUSIFY_VARS}; split it first"
        )
    if n == 0:
        return [()] if c.rhs else []
    out = []
    for bits in product((False, True), repeat=n):
        if (sum(bits) % 2 == 1) != c.rhs:
            out.append(tuple(-v if b else v for v, b in zip(c.vars, bits)))
    return out
