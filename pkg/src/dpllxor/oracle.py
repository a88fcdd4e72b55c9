"""Brute-force ground truth: model enumeration and GF(2) feasibility."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .formula_io import CnfXorFormula, export_cnf
from .xor_algebra import XorClause

VAR_LIMIT = 24
_CHUNK_BITS = 16


class TooManyVariables(ValueError):
    pass


@dataclass
class ModelCount:
    count: int
    first: Optional[dict]


def _chunks(n: int):
    """Yield boolean matrices of shape (rows, n), columns are variables 1..n."""
    lo_bits = min(n, _CHUNK_BITS)
    base = np.arange(1 << lo_bits, dtype=np.int64)
    lo = ((base[:, None] >> np.arange(lo_bits)) & 1).astype(bool)
    for hi in range(1 << (n - lo_bits)):
        if n == lo_bits:
            yield lo
        else:
            hi_bits = ((hi >> np.arange(n - lo_bits)) & 1).astype(bool)
            yield np.hstack([lo, np.broadcast_to(hi_bits, (lo.shape[0], n - lo_bits))])


def _satisfied(f: CnfXorFormula, block: np.ndarray) -> np.ndarray:
    ok = np.ones(block.shape[0], dtype=bool)
    for c in f.or_clauses:
        if not c:
            return np.zeros(block.shape[0], dtype=bool)
        sat = np.zeros(block.shape[0], dtype=bool)
        for lit in c:
            col = block[:, abs(lit) - 1]
            sat |= col if lit > 0 else ~col
        ok &= sat
    for c in f.xor_clauses:
        par = np.zeros(block.shape[0], dtype=bool)
        for v in c.vars:
            par ^= block[:, v - 1]
        ok &= par == c.rhs
    return ok


def _check_size(n: int, limit: int) -> None:
    if n > limit:
        raise TooManyVariables(f"{n} variables exceeds the enumeration limit {limit}")


def enumerate_models(f: CnfXorFormula, var_limit: int = VAR_LIMIT) -> ModelCount:
    n = f.num_vars
    _check_size(n, var_limit)
    if n == 0:
        sat = all(f.or_clauses) and not any(c.is_bottom for c in f.xor_clauses)
        return ModelCount(1 if sat else 0, {} if sat else None)
    count = 0
    first = None
    for block in _chunks(n):
        ok = _satisfied(f, block)
        k = int(ok.sum())
        if k and first is None:
            row = block[int(np.argmax(ok))]
            first = {v: bool(row[v - 1]) for v in range(1, n + 1)}
        count += k
    return ModelCount(count, first)


def is_satisfiable(f: CnfXorFormula, var_limit: int = VAR_LIMIT) -> bool:
    return enumerate_models(f, var_limit).count > 0


class ModelSet:
    """All models of a formula, kept as a boolean matrix for repeated entailment checks."""

    def __init__(self, f: CnfXorFormula, var_limit: int = VAR_LIMIT):
        _check_size(f.num_vars, var_limit)
        self.num_vars = f.num_vars
        if f.num_vars == 0:
            sat = enumerate_models(f).count > 0
            self.models = np.zeros((1 if sat else 0, 0), dtype=bool)
        else:
            parts = [b[_satisfied(f, b)] for b in _chunks(f.num_vars)]
            self.models = np.vstack(parts)

    def __len__(self) -> int:
        return self.models.shape[0]

    def _col(self, v: int) -> np.ndarray:
        if v > self.num_vars:
            raise ValueError(f"variable {v} not in formula")
        return self.models[:, v - 1]

    def falsifiers(self, c) -> np.ndarray:
        rows = self.models.shape[0]
        if isinstance(c, XorClause):
            par = np.zeros(rows, dtype=bool)
            for v in c.vars:
                par ^= self._col(v)
            return par != c.rhs
        sat = np.zeros(rows, dtype=bool)
        for lit in c:
            col = self._col(abs(lit))
            sat |= col if lit > 0 else ~col
        return ~sat

    def entails(self, c) -> bool:
        return not self.falsifiers(c).any()

    def entails_equiv(self, a: XorClause, b: XorClause) -> bool:
        """Every model gives ``a`` and ``b`` the same truth value."""
        return not (self.falsifiers(a) ^ self.falsifiers(b)).any()


def entails(f: CnfXorFormula, c, var_limit: int = VAR_LIMIT) -> bool:
    """``f ⊨ c`` for an or-clause (int sequence) or an :class:`XorClause`."""
    top = max((abs(x) for x in (c.vars if isinstance(c, XorClause) else c)), default=0)
    if top > f.num_vars:
        f = CnfXorFormula(top, f.or_clauses, f.xor_clauses)
    return ModelSet(f, var_limit).entails(c)


def gf2_feasible(xors: Iterable[XorClause], assumptions: Sequence[int] = ()) -> bool:
    """Gaussian elimination over GF(2); rows are int bitmasks with the rhs in bit 0."""
    pivots: dict = {}
    rows = [_row(c) for c in xors]
    rows.extend(_row(XorClause.unit(lit)) for lit in assumptions)
    for r in rows:
        while r > 1:
            top = r.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = r
                break
            r ^= p
        if r == 1:
            return False
    return True


def _row(c: XorClause) -> int:
    r = int(c.rhs)
    for v in c.vars:
        r |= 1 << v
    return r


def cnf_unit_propagate(or_clauses: Sequence[Sequence[int]], assumptions: Sequence[int]):
    """Naive fixpoint unit propagation; returns (implied literals, conflict)."""
    val: dict = {}
    for lit in assumptions:
        if val.get(abs(lit), lit > 0) != (lit > 0):
            return set(), True
        val[abs(lit)] = lit > 0
    implied = set()
    changed = True
    while changed:
        changed = False
        for c in or_clauses:
            free = None
            nfree = 0
            sat = False
            for lit in c:
                x = val.get(abs(lit))
                if x is None:
                    nfree += 1
                    free = lit
                elif x == (lit > 0):
                    sat = True
                    break
            if sat:
                continue
            if nfree == 0:
                return implied, True
            if nfree == 1:
                val[abs(free)] = free > 0
                implied.add(free)
                changed = True
    return implied, False


def xor_unit_propagate(f: CnfXorFormula, assumptions: Sequence[int]):
    """Reference: unit propagation on the CNF export of the xor part."""
    return cnf_unit_propagate(export_cnf(CnfXorFormula(f.num_vars, [], f.xor_clauses)).or_clauses,
                              assumptions)
