"""Reading and writing cnf-xor formulas.

Text format (DIMACS with xor lines)::

    c comment
    p cnf <vars> <clauses>
    1 -2 0          or-clause
    x1 2 -3 0       xor-clause; each negative literal flips the parity once

The clause count in the header is not checked on input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from .xor_algebra import XorClause, clausify_xor, normalize, or_clause


class ParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass
class CnfXorFormula:
    num_vars: int = 0
    or_clauses: list = field(default_factory=list)
    xor_clauses: list = field(default_factory=list)

    def __post_init__(self) -> None:
        self.or_clauses = [tuple(c) for c in self.or_clauses]
        self.xor_clauses = [c for c in self.xor_clauses if not c.is_top]
        for c in self.or_clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range 1..{self.num_vars}")
        for c in self.xor_clauses:
            if c.vars and c.vars[-1] > self.num_vars:
                raise ValueError(f"variable {c.vars[-1]} out of range 1..{self.num_vars}")

    @property
    def xor_vars(self) -> set:
        return {v for c in self.xor_clauses for v in c.vars}


def parse_cnfxor(text: Union[str, bytes]) -> CnfXorFormula:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    num_vars = None
    ors: list = []
    xors: list = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            if num_vars is not None:
                raise ParseError(lineno, "duplicate header")
            parts = line.split()
            if len(parts) != 4 or parts[1] not in ("cnf", "xcnf"):
                raise ParseError(lineno, f"malformed header {line!r}")
            try:
                num_vars, _ = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(lineno, f"malformed header {line!r}") from None
            if num_vars < 0:
                raise ParseError(lineno, "negative variable count")
            continue
        if num_vars is None:
            raise ParseError(lineno, "clause before header")
        is_xor = line.startswith("x")
        body = line[1:] if is_xor else line
        try:
            lits = [int(tok) for tok in body.split()]
        except ValueError:
            raise ParseError(lineno, f"bad literal in {line!r}") from None
        if not lits or lits[-1] != 0:
            raise ParseError(lineno, "missing terminating 0")
        lits.pop()
        for lit in lits:
            if lit == 0:
                raise ParseError(lineno, "0 inside clause")
            if abs(lit) > num_vars:
                raise ParseError(lineno, f"literal {lit} out of range 1..{num_vars}")
        if is_xor:
            if not lits:
                raise ParseError(lineno, "empty xor-clause")
            c = normalize(lits)
            if not c.is_top:
                xors.append(c)
        else:
            ors.append(or_clause(lits))
    if num_vars is None:
        raise ParseError(0, "missing header")
    return CnfXorFormula(num_vars, ors, xors)


def _xor_line(c: XorClause, num_vars: int) -> str:
    if c.is_bottom:
        if num_vars >= 1:
            return "x1 1 0"
        return "0"  # the empty or-clause is the same ⊥
    lits = list(c.vars)
    if not c.rhs:
        lits[0] = -lits[0]
    return "x" + " ".join(map(str, lits)) + " 0"


def write_cnfxor(f: CnfXorFormula) -> str:
    lines = [f"p cnf {f.num_vars} {len(f.or_clauses) + len(f.xor_clauses)}"]
    for c in f.or_clauses:
        lines.append(" ".join(map(str, c)) + (" 0" if c else "0"))
    for c in f.xor_clauses:
        lines.append(_xor_line(c, f.num_vars))
    return "\n".join(lines) + "\n"


def export_cnf(f: CnfXorFormula) -> CnfXorFormula:
    """Pure CNF over the same variables (no auxiliary variables)."""
    ors = list(f.or_clauses)
    for c in f.xor_clauses:
        ors.extend(clausify_xor(c))
    return CnfXorFormula(f.num_vars, ors, [])


def read_file(path: Union[str, Path]) -> CnfXorFormula:
    return parse_cnfxor(Path(path).read_bytes())


def write_file(f: CnfXorFormula, path: Union[str, Path]) -> None:
    Path(path).write_text(write_cnfxor(f), encoding="utf-8")
