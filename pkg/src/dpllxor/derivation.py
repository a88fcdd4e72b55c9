"""Derivation DAGs over xor-clauses, cuts, and explanations.

Every derived vertex is labeled with the sum (``xor_sum``) of its premise
labels.  Cuts are never stored as full partitions: a policy yields the
``Vb`` side for a target vertex and everything else follows from it.

The parity explanation is computed by walking the cone of the target in
decreasing vertex order and counting, modulo two, how many times each
vertex is reached from ``Vb``.  A ``Vb`` vertex reached an even number of
times is not expanded; a ``Va`` vertex reached an odd number of times
contributes its label (input clauses contribute ``⊤``, i.e. nothing).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .xor_algebra import TOP, XorClause, or_clause, xor_sum


class Kind(Enum):
    INPUT_CLAUSE = "clause"
    INPUT_ASSUMPTION = "assumption"
    DERIVED = "derived"


class Policy(Enum):
    CLOSEST = "closest"
    FIRST_UIP = "uip"
    FURTHEST = "furthest"


class ProvisoError(ValueError):
    pass


class NotCnfCompatible(RuntimeError):
    pass


@dataclass(frozen=True, slots=True)
class Vertex:
    id: int
    label: XorClause
    kind: Kind
    premises: tuple
    level: int


class DerivationGraph:
    def __init__(self) -> None:
        self.vertices: dict = {}
        self._next = 1
        self._by_level: list = [[]]
        self._cache: dict = {}

    def __len__(self) -> int:
        return len(self.vertices)

    def __getitem__(self, vid: int) -> Vertex:
        return self.vertices[vid]

    def label(self, vid: int) -> XorClause:
        return self.vertices[vid].label

    def _add(self, label, kind, premises, level) -> int:
        vid = self._next
        self._next += 1
        self.vertices[vid] = Vertex(vid, label, kind, premises, level)
        while len(self._by_level) <= level:
            self._by_level.append([])
        self._by_level[level].append(vid)
        return vid

    def add_input(self, c: XorClause, kind: Kind = Kind.INPUT_CLAUSE, level: int = 0) -> int:
        if kind is Kind.DERIVED:
            raise ValueError("input vertices cannot be DERIVED")
        return self._add(c, kind, (), level)

    def add_derived(self, *premises: int, level: Optional[int] = None, check: bool = True) -> int:
        """Apply a rule to ``premises``; the label is the sum of their labels.

        With two premises and ``check`` set, one premise must be unary or
        binary and share a variable with the other (the UP/Subst provisos).
        More than two premises records a collapsed chain of rule steps.
        """
        if len(premises) < 2:
            raise ValueError("a derived vertex needs at least two premises")
        labels = [self.vertices[p].label for p in premises]
        if check and len(premises) == 2:
            a, b = labels
            if not _proviso(a, b) and not _proviso(b, a):
                raise ProvisoError(f"no rule derives from {a} and {b}")
        label = labels[0]
        for other in labels[1:]:
            label = xor_sum(label, other)
        if level is None:
            level = max(self.vertices[p].level for p in premises)
        return self._add(label, Kind.DERIVED, tuple(premises), level)

    def truncate(self, level: int) -> None:
        """Drop every vertex created above ``level``."""
        while len(self._by_level) > level + 1:
            for vid in self._by_level.pop():
                del self.vertices[vid]
        self._cache.clear()

    # -- cuts -------------------------------------------------------------

    def cone(self, v: int) -> set:
        seen = {v}
        stack = [v]
        verts = self.vertices
        while stack:
            for p in verts[stack.pop()].premises:
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return seen

    def cut(self, v: int, policy: Policy) -> frozenset:
        """The ``Vb`` side of the cut for ``v`` chosen by ``policy``."""
        verts = self.vertices
        if verts[v].kind is not Kind.DERIVED:
            raise ValueError(f"vertex {v} is an input vertex")
        key = ("cut", v, policy)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if policy is Policy.FURTHEST:
            vb = frozenset(u for u in self.cone(v) if verts[u].kind is Kind.DERIVED)
        elif policy is Policy.CLOSEST:
            vb = self._closest(v)
        else:
            vb = self._first_uip(v)
        self._cache[key] = vb
        return vb

    def _needs_expansion(self, u: int) -> bool:
        x = self.vertices[u]
        return x.kind is Kind.DERIVED and len(x.label.vars) != 1

    def _closest(self, v: int) -> frozenset:
        vb = {v}
        self._expand_from(vb, [v])
        return self._untangle(vb)

    def _expand_from(self, vb: set, stack: list) -> None:
        verts = self.vertices
        while stack:
            for p in verts[stack.pop()].premises:
                if p not in vb and self._needs_expansion(p):
                    vb.add(p)
                    stack.append(p)

    def _untangle(self, vb: set) -> frozenset:
        """Grow ``vb`` until no two reason vertices carry complementary literals.

        Of the vertices for one variable, an assumption (else the earliest
        derived vertex) is the value actually held; the other derived ones
        go into ``vb``.
        """
        verts = self.vertices
        while True:
            by_var: dict = {}
            for u in self.reason_set(vb):
                lab = verts[u].label
                if len(lab.vars) == 1:
                    by_var.setdefault(lab.vars[0], []).append(u)
            grow = []
            for us in by_var.values():
                if len({verts[u].label.rhs for u in us}) < 2:
                    continue
                held = min(us, key=lambda u: (verts[u].kind is Kind.DERIVED, u))
                held_rhs = verts[held].label.rhs
                grow += [u for u in us if verts[u].kind is Kind.DERIVED
                         and verts[u].label.rhs != held_rhs]
            if not grow:
                return frozenset(vb)
            vb.update(grow)
            self._expand_from(vb, grow)

    def _first_uip(self, v: int) -> frozenset:
        verts = self.vertices
        cone = sorted(self.cone(v))
        assumptions = [u for u in cone if verts[u].kind is Kind.INPUT_ASSUMPTION]
        if not assumptions:
            return self._closest(v)
        latest = assumptions[-1]
        dependent = {latest}
        for u in cone:
            if u > latest and any(p in dependent for p in verts[u].premises):
                dependent.add(u)
        vb = {v}
        frontier = {p for p in verts[v].premises}
        while True:
            wide = [u for u in frontier if self._needs_expansion(u)]
            if wide:
                pick = max(wide)
            else:
                on_path = [u for u in frontier if u in dependent]
                if len(on_path) <= 1:
                    break
                pick = max(on_path)
            frontier.discard(pick)
            vb.add(pick)
            for p in verts[pick].premises:
                if p not in vb:
                    frontier.add(p)
        return self._untangle(vb)

    def frontier(self, vb: Iterable[int]) -> list:
        """``Va`` vertices with an edge into ``vb``, ascending."""
        vb = set(vb)
        out = set()
        for u in vb:
            for p in self.vertices[u].premises:
                if p not in vb:
                    out.add(p)
        return sorted(out)

    def cut_frontier(self, v: int, policy: Policy) -> list:
        return self.frontier(self.cut(v, policy))

    def reason_set(self, vb: Iterable[int]) -> list:
        verts = self.vertices
        return [u for u in self.frontier(vb) if verts[u].kind is not Kind.INPUT_CLAUSE]

    # -- explanations -----------------------------------------------------

    def _vb(self, v, cut) -> frozenset:
        return self.cut(v, cut) if isinstance(cut, Policy) else frozenset(cut)

    def implicative_explanation(self, v: int, cut) -> list:
        """Literals of the reason set; ``cut`` is a Policy or an explicit ``Vb``."""
        lits = []
        for u in self.reason_set(self._vb(v, cut)):
            lab = self.vertices[u].label
            if len(lab.vars) != 1:
                raise NotCnfCompatible(f"reason vertex {u} is labeled {lab}")
            lits.append(lab.as_literal())
        return lits

    def parity_explanation(self, v: int, cut) -> XorClause:
        vb = self._vb(v, cut)
        key = ("pexpl", v, vb) if isinstance(cut, Policy) else None
        if key is not None and key in self._cache:
            return self._cache[key]
        result, _ = self._parity_walk(v, vb)
        if key is not None:
            self._cache[key] = result
        return result

    def parity_inputs(self, v: int, cut) -> list:
        """Input-clause vertices reached an odd number of times by the walk."""
        return self._parity_walk(v, self._vb(v, cut))[1]

    def _parity_walk(self, v: int, vb) -> tuple:
        verts = self.vertices
        count = {v: 1}
        heap = [-v]
        result = TOP
        inputs = []
        while heap:
            u = -heapq.heappop(heap)
            if not count[u] & 1:
                continue
            x = verts[u]
            if u in vb:
                for p in x.premises:
                    if p in count:
                        count[p] += 1
                    else:
                        count[p] = 1
                        heapq.heappush(heap, -p)
            elif x.kind is Kind.INPUT_CLAUSE:
                inputs.append(u)
            else:
                result = xor_sum(result, x.label)
        return result, inputs

    def implying_or_clause(self, v: int, cut, parity: bool = True) -> tuple:
        """``(l̂ ∨ ¬l'1 ∨ ...)`` for a unary or ``⊥`` vertex ``v``.

        With ``parity`` the reason literals are restricted to the variables
        of the parity explanation on the same cut.
        """
        lab = self.vertices[v].label
        if lab.vars and len(lab.vars) != 1:
            raise ValueError(f"vertex {v} is neither unary nor ⊥: {lab}")
        if self.vertices[v].kind is not Kind.DERIVED:
            return (lab.as_literal(),) if lab.vars else ()
        reasons = self.implicative_explanation(v, cut)
        if parity:
            keep = set(self.parity_explanation(v, cut).vars)
            reasons = [lit for lit in reasons if abs(lit) in keep]
        head = [lab.as_literal()] if lab.vars else []
        return or_clause(head + [-lit for lit in reasons])

    # -- debug ------------------------------------------------------------

    def dump(self) -> str:
        """One line per vertex: ``v<id> <kind> L<level> [<premises>] <label>``."""
        lines = []
        for vid in sorted(self.vertices):
            x = self.vertices[vid]
            prem = ",".join(f"v{p}" for p in x.premises)
            lines.append(f"v{vid} {x.kind.value} L{x.level} [{prem}] {x.label}")
        return "\n".join(lines) + ("\n" if lines else "")


def _proviso(small: XorClause, other: XorClause) -> bool:
    if len(small.vars) == 1:
        return small.vars[0] in other.vars
    if len(small.vars) == 2:
        return small.vars[0] in other.vars or small.vars[1] in other.vars
    return False
