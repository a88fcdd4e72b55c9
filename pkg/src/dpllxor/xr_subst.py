"""Unit propagation plus equivalence substitution, done by rewriting clauses.

Each stored clause lives in a slot.  Whenever a variable becomes known, or
a binary clause ``lo ⊕ hi (⊕ ⊤)`` appears, every slot mentioning the
variable (resp. ``hi``) is rewritten by summing in the unary/binary clause.
The larger variable of a binary clause is the one eliminated, so ``hi``
survives only in the binary that eliminates it.  Every rewrite step becomes
a derivation vertex whose premises are the old slot vertex and the clause
used for the rewrite.

Backtracking restores per-level copies of the slot table.  Learned clauses
added after a copy was taken are re-inserted when that copy is restored.
"""

from __future__ import annotations

from collections import deque
from typing import Sequence

from .derivation import Kind
from .xor_algebra import XorClause, xor_sum
from .xr_up import GraphModule


class SubstModule(GraphModule):
    def __init__(self, xors: Sequence[XorClause], num_vars: int, materialize: bool = True):
        super().__init__(num_vars, materialize)
        self.slots: list = []  # (clause, vertex) or None
        self.occ: list = [set() for _ in range(num_vars + 1)]
        self.elim: dict = {}  # eliminated var -> slot of its binary
        self.unit_q: deque = deque()
        self.bin_q: deque = deque()
        self.learned: list = []  # (clause, input vertex)
        self.saved: list = []  # (level, slots, occ, elim, learned count)
        self.inputs: list = []  # (clause, vertex)
        for c in xors:
            for v in c.vars:
                self.in_formula[v] = True
        for c in xors:
            vid = self.graph.add_input(c, Kind.INPUT_CLAUSE, 0)
            self.inputs.append((c, vid))
            self._place(c, vid)

    # -- contract hooks ---------------------------------------------------

    def _enter_level(self, level: int) -> None:
        self._save()

    def add_clause(self, c: XorClause) -> int:
        if c.is_top:
            return -1
        for v in c.vars:
            if v < len(self.in_formula):
                self.in_formula[v] = True
        vid = self.graph.add_input(c, Kind.INPUT_CLAUSE, 0)
        self.learned.append((c, vid))
        self._place(c, vid)
        return vid

    def remove_clause(self, handle: int) -> None:
        """Forget a learned clause (by its input vertex) and rebuild the slot table.

        Rewrites may have folded the clause into others, so the working set
        is rebuilt from the inputs; only allowed with no assumptions made.
        """
        if self.level != 0:
            raise RuntimeError("learned clauses can only be removed at level 0")
        self.learned = [(c, v) for c, v in self.learned if v != handle]
        self.saved.clear()
        self.unit_q.clear()
        self.bin_q.clear()
        self.slots = []
        self.occ = [set() for _ in self.occ]
        self.elim = {}
        for c, vid in self.inputs + self.learned:
            if self.conflict_vertex is not None:
                break
            self._place(c, vid)

    def _enqueue(self, var: int) -> None:
        self.unit_q.append(var)

    def _after_backtrack(self, level: int) -> None:
        self.unit_q.clear()
        self.bin_q.clear()
        while self.saved and self.saved[-1][0] > level:
            self.saved.pop()
        if not self.saved:
            return
        k, slots, occ, elim, n_learned = self.saved[-1]
        if k == level:
            self.saved.pop()
        self.slots = list(slots)
        self.occ = [set(s) for s in occ]
        self.elim = dict(elim)
        for c, vid in self.learned[n_learned:]:
            if self.conflict_vertex is not None:
                break
            self._place(c, vid)

    def _save(self) -> None:
        self.saved.append((self.level, list(self.slots), [set(s) for s in self.occ],
                           dict(self.elim), len(self.learned)))

    # -- rewriting --------------------------------------------------------

    def _place(self, c: XorClause, vid: int) -> int:
        slot = len(self.slots)
        self.slots.append(None)
        self._classify(slot, c, vid)
        return slot

    def _propagate(self) -> None:
        while self.conflict_vertex is None:
            if self.unit_q:
                x = self.unit_q.popleft()
                u = self.unit_vertex[x]
                if not u:
                    continue
                for t in sorted(self.occ[x]):
                    if self.conflict_vertex is not None:
                        break
                    if self.slots[t] is not None and x in self.slots[t][0].vars:
                        self._rewrite(t, u)
            elif self.bin_q:
                s = self.bin_q.popleft()
                entry = self.slots[s]
                if entry is None or len(entry[0].vars) != 2:
                    continue
                hi = entry[0].vars[1]
                if self.elim.get(hi) != s:
                    continue
                for t in sorted(self.occ[hi]):
                    if self.conflict_vertex is not None:
                        break
                    if t != s and self.slots[t] is not None and hi in self.slots[t][0].vars:
                        self._rewrite(t, entry[1])
            else:
                break

    def _detach(self, t: int) -> tuple:
        c, v = self.slots[t]
        self.slots[t] = None
        for x in c.vars:
            self.occ[x].discard(t)
        if len(c.vars) == 2 and self.elim.get(c.vars[1]) == t:
            del self.elim[c.vars[1]]
        return c, v

    def _rewrite(self, t: int, by_vertex: int) -> None:
        c, v = self._detach(t)
        nc = xor_sum(c, self.graph.label(by_vertex))
        nv = self.graph.add_derived(v, by_vertex, level=self.level)
        self._classify(t, nc, nv)

    def _classify(self, t: int, c: XorClause, v: int) -> None:
        while True:
            if len(c.vars) <= 1:
                if c.vars or c.rhs:
                    self._settle(v)
                return
            by = 0
            for x in c.vars:
                if self.value[x] is not None:
                    by = self.unit_vertex[x]
                    break
                s = self.elim.get(x)
                if s is not None and s != t:
                    by = self.slots[s][1]
                    break
            if not by:
                break
            c = xor_sum(c, self.graph.label(by))
            v = self.graph.add_derived(v, by, level=self.level)
        self.slots[t] = (c, v)
        for x in c.vars:
            self.occ[x].add(t)
        if len(c.vars) == 2:
            self.elim[c.vars[1]] = t
            self.bin_q.append(t)

    def working_clauses(self) -> list:
        return [e[0] for e in self.slots if e is not None]
