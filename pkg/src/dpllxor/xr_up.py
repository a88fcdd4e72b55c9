"""Unit propagation over xor-clauses with two watched variables.

The module mirrors the assignment it receives from the CDCL side
(*assumptions*) and the literals it derives itself.  Every derivation is
recorded in a :class:`DerivationGraph` so that implying or-clauses and
parity explanations can be produced on request.

When a clause becomes unit (or fully assigned with the wrong parity) its
consequence is recorded as a chain: the clause vertex is combined with the
unit vertex of each assigned variable, in the order those variables were
assigned.  With ``materialize=False`` the chain collapses into one vertex
whose premises are all of those vertices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .derivation import DerivationGraph, Kind, Policy
from .xor_algebra import TOP, XorClause

BOTTOM_LIT = 0


class AssignmentError(ValueError):
    pass


@dataclass
class ModuleStats:
    assumptions: int = 0
    implied: int = 0
    conflicts: int = 0
    explanations: int = 0


class GraphModule:
    """Bookkeeping shared by modules that record a derivation graph."""

    def __init__(self, num_vars: int, materialize: bool = True):
        self.num_vars = num_vars
        self.materialize = materialize
        self.graph = DerivationGraph()
        self.value: list = [None] * (num_vars + 1)
        self.assumed: list = [False] * (num_vars + 1)
        self.unit_vertex: list = [0] * (num_vars + 1)
        self.pos: list = [0] * (num_vars + 1)
        self.trail: list = []  # (var, level)
        self.level = 0
        self.conflict_vertex: Optional[int] = None
        self.outputs: list = []
        self.stats = ModuleStats()
        self.in_formula: list = [False] * (num_vars + 1)

    # -- contract ---------------------------------------------------------

    def knows(self, var: int) -> Optional[bool]:
        return self.value[var] if var < len(self.value) else None

    def assign(self, lit: int, level: int) -> None:
        var = abs(lit)
        if var >= len(self.in_formula) or not self.in_formula[var]:
            return
        if level > self.level:
            self._enter_level(level)
            self.level = level
        val = lit > 0
        cur = self.value[var]
        if cur is not None:
            if self.assumed[var]:
                raise AssignmentError(f"variable {var} is already assigned")
            if cur != val and self.conflict_vertex is None:
                v = self.graph.add_input(XorClause.unit(lit), Kind.INPUT_ASSUMPTION, self.level)
                self._set_conflict(self.graph.add_derived(self.unit_vertex[var], v, level=self.level))
            return
        self.stats.assumptions += 1
        v = self.graph.add_input(XorClause.unit(lit), Kind.INPUT_ASSUMPTION, self.level)
        self.assumed[var] = True
        self._set(var, val, v)

    def deduce(self) -> list:
        if self.conflict_vertex is None:
            self._propagate()
        out = [lit for lit in self.outputs if self.value[abs(lit)] == (lit > 0)]
        self.outputs = []
        if self.conflict_vertex is not None:
            out.append(BOTTOM_LIT)
        return out

    def backtrack(self, level: int) -> None:
        if level >= self.level:
            return
        while self.trail and self.trail[-1][1] > level:
            var, _ = self.trail.pop()
            self.value[var] = None
            self.assumed[var] = False
            self.unit_vertex[var] = 0
            self._unset(var)
        self.graph.truncate(level)
        self.level = level
        self.conflict_vertex = None
        self.outputs = []
        self._after_backtrack(level)

    def vertex_of(self, lit: int) -> int:
        if lit == BOTTOM_LIT:
            if self.conflict_vertex is None:
                raise KeyError("no xor-conflict recorded")
            return self.conflict_vertex
        var = abs(lit)
        if self.value[var] != (lit > 0) or self.assumed[var] or not self.unit_vertex[var]:
            raise KeyError(f"literal {lit} was not derived by the module")
        return self.unit_vertex[var]

    def explain(self, lit: int, policy: Policy = Policy.CLOSEST, parity: bool = True) -> tuple:
        self.stats.explanations += 1
        return self.graph.implying_or_clause(self.vertex_of(lit), policy, parity)

    def parity_explanation(self, lit: int, policy: Policy = Policy.FURTHEST) -> XorClause:
        v = self.vertex_of(lit)
        if self.graph[v].kind is not Kind.DERIVED:
            return TOP  # the literal is itself a stored clause
        return self.graph.parity_explanation(v, policy)

    def explanation_inputs(self, lit: int, policy: Policy) -> list:
        """Labels of input clauses the parity explanation of ``lit`` relies on."""
        v = self.vertex_of(lit)
        if self.graph[v].kind is not Kind.DERIVED:
            return [self.graph[v].label]
        return [self.graph[u].label for u in self.graph.parity_inputs(v, policy)]

    # -- helpers ----------------------------------------------------------

    def _set(self, var: int, val: bool, vertex: int) -> None:
        self.value[var] = val
        self.unit_vertex[var] = vertex
        self.pos[var] = len(self.trail)
        self.trail.append((var, self.level))
        self._enqueue(var)

    def _derive_unit(self, var: int, val: bool, vertex: int) -> None:
        self.stats.implied += 1
        self._set(var, val, vertex)
        self.outputs.append(var if val else -var)

    def _set_conflict(self, vertex: int) -> None:
        self.stats.conflicts += 1
        self.conflict_vertex = vertex

    def _chain(self, start: int, vars_in_order: Sequence[int]) -> int:
        if not vars_in_order:
            return start
        units = [self.unit_vertex[x] for x in vars_in_order]
        if not self.materialize:
            return self.graph.add_derived(start, *units, level=self.level, check=False)
        cur = start
        for u in units:
            cur = self.graph.add_derived(cur, u, level=self.level, check=False)
        return cur

    def _settle(self, label_vertex: int) -> None:
        """Record what a unary or empty derived vertex says."""
        lab = self.graph.label(label_vertex)
        if not lab.vars:
            if lab.rhs:
                self._set_conflict(label_vertex)
            return
        var = lab.vars[0]
        cur = self.value[var]
        if cur is None:
            self._derive_unit(var, lab.rhs, label_vertex)
        elif cur != lab.rhs:
            self._set_conflict(self.graph.add_derived(self.unit_vertex[var], label_vertex, level=self.level))

    # hooks
    def _enter_level(self, level: int) -> None:
        pass

    def _enqueue(self, var: int) -> None:
        raise NotImplementedError

    def _unset(self, var: int) -> None:
        pass

    def _propagate(self) -> None:
        raise NotImplementedError

    def _after_backtrack(self, level: int) -> None:
        pass


class UpModule(GraphModule):
    def __init__(self, xors: Sequence[XorClause], num_vars: int, materialize: bool = True):
        super().__init__(num_vars, materialize)
        self.clauses: list = []
        self.cvertex: list = []
        self.watch: list = []
        self.watches: list = [[] for _ in range(num_vars + 1)]
        self.queue: deque = deque()
        self.dead: list = []
        for c in xors:
            for v in c.vars:
                self.in_formula[v] = True
        for c in xors:
            self.add_clause(c)

    def _enqueue(self, var: int) -> None:
        self.queue.append(var)

    def _after_backtrack(self, level: int) -> None:
        self.queue.clear()

    def add_clause(self, c: XorClause) -> int:
        """Store an input or learned clause (valid at every level)."""
        if c.is_top:
            return -1
        cid = len(self.clauses)
        self.clauses.append(c)
        self.dead.append(False)
        vid = self.graph.add_input(c, Kind.INPUT_CLAUSE, 0)
        self.cvertex.append(vid)
        for v in c.vars:
            if v < len(self.in_formula):
                self.in_formula[v] = True
        if len(c.vars) < 2:
            self.watch.append(())
            if c.is_bottom:
                if self.conflict_vertex is None:
                    self._set_conflict(vid)
            else:
                var = c.vars[0]
                if self.value[var] is None:
                    self._derive_unit(var, c.rhs, vid)
                elif self.value[var] != c.rhs and self.conflict_vertex is None:
                    self._set_conflict(self.graph.add_derived(self.unit_vertex[var], vid, level=self.level))
            return cid
        free = [v for v in c.vars if self.value[v] is None]
        assigned = sorted((v for v in c.vars if self.value[v] is not None), key=self.pos.__getitem__)
        pick = (free + assigned[::-1])[:2]
        self.watch.append(pick)
        for w in pick:
            self.watches[w].append(cid)
        if len(free) <= 1 and self.conflict_vertex is None:
            self._fire(cid)
        return cid

    def remove_clause(self, cid: int) -> None:
        """Stop using a learned clause; its graph vertex stays for old explanations."""
        self.dead[cid] = True

    def _fire(self, cid: int) -> None:
        """Clause ``cid`` has at most one unassigned variable."""
        c = self.clauses[cid]
        known = sorted((v for v in c.vars if self.value[v] is not None), key=self.pos.__getitem__)
        if len(known) == len(c.vars):
            par = False
            for v in known:
                par ^= self.value[v]
            if par == c.rhs:
                return
        self._settle(self._chain(self.cvertex[cid], known))

    def _propagate(self) -> None:
        value = self.value
        while self.queue and self.conflict_vertex is None:
            var = self.queue.popleft()
            wl = self.watches[var]
            keep = []
            i = 0
            n = len(wl)
            while i < n:
                cid = wl[i]
                i += 1
                if self.dead[cid]:
                    continue
                w = self.watch[cid]
                other = w[1] if w[0] == var else w[0]
                moved = False
                for x in self.clauses[cid].vars:
                    if x != var and x != other and value[x] is None:
                        if w[0] == var:
                            w[0] = x
                        else:
                            w[1] = x
                        self.watches[x].append(cid)
                        moved = True
                        break
                if moved:
                    continue
                keep.append(cid)
                if value[other] is None or self._wrong_parity(cid):
                    self._fire(cid)
                    if self.conflict_vertex is not None:
                        keep.extend(wl[i:])
                        break
            self.watches[var] = keep

    def _wrong_parity(self, cid: int) -> bool:
        c = self.clauses[cid]
        par = False
        for v in c.vars:
            par ^= self.value[v]
        return par != c.rhs
