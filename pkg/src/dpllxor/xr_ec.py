"""Equivalence-class reasoning over xor-clauses of at most three variables.

Node 0 stands for the constant ⊤; every other node is a variable.  The
union-find keeps ``diff[x] = value(x) ^ value(parent[x])`` so the relative
parity of two nodes in one class is the xor of their root-path diffs.

Each successful merge appends an edge ``(u, w, p, reason)`` asserting
``value(u) ^ value(w) == p``.  Merges only join distinct classes, so the
edges form a forest and the path between two nodes is unique.  Reasons:

* ``STAR``             a literal assigned from outside;
* ``INPUT``            a unary or binary clause of the formula;
* ``("unit", x, v)``   a ternary clause with ``x`` known to be ``v``;
* ``("bin", y, z, q)`` a ternary clause whose other two variables satisfy
  ``y ^ z == q``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .xor_algebra import XorClause
from .xr_up import BOTTOM_LIT, AssignmentError, ModuleStats

STAR = "star"
INPUT = "input"


def split_long(xors: Sequence[XorClause], fresh_start: int) -> tuple:
    """Rewrite clauses wider than three variables; returns ``(clauses, next_fresh)``.

    ``x1 ⊕ x2 ⊕ rest = r`` becomes ``x1 ⊕ x2 ⊕ y = 1`` and ``y ⊕ rest = r ^ 1``.
    """
    out = []
    fresh = fresh_start
    for c in xors:
        while len(c.vars) > 3:
            y = fresh
            fresh += 1
            out.append(XorClause.of((c.vars[0], c.vars[1], y), True))
            c = XorClause.of(c.vars[2:] + (y,), not c.rhs)
        out.append(c)
    return out, fresh


@dataclass(frozen=True, slots=True)
class Edge:
    u: int
    w: int
    parity: bool
    reason: object
    level: int


class EcModule:
    def __init__(self, xors: Sequence[XorClause], num_vars: int):
        self.num_vars = num_vars
        self.in_formula = [False] * (num_vars + 1)
        for c in xors:
            for v in c.vars:
                self.in_formula[v] = True
        clauses, top = split_long(xors, num_vars + 1)
        n = top
        self.n_nodes = n
        self.parent = list(range(n))
        self.diff = [False] * n
        self.members = [[i] for i in range(n)]
        self.known_at = [0] * n
        self.known_at[0] = 0
        self.occ: list = [[] for _ in range(n)]
        self.clauses: list = []
        self.edges: list = []
        self.adj: list = [[] for _ in range(n)]
        self.undo: list = []  # (level, small_root, big_root, newly_known)
        self.assumed: list = []  # (level, var)
        self.is_assumed = [False] * n
        self.queue: deque = deque()
        self.outputs: list = []
        self.conflict: Optional[Edge] = None
        self.level = 0
        self.stats = ModuleStats()
        for c in clauses:
            self._add_input(c)

    # -- union-find -------------------------------------------------------

    def find(self, x: int) -> tuple:
        p = False
        while self.parent[x] != x:
            p ^= self.diff[x]
            x = self.parent[x]
        return x, p

    def relation(self, a: int, b: int) -> Optional[bool]:
        """``value(a) ^ value(b)`` if ``a`` and ``b`` share a class, else ``None``."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        return pa ^ pb if ra == rb else None

    def value_of(self, x: int) -> Optional[bool]:
        rel = self.relation(0, x)
        return None if rel is None else not rel

    knows = value_of

    def classes(self) -> list:
        """Non-singleton classes as sorted lists of signed nodes; 0 is ⊤."""
        out = []
        for r in range(self.n_nodes):
            if self.parent[r] == r and len(self.members[r]) > 1:
                ref = 0 if self.find(0)[0] == r else min(self.members[r])
                cls = []
                for m in self.members[r]:
                    rel = self.relation(ref, m)
                    cls.append(-m if rel else m)
                out.append(sorted(cls, key=abs))
        return sorted(out, key=lambda c: abs(c[0]))

    def _merge(self, u: int, w: int, p: bool, reason) -> None:
        ru, pu = self.find(u)
        rw, pw = self.find(w)
        if ru == rw:
            if (pu ^ pw) != p and self.conflict is None:
                self.stats.conflicts += 1
                self.conflict = Edge(u, w, p, reason, self.level)
            return
        if len(self.members[ru]) < len(self.members[rw]):
            small, big = ru, rw
        else:
            small, big = rw, ru
        top = self.find(0)[0]
        self.parent[small] = big
        self.diff[small] = pu ^ pw ^ p
        idx = len(self.edges)
        self.edges.append(Edge(u, w, p, reason, self.level))
        self.adj[u].append(idx)
        self.adj[w].append(idx)
        if top in (small, big):
            fresh = self.members[big if top == small else small]
        else:
            fresh = []
        self.undo.append((self.level, small, big, fresh))
        self.members[big].extend(self.members[small])
        for x in fresh:
            self.known_at[x] = idx + 1
            if x <= self.num_vars and not self.is_assumed[x] and self.in_formula[x]:
                self.outputs.append(x)
        scan = fresh if top in (small, big) else self.members[small]
        for x in scan:
            self.queue.extend(self.occ[x])

    # -- module contract --------------------------------------------------

    def _add_input(self, c: XorClause) -> None:
        if len(c.vars) == 0:
            if c.rhs and self.conflict is None:
                self.stats.conflicts += 1
                self.conflict = Edge(0, 0, True, INPUT, 0)
        elif len(c.vars) == 1:
            self._merge(0, c.vars[0], not c.rhs, INPUT)
        elif len(c.vars) == 2:
            self._merge(c.vars[0], c.vars[1], c.rhs, INPUT)
        else:
            cid = len(self.clauses)
            self.clauses.append(c)
            for v in c.vars:
                self.occ[v].append(cid)
            self.queue.append(cid)

    def assign(self, lit: int, level: int) -> None:
        var = abs(lit)
        if var > self.num_vars or not self.in_formula[var]:
            return
        if self.is_assumed[var]:
            raise AssignmentError(f"variable {var} is already assigned")
        self.level = max(self.level, level)
        known = self.value_of(var)
        if known is not None:
            if known != (lit > 0):
                self._merge(0, var, lit < 0, STAR)  # records the conflict
            return
        self.stats.assumptions += 1
        self.is_assumed[var] = True
        self.assumed.append((self.level, var))
        self._merge(0, var, lit < 0, STAR)

    def deduce(self) -> list:
        while self.queue and self.conflict is None:
            self._check(self.queue.popleft())
        out = []
        for x in self.outputs:
            v = self.value_of(x)
            if v is not None:
                out.append(x if v else -x)
        self.stats.implied += len(out)
        self.outputs = []
        if self.conflict is not None:
            out.append(BOTTOM_LIT)
        return out

    def _check(self, cid: int) -> None:
        c = self.clauses[cid]
        roots = [self.find(v) for v in c.vars]
        top = self.find(0)
        for i, (r, p) in enumerate(roots):
            if r == top[0]:
                x = c.vars[i]
                val = not (p ^ top[1])
                y, z = (v for j, v in enumerate(c.vars) if j != i)
                self._merge(y, z, c.rhs ^ val, ("unit", x, val))
                return
        for i in range(3):
            for j in range(i + 1, 3):
                if roots[i][0] == roots[j][0]:
                    x1, xn = c.vars[i], c.vars[j]
                    q = roots[i][1] ^ roots[j][1]
                    y = c.vars[3 - i - j]
                    self._merge(0, y, not (c.rhs ^ q), ("bin", x1, xn, q))
                    return

    def backtrack(self, level: int) -> None:
        while self.undo and self.undo[-1][0] > level:
            _, small, big, fresh = self.undo.pop()
            self.parent[small] = small
            self.diff[small] = False
            del self.members[big][-len(self.members[small]):]
            for x in fresh:
                self.known_at[x] = 0
            e = self.edges.pop()
            self.adj[e.u].pop()
            self.adj[e.w].pop()
        while self.assumed and self.assumed[-1][0] > level:
            self.is_assumed[self.assumed.pop()[1]] = False
        self.level = min(self.level, level)
        self.queue.clear()
        self.outputs = []
        self.conflict = None

    def add_clause(self, c: XorClause) -> int:
        """Learned clauses are not used by this module; kept for interface parity."""
        raise NotImplementedError("equivalence-class module does not take learned clauses")

    # -- explanations -----------------------------------------------------

    def _path(self, s: int, t: int, bound: int) -> list:
        """Edge indices on the path from ``s`` to ``t`` using edges below ``bound``."""
        if s == t:
            return []
        prev = {s: None}
        dq = deque([s])
        while dq:
            x = dq.popleft()
            for ei in self.adj[x]:
                if ei >= bound:
                    continue
                e = self.edges[ei]
                y = e.w if e.u == x else e.u
                if y not in prev:
                    prev[y] = ei
                    if y == t:
                        dq.clear()
                        break
                    dq.append(y)
        if t not in prev:
            raise RuntimeError(f"no path between {s} and {t} below edge {bound}")
        path = []
        x = t
        while x != s:
            ei = prev[x]
            path.append(ei)
            e = self.edges[ei]
            x = e.w if e.u == x else e.u
        return path

    def _alpha(self, work: list) -> list:
        """Expand edge reasons to the set of assumption literals behind them."""
        lits: dict = {}
        seen: set = set()
        stack = list(work)
        while stack:
            item = stack.pop()
            if isinstance(item, int):
                if item in seen:
                    continue
                seen.add(item)
                e = self.edges[item]
                bound = item
            else:
                e = item
                bound = len(self.edges)
            r = e.reason
            if r == STAR:
                x = e.w if e.u == 0 else e.u
                lits[x] = not e.parity
            elif r == INPUT:
                continue
            elif r[0] == "unit":
                _, x, _ = r
                stack.extend(self._path(0, x, self.known_at[x]))
            else:
                _, y, z, _ = r
                stack.extend(self._path(y, z, bound))
        return [v if lits[v] else -v for v in sorted(lits)]

    def reason_literals(self, lit: int) -> list:
        if lit == BOTTOM_LIT:
            if self.conflict is None:
                raise KeyError("no xor-conflict recorded")
            e = self.conflict
            return self._alpha([e] + self._path(e.u, e.w, len(self.edges)))
        var = abs(lit)
        if self.value_of(var) != (lit > 0) or self.is_assumed[var]:
            raise KeyError(f"literal {lit} was not derived by the module")
        return self._alpha(self._path(0, var, self.known_at[var]))

    def explain(self, lit: int, policy=None, parity: bool = False) -> tuple:
        self.stats.explanations += 1
        head = [lit] if lit != BOTTOM_LIT else []
        return tuple(head + [-l for l in self.reason_literals(lit)])

    def parity_explanation(self, lit: int, policy=None) -> XorClause:
        raise NotImplementedError("parity explanations are not available for this module")

    def dump(self) -> str:
        lines = []
        for i, e in enumerate(self.edges):
            r = e.reason
            if isinstance(r, tuple):
                r = " ".join(str(t) for t in r)
            u = "T" if e.u == 0 else f"x{e.u}"
            w = "T" if e.w == 0 else f"x{e.w}"
            lines.append(f"@{i + 1} {u} -{int(e.parity)}- {w} [{r}]")
        return "\n".join(lines) + ("\n" if lines else "")
