"""A small watched-literal CDCL core over or-clauses.

Literals are signed ints.  Besides clause indices a trail entry's reason may
be ``EXTERNAL``: the literal came from outside (the xor part) and its
implying clause is fetched through ``explain_cb`` the first time conflict
analysis needs it.  Conflict-clause minimization asks again through
``minimize_cb``, which may return a different implying clause.
"""

from __future__ import annotations

import random
from typing import Callable, Optional, Sequence

EXTERNAL = -1
DECISION = None


def luby(i: int) -> int:
    """The ``i``-th element (from 0) of 1, 1, 2, 1, 1, 2, 4, ..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class CdclCore:
    def __init__(self, num_vars: int, var_decay: float = 0.95, clause_decay: float = 0.999,
                 seed: int = 0, default_phase: bool = False):
        n = num_vars
        self.num_vars = n
        self.value = [0] * (n + 1)
        self.level = [0] * (n + 1)
        self.reason: list = [DECISION] * (n + 1)
        self.trail: list = []
        self.trail_lim: list = []
        self.qhead = 0
        self.clauses: list = []  # list of lists, None once deleted
        self.learnt: list = []
        self.watches: list = [[] for _ in range(2 * (n + 1))]
        self.activity = [0.0] * (n + 1)
        self.var_inc = 1.0
        self.var_decay = var_decay
        self.cla_act: list = []
        self.cla_inc = 1.0
        self.clause_decay = clause_decay
        self.phase = [default_phase] * (n + 1)
        self.seen = [False] * (n + 1)
        self.ext_reason: dict = {}
        self.ext_min: dict = {}
        self.explain_cb: Optional[Callable[[int], Sequence[int]]] = None
        self.minimize_cb: Optional[Callable[[int], Sequence[int]]] = None
        self.on_unassign: Optional[Callable[[int], None]] = None
        self.unsat = False
        self.n_learnt = 0
        self.propagations = 0
        if seed:
            rng = random.Random(seed)
            for v in range(1, n + 1):
                self.activity[v] = rng.random() * 1e-3

    # -- basic state ------------------------------------------------------

    def lit_value(self, lit: int) -> int:
        v = self.value[lit if lit > 0 else -lit]
        return v if lit > 0 else -v

    def decision_level(self) -> int:
        return len(self.trail_lim)

    @staticmethod
    def _w(lit: int) -> int:
        return 2 * lit if lit > 0 else -2 * lit + 1

    def enqueue(self, lit: int, reason) -> None:
        v = abs(lit)
        self.value[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def new_level(self) -> None:
        self.trail_lim.append(len(self.trail))

    def add_clause(self, lits: Sequence[int], learnt: bool = False) -> Optional[int]:
        """Add a clause; at level 0 units are enqueued and falsity is recorded."""
        lits = list(dict.fromkeys(lits))
        if any(-l in lits for l in lits):
            return None
        if not learnt and self.decision_level() == 0:
            if any(self.lit_value(l) == 1 for l in lits):
                return None
            lits = [l for l in lits if self.lit_value(l) == 0]
        if not lits:
            self.unsat = True
            return None
        if len(lits) == 1 and not learnt:
            self.enqueue(lits[0], DECISION)
            return None
        cref = len(self.clauses)
        self.clauses.append(lits)
        self.cla_act.append(0.0)
        self.learnt.append(learnt)
        self.n_learnt += learnt
        if len(lits) > 1:
            self.watches[self._w(lits[0])].append(cref)
            self.watches[self._w(lits[1])].append(cref)
        return cref

    # -- propagation ------------------------------------------------------

    def propagate(self) -> Optional[list]:
        """Unit propagation; returns the falsified clause's literals on conflict."""
        value = self.value
        clauses = self.clauses
        watches = self.watches
        trail = self.trail
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = -p
            wi = 2 * false_lit if false_lit > 0 else -2 * false_lit + 1
            ws = watches[wi]
            keep = []
            i, n = 0, len(ws)
            while i < n:
                cref = ws[i]
                i += 1
                c = clauses[cref]
                if c is None:
                    continue
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                fv = value[first] if first > 0 else -value[-first]
                if fv == 1:
                    keep.append(cref)
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if (value[lk] if lk > 0 else -value[-lk]) != -1:
                        c[1], c[k] = lk, c[1]
                        watches[2 * lk if lk > 0 else -2 * lk + 1].append(cref)
                        break
                else:
                    keep.append(cref)
                    if fv == -1:
                        keep.extend(ws[i:])
                        watches[wi] = keep
                        self.qhead = len(trail)
                        return c
                    self.enqueue(first, cref)
            watches[wi] = keep
        return None

    # -- reasons ----------------------------------------------------------

    def reason_lits(self, v: int) -> Sequence[int]:
        r = self.reason[v]
        if r is EXTERNAL:
            c = self.ext_reason.get(v)
            if c is None:
                c = self.explain_cb(v if self.value[v] > 0 else -v)
                self.ext_reason[v] = c
            return c
        return self.clauses[r]

    def _min_reason_lits(self, v: int) -> Sequence[int]:
        if self.reason[v] is EXTERNAL and self.minimize_cb is not None:
            c = self.ext_min.get(v)
            if c is None:
                c = self.minimize_cb(v if self.value[v] > 0 else -v)
                self.ext_min[v] = c
            return c
        return self.reason_lits(v)

    # -- conflict analysis ------------------------------------------------

    def bump_var(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for i in range(1, self.num_vars + 1):
                self.activity[i] *= 1e-100
            self.var_inc *= 1e-100

    def bump_clause(self, cref: int) -> None:
        self.cla_act[cref] += self.cla_inc
        if self.cla_act[cref] > 1e20:
            for i in range(len(self.cla_act)):
                self.cla_act[i] *= 1e-20
            self.cla_inc *= 1e-20

    def decay(self) -> None:
        self.var_inc /= self.var_decay
        self.cla_inc /= self.clause_decay

    def analyze(self, confl: Sequence[int], minimize: bool = True) -> tuple:
        """First-UIP learning; returns ``(learnt, backjump_level, resolved_external_lits)``.

        ``confl`` must contain at least one literal of the current level.
        """
        seen = self.seen
        level = self.level
        cur = self.decision_level()
        out = [0]
        path = 0
        p = 0
        idx = len(self.trail) - 1
        external = []
        lits = confl
        while True:
            for q in lits:
                v = q if q > 0 else -q
                if v == p or seen[v] or level[v] == 0:
                    continue
                self.bump_var(v)
                seen[v] = True
                if level[v] >= cur:
                    path += 1
                else:
                    out.append(q)
            while not seen[abs(self.trail[idx])]:
                idx -= 1
            lit = self.trail[idx]
            idx -= 1
            p = abs(lit)
            seen[p] = False
            path -= 1
            if path == 0:
                break
            r = self.reason[p]
            if r is EXTERNAL:
                external.append(lit)
            elif r is not DECISION:
                self.bump_clause(r)
            lits = self.reason_lits(p)
        out[0] = -lit
        clear = [abs(q) for q in out[1:]]
        if minimize and len(out) > 1:
            out = self._minimize(out)
        for v in clear:
            seen[v] = False
        if len(out) == 1:
            bt = 0
        else:
            best = 1
            for i in range(2, len(out)):
                if level[abs(out[i])] > level[abs(out[best])]:
                    best = i
            out[1], out[best] = out[best], out[1]
            bt = level[abs(out[1])]
        return out, bt, external

    def _minimize(self, out: list) -> list:
        level = self.level
        seen = self.seen
        levels = 0
        for q in out[1:]:
            levels |= 1 << (level[abs(q)] & 63)
        kept = [out[0]]
        extra: list = []
        for q in out[1:]:
            v = abs(q)
            if self.reason[v] is DECISION or not self._redundant(v, levels, extra):
                kept.append(q)
        for v in extra:
            seen[v] = False
        return kept

    def _redundant(self, v0: int, levels: int, extra: list) -> bool:
        seen = self.seen
        level = self.level
        stack = [v0]
        top = len(extra)
        while stack:
            v = stack.pop()
            for q in self._min_reason_lits(v):
                u = abs(q)
                if u == v or seen[u] or level[u] == 0:
                    continue
                if self.reason[u] is not DECISION and (levels >> (level[u] & 63)) & 1:
                    seen[u] = True
                    stack.append(u)
                    extra.append(u)
                else:
                    for w in extra[top:]:
                        seen[w] = False
                    del extra[top:]
                    return False
        return True

    # -- backtracking, decisions ------------------------------------------

    def backjump(self, lvl: int) -> None:
        if self.decision_level() <= lvl:
            return
        start = self.trail_lim[lvl]
        for i in range(len(self.trail) - 1, start - 1, -1):
            lit = self.trail[i]
            v = abs(lit)
            self.phase[v] = lit > 0
            self.value[v] = 0
            self.reason[v] = DECISION
            self.ext_reason.pop(v, None)
            self.ext_min.pop(v, None)
        del self.trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = min(self.qhead, len(self.trail))

    def pick_branch(self) -> Optional[int]:
        best = 0
        best_act = -1.0
        value = self.value
        act = self.activity
        for v in range(1, self.num_vars + 1):
            if value[v] == 0 and act[v] > best_act:
                best, best_act = v, act[v]
        if not best:
            return None
        return best if self.phase[best] else -best

    # -- learned clause database ------------------------------------------

    def learnt_count(self) -> int:
        return self.n_learnt

    def locked(self, cref: int) -> bool:
        c = self.clauses[cref]
        v = abs(c[0])
        return self.reason[v] == cref and self.lit_value(c[0]) == 1

    def reduce_db(self) -> int:
        """Delete the less active half of the learned clauses (binary and locked ones stay)."""
        cands = [i for i, c in enumerate(self.clauses)
                 if c is not None and self.learnt[i] and len(c) > 2 and not self.locked(i)]
        cands.sort(key=lambda i: (self.cla_act[i], i))
        victims = cands[: len(cands) // 2]
        for i in victims:
            self.clauses[i] = None
        self.n_learnt -= len(victims)
        return len(victims)
