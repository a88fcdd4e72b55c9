"""The CDCL + xor-module integration loop.

Per round: unit-propagate the or-clauses, hand every new trail literal to
the xor module, collect its deductions and push them onto the trail with a
lazily fetched implying clause.  A deduced ``⊥`` or a deduced literal that
is already false turns into the conflict clause.  When nothing new comes
out the solver analyses the conflict or makes a decision.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Optional

from .cdcl_core import DECISION, EXTERNAL, CdclCore, luby
from .derivation import Kind, NotCnfCompatible, Policy
from .formula_io import CnfXorFormula, export_cnf
from .xor_algebra import XorClause, evaluate, evaluate_or
from .xor_learning import LearnedXorDb, conservative_filter, derive_learnable
from .xr_ec import EcModule
from .xr_subst import SubstModule
from .xr_up import BOTTOM_LIT, UpModule


class Status(Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"


PRESETS = {
    "none": dict(module="none"),
    "up": dict(module="up", explanation="implicative"),
    "up-pexp": dict(module="up", explanation="parity"),
    "up-pexp-learn": dict(module="up", explanation="parity", learn_xor=True),
    "up-subst-learn": dict(module="subst", explanation="parity", learn_xor=True),
}


@dataclass(frozen=True)
class SolverConfig:
    module: str = "up"  # none | up | subst | ec
    explanation: str = "parity"  # implicative | parity
    cut_primary: Policy = Policy.CLOSEST
    cut_minimize: Policy = Policy.FURTHEST
    learn_xor: bool = False
    xor_filter: bool = True
    eager: bool = False
    materialize: bool = True
    minimize: bool = True
    restart_base: int = 100
    var_decay: float = 0.95
    learnt_factor: float = 1 / 3
    learnt_growth: float = 1.1
    xor_growth: float = 1.1
    seed: int = 0
    default_phase: bool = False
    max_conflicts: Optional[int] = None
    max_seconds: Optional[float] = None
    verify_model: bool = True

    def __post_init__(self) -> None:
        if self.module not in ("none", "up", "subst", "ec"):
            raise ValueError(f"unknown xor module {self.module!r}")
        if self.explanation not in ("implicative", "parity"):
            raise ValueError(f"unknown explanation mode {self.explanation!r}")
        if self.explanation == "parity" and self.module not in ("up", "subst"):
            raise ValueError("parity explanations need the up or subst module")
        if self.learn_xor and self.explanation != "parity":
            raise ValueError("xor learning needs parity explanations")

    @classmethod
    def preset(cls, name: str, **overrides) -> "SolverConfig":
        if name not in PRESETS:
            raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
        base = dict(PRESETS[name])
        if base["module"] == "none":
            base["explanation"] = "implicative"
        base.update(overrides)
        return cls(**base)


@dataclass
class Stats:
    decisions: int = 0
    cnf_propagations: int = 0
    xor_assumptions: int = 0
    xor_implied: int = 0
    conflicts: int = 0
    xor_conflicts: int = 0
    explanations: int = 0
    explanation_size_sum: int = 0
    explanation_size_max: int = 0
    learned_or: int = 0
    learned_xor: int = 0
    xor_rejected_filter: int = 0
    xor_rejected_duplicate: int = 0
    xor_zero_level: int = 0
    xor_db_reductions: int = 0
    restarts: int = 0

    def lines(self) -> list:
        return [f"c {k}={v}" for k, v in asdict(self).items()]


@dataclass
class Result:
    status: Status
    model: Optional[dict] = None
    stats: Stats = field(default_factory=Stats)
    learned_xors: list = field(default_factory=list)


@dataclass
class ExplanationRecord:
    lit: int
    clause: tuple
    parity_vars: tuple
    implicative_vars: tuple


def _make_module(f: CnfXorFormula, cfg: SolverConfig):
    if cfg.module == "up":
        return UpModule(f.xor_clauses, f.num_vars, materialize=cfg.materialize)
    if cfg.module == "subst":
        return SubstModule(f.xor_clauses, f.num_vars, materialize=cfg.materialize)
    if cfg.module == "ec":
        return EcModule(f.xor_clauses, f.num_vars)
    return None


class Engine:
    def __init__(self, f: CnfXorFormula, cfg: SolverConfig = SolverConfig(),
                 record: Optional[list] = None):
        self.formula = f
        self.cfg = cfg
        self.stats = Stats()
        self.record = record
        work = export_cnf(f) if cfg.module == "none" else f
        self.core = CdclCore(f.num_vars, var_decay=cfg.var_decay, seed=cfg.seed,
                             default_phase=cfg.default_phase)
        self.core.explain_cb = self._explain_primary
        self.core.minimize_cb = self._explain_minimize if cfg.module in ("up", "subst") else None
        for c in work.or_clauses:
            self.core.add_clause(c)
        self.module = _make_module(work, cfg)
        self.xdb = LearnedXorDb(work.xor_clauses, growth=cfg.xor_growth) if cfg.learn_xor else None
        self.mhead = 0
        self.candidates: list = []
        self.n_orig = max(1, sum(1 for c in self.core.clauses if c is not None))

    # -- explanations -----------------------------------------------------

    def _note_explanation(self, lit: int, clause: tuple) -> None:
        s = self.stats
        s.explanations += 1
        s.explanation_size_sum += len(clause)
        s.explanation_size_max = max(s.explanation_size_max, len(clause))

    def _explain(self, lit: int, policy: Policy) -> tuple:
        parity = self.cfg.explanation == "parity"
        m = self.module
        try:
            clause = m.explain(lit, policy, parity)
        except NotCnfCompatible:
            clause = m.explain(lit, Policy.FURTHEST, parity)
        self._note_explanation(lit, clause)
        if self.record is not None and parity:
            pv = tuple(m.parity_explanation(lit, policy).vars)
            cv = tuple(abs(x) for x in m.explain(lit, policy, False) if abs(x) != abs(lit))
            self.record.append(ExplanationRecord(lit, clause, pv, cv))
        elif self.record is not None:
            self.record.append(ExplanationRecord(lit, clause, (), ()))
        if self.xdb is not None:
            self._learning_candidate(lit)
        return clause

    def _explain_primary(self, lit: int) -> tuple:
        return self._explain(lit, self.cfg.cut_primary)

    def _explain_minimize(self, lit: int) -> tuple:
        return self._explain(lit, self.cfg.cut_minimize)

    def _learning_candidate(self, lit: int) -> None:
        m = self.module
        pol = Policy.FURTHEST
        pexpl = m.parity_explanation(lit, pol)
        for c in m.explanation_inputs(lit, pol):
            self.xdb.bump(c)
        cand = derive_learnable(lit, pexpl)
        if not self.xdb.is_new(cand) or cand in self.candidates:
            self.stats.xor_rejected_duplicate += 1
            return
        core = self.core
        if self.cfg.xor_filter:
            ok, zero = conservative_filter(cand, lambda v: core.level[v], core.decision_level())
            if not ok:
                self.stats.xor_rejected_filter += 1
                return
            if zero:
                self.stats.xor_zero_level += 1
        self.candidates.append(cand)

    # -- main loop --------------------------------------------------------

    def _backjump(self, lvl: int) -> None:
        self.core.backjump(lvl)
        if self.module is not None:
            self.module.backtrack(lvl)
        self.mhead = min(self.mhead, len(self.core.trail))

    def _xor_round(self) -> tuple:
        """Feed new trail literals to the module and collect its deductions.

        Returns ``(conflict_clause_or_None, progress)``.
        """
        core = self.core
        m = self.module
        trail = core.trail
        while self.mhead < len(trail):
            lit = trail[self.mhead]
            self.mhead += 1
            v = abs(lit)
            if core.reason[v] is EXTERNAL:
                continue
            m.assign(lit, core.level[v])
        implied = m.deduce()
        progress = False
        for lit in implied:
            if lit == BOTTOM_LIT:
                self.stats.xor_conflicts += 1
                return self._conflict_from(BOTTOM_LIT), progress
            val = core.lit_value(lit)
            if val == 1:
                continue
            if val == -1:
                self.stats.xor_conflicts += 1
                return self._conflict_from(lit), progress
            self.stats.xor_implied += 1
            core.enqueue(lit, EXTERNAL)
            if self.cfg.eager:
                core.ext_reason[abs(lit)] = self._explain_primary(lit)
            progress = True
        self.mhead = len(trail)
        return None, progress

    def _conflict_from(self, lit: int) -> list:
        clause = self._explain_primary(lit)
        return list(clause)

    def _verify(self, model: dict) -> None:
        f = self.formula
        for c in f.or_clauses:
            if not evaluate_or(c, model):
                raise AssertionError(f"model falsifies or-clause {c}")
        for c in f.xor_clauses:
            if not evaluate(c, model):
                raise AssertionError(f"model falsifies xor-clause {c}")

    def solve(self) -> Result:
        core = self.core
        cfg = self.cfg
        st = self.stats
        if core.unsat:
            return self._finish(Status.UNSAT)
        restart_no = 0
        restart_budget = luby(0) * cfg.restart_base
        conflicts_here = 0
        max_learnts = self.n_orig * cfg.learnt_factor + 10
        deadline = None if cfg.max_seconds is None else time.monotonic() + cfg.max_seconds
        while True:
            confl = core.propagate()
            if confl is None and self.module is not None:
                confl, progress = self._xor_round()
                if confl is None and progress:
                    continue
            if confl is not None:
                st.conflicts += 1
                conflicts_here += 1
                if not self._resolve(confl):
                    return self._finish(Status.UNSAT)
                if cfg.max_conflicts is not None and st.conflicts >= cfg.max_conflicts:
                    return self._finish(Status.UNKNOWN)
                if deadline is not None and time.monotonic() > deadline:
                    return self._finish(Status.UNKNOWN)
                if conflicts_here >= restart_budget:
                    st.restarts += 1
                    restart_no += 1
                    conflicts_here = 0
                    restart_budget = luby(restart_no) * cfg.restart_base
                    self._backjump(0)
                    max_learnts *= cfg.learnt_growth
                    self._reduce_xors()
                if core.learnt_count() - len(core.trail) >= max_learnts:
                    core.reduce_db()
                continue
            lit = core.pick_branch()
            if lit is None:
                model = {v: core.value[v] > 0 for v in range(1, core.num_vars + 1)}
                if cfg.verify_model:
                    self._verify(model)
                return self._finish(Status.SAT, model)
            st.decisions += 1
            core.new_level()
            core.enqueue(lit, DECISION)

    def _resolve(self, confl: list) -> bool:
        """Learn from ``confl`` and backjump; False when the formula is refuted."""
        core = self.core
        if not confl:
            return False
        top = max(core.level[abs(l)] for l in confl)
        if top == 0:
            return False
        if top < core.decision_level():
            self._backjump(top)
        learnt, bt, _ = core.analyze(confl, minimize=self.cfg.minimize)
        candidates, self.candidates = self.candidates, []
        self._backjump(bt)
        self.stats.learned_or += 1
        if len(learnt) == 1:
            core.enqueue(learnt[0], DECISION)
        else:
            cref = core.add_clause(learnt, learnt=True)
            core.bump_clause(cref)
            core.enqueue(learnt[0], cref)
        core.decay()
        if self.xdb is not None:
            self.xdb.decay_all()
            for c in candidates:
                if self.xdb.is_new(c):
                    handle = self.module.add_clause(c)
                    self.xdb.add(c, handle)
                    self.stats.learned_xor += 1
        return True

    def _reduce_xors(self) -> None:
        if self.xdb is None:
            return
        self.xdb.on_restart()
        if len(self.xdb) <= self.xdb.capacity:
            return
        removed = self.xdb.reduce(self._pinned_xors())
        if removed:
            self.stats.xor_db_reductions += 1
            for c in removed:
                self.module.remove_clause(self.xdb.handles.pop(c))

    def _pinned_xors(self) -> set:
        """Learned clauses behind literals the module currently reports as implied."""
        m = self.module
        g = m.graph
        pinned = set()
        for v in range(1, m.num_vars + 1):
            u = m.unit_vertex[v]
            if u and not m.assumed[v] and g[u].kind is Kind.DERIVED:
                for w in g.cone(u):
                    if g[w].kind is Kind.INPUT_CLAUSE and g[w].label in self.xdb:
                        pinned.add(g[w].label)
            elif u and g[u].kind is Kind.INPUT_CLAUSE and g[u].label in self.xdb:
                pinned.add(g[u].label)
        return pinned

    def _finish(self, status: Status, model: Optional[dict] = None) -> Result:
        self.stats.cnf_propagations = self.core.propagations
        if self.module is not None:
            self.stats.xor_assumptions = self.module.stats.assumptions
        learned = self.xdb.clauses() if self.xdb is not None else []
        return Result(status, model, replace(self.stats), learned)


def solve(f: CnfXorFormula, cfg: SolverConfig = SolverConfig(), record: Optional[list] = None) -> Result:
    return Engine(f, cfg, record).solve()
