"""Batch experiments: verdict agreement with brute force, and grid hardness runs."""

from __future__ import annotations

import random
import statistics
import time
from dataclasses import dataclass, field

from .benchgen import grid_graph, random_cnfxor, xorclauses
from .engine import PRESETS, ExplanationRecord, SolverConfig, Status, solve
from .oracle import ModelSet


@dataclass(frozen=True)
class AgreementConfig:
    instances: int = 1000
    seed: int = 0
    max_vars: int = 12
    max_clauses: int = 30
    presets: tuple = tuple(PRESETS)
    record: bool = True  # keep every implying clause handed to conflict analysis


@dataclass
class AgreementRun:
    preset: str
    index: int
    expected: bool
    status: Status
    model_ok: bool
    stats: list
    explanations: list = field(default_factory=list)
    learned_xors: list = field(default_factory=list)


@dataclass
class AgreementReport:
    runs: list
    seconds: float
    models: list  # ModelSet per instance, for follow-up entailment checks

    @property
    def mismatches(self) -> list:
        return [r for r in self.runs
                if (r.status is Status.SAT) != r.expected or r.status is Status.UNKNOWN
                or not r.model_ok]


def _model_ok(ms: ModelSet, f, model) -> bool:
    if model is None:
        return True
    row = [model.get(v, False) for v in range(1, f.num_vars + 1)]
    return bool(((ms.models == row).all(axis=1)).any()) if len(ms) else False


def oracle_agreement(cfg: AgreementConfig = AgreementConfig()) -> AgreementReport:
    rng = random.Random(cfg.seed)
    formulas = [random_cnfxor(rng, cfg.max_vars, cfg.max_clauses) for _ in range(cfg.instances)]
    models = [ModelSet(f) for f in formulas]
    runs = []
    t0 = time.perf_counter()
    for name in cfg.presets:
        scfg = SolverConfig.preset(name, seed=cfg.seed)
        for i, (f, ms) in enumerate(zip(formulas, models)):
            rec: list = [] if cfg.record else None
            res = solve(f, scfg, rec)
            runs.append(AgreementRun(name, i, len(ms) > 0, res.status,
                                     _model_ok(ms, f, res.model), res.stats.lines(),
                                     rec or [], res.learned_xors))
    return AgreementReport(runs, time.perf_counter() - t0, models)


@dataclass(frozen=True)
class SeparationConfig:
    sizes: tuple = (3, 4, 5, 6)
    seeds: tuple = (0, 1, 2)
    baseline: str = "none"
    candidate: str = "up-pexp-learn"
    max_conflicts: int = 10**6
    max_seconds: float = 30.0  # per solver run
    ratio_bound: float = 0.2


@dataclass
class GridRun:
    size: int
    preset: str
    seed: int
    status: Status
    decisions: int
    conflicts: int
    seconds: float
    stats: list


@dataclass
class SeparationReport:
    runs: list
    largest_common: int | None
    median_baseline: float | None
    median_candidate: float | None

    @property
    def ratio(self) -> float | None:
        if self.median_baseline in (None, 0):
            return None
        return self.median_candidate / self.median_baseline


def _grid_runs(m: int, preset: str, cfg: SeparationConfig) -> list:
    out = []
    for seed in cfg.seeds:
        f = xorclauses(grid_graph(m, True, seed))
        scfg = SolverConfig.preset(preset, seed=seed, max_conflicts=cfg.max_conflicts,
                                   max_seconds=cfg.max_seconds)
        t0 = time.perf_counter()
        res = solve(f, scfg)
        out.append(GridRun(m, preset, seed, res.status, res.stats.decisions,
                           res.stats.conflicts, time.perf_counter() - t0, res.stats.lines()))
        if res.status is Status.UNKNOWN:
            break  # the size is out of reach for this preset
    return out


def hardness_separation(cfg: SeparationConfig = SeparationConfig(), log=None) -> SeparationReport:
    """Grow the torus until the baseline stops finishing; compare decisions at the last common size."""
    runs = []
    largest = None
    medians = (None, None)
    for m in sorted(cfg.sizes):
        cand = _grid_runs(m, cfg.candidate, cfg)
        base = _grid_runs(m, cfg.baseline, cfg)
        runs += cand + base
        if log is not None:
            for r in cand + base:
                log(r)
        done = all(r.status is Status.UNSAT for r in cand + base)
        if not done or len(base) < len(cfg.seeds):
            break
        largest = m
        medians = (statistics.median(r.decisions for r in base),
                   statistics.median(r.decisions for r in cand))
    return SeparationReport(runs, largest, *medians)


__all__ = ["AgreementConfig", "AgreementReport", "ExplanationRecord", "SeparationConfig",
           "SeparationReport", "hardness_separation", "oracle_agreement"]
