import random

import pytest
from hypothesis import given, settings

from dpllxor.benchgen import grid_graph, triangle, xorclauses
from dpllxor.derivation import Policy
from dpllxor.engine import PRESETS, SolverConfig, Stats, Status, solve
from dpllxor.formula_io import CnfXorFormula
from dpllxor.oracle import ModelSet, is_satisfiable
from dpllxor.xor_algebra import evaluate
from helpers import A, B, C, D, E, cnfxor_formulas, random_formula, x

G = 6
LEARN_TRACE = CnfXorFormula(6, [(-A, -C), (-D, -E, G), (-D, -E, -G)],
                     [x(A, B, C, top=True), x(B, C, D, E)])


def satisfies(f, model):
    return (all(any(model[abs(l)] == (l > 0) for l in c) for c in f.or_clauses)
            and all(evaluate(c, model) for c in f.xor_clauses))


@pytest.mark.parametrize("name", PRESETS)
def test_unit_and_xor(name):
    r = solve(CnfXorFormula(2, [(A,)], [x(A, B)]), SolverConfig.preset(name))
    assert r.status is Status.SAT
    assert r.model == {A: True, B: False}


@pytest.mark.parametrize("name", PRESETS)
def test_triangle_unsat(name):
    r = solve(xorclauses(triangle()), SolverConfig.preset(name))
    assert r.status is Status.UNSAT


def test_triangle_needs_a_conflict_in_cnf():
    r = solve(xorclauses(triangle()), SolverConfig.preset("none"))
    assert r.stats.conflicts >= 1


def test_uncharged_triangle_sat():
    f = xorclauses(triangle(total_charge=False))
    r = solve(f, SolverConfig.preset("up-pexp-learn"))
    assert r.status is Status.SAT and satisfies(f, r.model)


def test_learning_trace_unfiltered():
    cfg = SolverConfig.preset("up-pexp-learn", default_phase=True, xor_filter=False)
    r = solve(LEARN_TRACE, cfg)
    assert r.status is Status.SAT
    assert r.stats.decisions == 3
    assert r.stats.learned_xor == 1
    assert r.learned_xors == [x(A, D, E)]
    assert ModelSet(LEARN_TRACE).entails(x(A, D, E))


def test_learning_trace_filtered():
    cfg = SolverConfig.preset("up-pexp-learn", default_phase=True)
    r = solve(LEARN_TRACE, cfg)
    assert r.status is Status.SAT
    assert r.stats.learned_xor == 0 and r.stats.xor_rejected_filter == 1


def test_fresh_stats_are_zero():
    s = Stats()
    assert all(line.endswith("=0") for line in s.lines())
    assert all(line.startswith("c ") for line in s.lines())


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(module="ec", explanation="parity")
    with pytest.raises(ValueError):
        SolverConfig(module="up", explanation="implicative", learn_xor=True)
    with pytest.raises(ValueError):
        SolverConfig.preset("nope")


def test_budget_gives_unknown():
    f = xorclauses(grid_graph(4, True))
    r = solve(f, SolverConfig.preset("none", max_conflicts=5))
    assert r.status is Status.UNKNOWN and r.stats.conflicts <= 6
    r = solve(f, SolverConfig.preset("none", max_seconds=0.0))
    assert r.status is Status.UNKNOWN


def test_empty_formula():
    assert solve(CnfXorFormula(0, [], []), SolverConfig()).status is Status.SAT
    assert solve(CnfXorFormula(1, [()], []), SolverConfig()).status is Status.UNSAT


CONFIGS = [SolverConfig.preset(n) for n in PRESETS] + [
    SolverConfig(module="ec", explanation="implicative"),
    SolverConfig(module="subst", explanation="implicative"),
    SolverConfig.preset("up-pexp-learn", cut_primary=Policy.FIRST_UIP, eager=True),
    SolverConfig.preset("up-subst-learn", materialize=False, xor_filter=False),
    SolverConfig.preset("up-pexp-learn", cut_primary=Policy.FURTHEST, xor_filter=False),
]


@settings(max_examples=150, deadline=None)
@given(cnfxor_formulas(max_vars=9, max_clauses=20))
def test_agrees_with_oracle(f):
    expected = is_satisfiable(f)
    ms = ModelSet(f)
    for cfg in CONFIGS:
        rec = []
        r = solve(f, cfg, rec)
        assert (r.status is Status.SAT) == expected, cfg
        if expected:
            assert satisfies(f, r.model)
        for e in rec:
            assert ms.entails(e.clause)
        for c in r.learned_xors:
            assert ms.entails(c)


def test_same_seed_same_stats():
    rng = random.Random(11)
    fs = [random_formula(rng) for _ in range(40)]
    for name in PRESETS:
        for seed in (0, 5):
            cfg = SolverConfig.preset(name, seed=seed)
            a = [solve(f, cfg).stats.lines() for f in fs]
            b = [solve(f, cfg).stats.lines() for f in fs]
            assert a == b
