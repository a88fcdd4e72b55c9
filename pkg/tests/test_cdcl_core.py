import random

from dpllxor.cdcl_core import DECISION, EXTERNAL, CdclCore, luby
from dpllxor.formula_io import CnfXorFormula
from dpllxor.oracle import ModelSet


def core_with(n, clauses):
    c = CdclCore(n)
    for cl in clauses:
        c.add_clause(cl)
    return c


def decide(core, lit):
    core.new_level()
    core.enqueue(lit, DECISION)


def test_binary_propagates():
    c = core_with(2, [(1, 2)])
    decide(c, -1)
    assert c.propagate() is None
    assert c.trail == [-1, 2] and c.level[2] == 1


def test_contradictory_units():
    c = core_with(1, [(1,)])
    c.add_clause((-1,))
    assert c.unsat


def test_chain():
    c = core_with(3, [(-1, 2), (-2, 3)])
    decide(c, 1)
    assert c.propagate() is None
    assert c.trail == [1, 2, 3]


def test_single_decision_conflict():
    c = core_with(2, [(-1, 2), (-1, -2)])
    decide(c, 1)
    confl = c.propagate()
    assert confl is not None
    learnt, bt, ext = c.analyze(confl)
    assert learnt == [-1] and bt == 0 and ext == []


def test_first_uip_is_asserting():
    # level 1: x1; level 2: x2 -> x3 -> x4 -> x5, conflict with x1
    cl = [(-2, 3), (-3, 4), (-4, 5), (-1, -5, -3)]
    c = core_with(5, cl)
    decide(c, 1)
    c.propagate()
    decide(c, 2)
    confl = c.propagate()
    learnt, bt, _ = c.analyze(confl, minimize=False)
    at_two = [l for l in learnt if c.level[abs(l)] == 2]
    assert at_two == [learnt[0]] and learnt[0] == -3
    assert bt == 1
    assert ModelSet(CnfXorFormula(5, cl, [])).entails(learnt)
    c.backjump(bt)
    assert c.trail == [1]
    c.add_clause(learnt, learnt=True)
    c.enqueue(learnt[0], len(c.clauses) - 1)
    assert c.propagate() is None and -2 in c.trail


def test_external_reason_fetched_lazily():
    calls = []

    def explain(lit):
        calls.append(lit)
        return (lit, -1)

    c = core_with(2, [(-1, -2)])
    c.explain_cb = explain
    decide(c, 1)
    c.enqueue(2, EXTERNAL)
    assert calls == []
    confl = c.propagate()
    learnt, bt, ext = c.analyze(confl)
    assert calls == [2] and ext == [2]
    assert learnt == [-1] and bt == 0


def test_decide_follows_activity():
    c = CdclCore(6)
    assert c.pick_branch() is not None
    c.bump_var(5)
    assert abs(c.pick_branch()) == 5
    for v in range(1, 7):
        c.enqueue(v, DECISION)
    assert c.pick_branch() is None


def test_backjump_levels():
    c = CdclCore(4)
    c.enqueue(4, DECISION)
    for lit in (1, 2, 3):
        decide(c, lit)
    c.backjump(1)
    assert c.trail == [4, 1]
    c.backjump(0)
    assert c.trail == [4] and c.decision_level() == 0


def test_luby():
    assert [luby(i) for i in range(15)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


def test_reduce_db_keeps_binary_and_counts():
    c = CdclCore(8)
    for i in range(6):
        c.add_clause((1, 2, 3 + i), learnt=True)
    c.add_clause((7, 8), learnt=True)
    assert c.learnt_count() == 7
    assert c.reduce_db() == 3
    assert c.learnt_count() == 4
    assert c.clauses[6] == [7, 8]


def test_learned_clauses_entailed_random():
    rng = random.Random(3)
    for _ in range(200):
        n = rng.randint(3, 8)
        cls = [tuple(rng.choice((1, -1)) * v for v in rng.sample(range(1, n + 1), rng.randint(1, 3)))
               for _ in range(rng.randint(3, 14))]
        ms = ModelSet(CnfXorFormula(n, cls, []))
        c = core_with(n, cls)
        if c.unsat or c.propagate() is not None:
            continue
        for _ in range(n):
            lit = c.pick_branch()
            if lit is None:
                break
            decide(c, lit)
            confl = c.propagate()
            if confl is not None:
                learnt, _, _ = c.analyze(confl)
                assert ms.entails(learnt)
                break
