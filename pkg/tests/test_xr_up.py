import pytest
from hypothesis import given, settings

from dpllxor.derivation import Kind, Policy
from dpllxor.formula_io import CnfXorFormula
from dpllxor.oracle import ModelSet, xor_unit_propagate
from dpllxor.xor_algebra import XorClause, evaluate
from dpllxor.xr_up import BOTTOM_LIT, AssignmentError, UpModule
from helpers import A, B, C, D, E, F, CHAIN_XORS, x, xor_systems


def chain_module(**kw):
    m = UpModule(CHAIN_XORS, 6, **kw)
    for lit in (-A, D, -B):
        m.assign(lit, 1)
    return m


def test_chain_deduce():
    m = chain_module()
    assert m.deduce() == [C, E, F]


def test_chain_explanations():
    m = chain_module()
    m.deduce()
    assert sorted(m.explain(F, Policy.CLOSEST, parity=False)) == sorted((-C, -E, F))
    assert sorted(m.explain(F, Policy.FURTHEST, parity=True)) == sorted((-D, F))
    assert sorted(m.explain(F, Policy.FURTHEST, parity=False)) == sorted((A, -D, B, F))
    assert m.parity_explanation(F, Policy.FURTHEST) == XorClause.unit(D)


def test_first_uip_cut_on_chain():
    # with assumptions in the order ¬a, d, ¬b the latest assumption is ¬b;
    # the first-UIP cut for f is then the one explained by c ∧ d
    m = chain_module()
    m.deduce()
    g = m.graph
    vf = m.vertex_of(F)
    labels = sorted(g.label(u).as_literal() for u in g.reason_set(g.cut(vf, Policy.FIRST_UIP)))
    assert labels == sorted([C, D])
    assert sorted(m.explain(F, Policy.FIRST_UIP, parity=False)) == sorted((-C, -D, F))
    assert sorted(m.explain(F, Policy.FIRST_UIP, parity=True)) == sorted((-D, F))
    assert m.parity_explanation(F, Policy.FIRST_UIP) == XorClause.unit(D)


def test_unsat_pair_without_and_with_assumption():
    pair = [x(A, B), x(A, B, top=True)]
    m = UpModule(pair, 2)
    assert m.deduce() == []
    m.assign(A, 1)
    assert m.deduce() == [-B, BOTTOM_LIT]
    assert m.explain(BOTTOM_LIT, Policy.FURTHEST, parity=False) == (-A,)
    closest = m.explain(BOTTOM_LIT, Policy.CLOSEST, parity=False)
    # the pair alone is contradictory, so the parity explanation drops a
    assert m.explain(BOTTOM_LIT, Policy.FURTHEST, parity=True) == ()
    ms = ModelSet(CnfXorFormula(2, [], pair))
    assert ms.entails((-A,)) and ms.entails(()) and ms.entails(closest)


def test_assign_contract():
    m = UpModule(CHAIN_XORS, 8)
    m.assign(-A, 1)
    assert m.graph[m.unit_vertex[A]].label == XorClause.unit(-A)
    assert m.graph[m.unit_vertex[A]].kind is Kind.INPUT_ASSUMPTION
    m.assign(D, 1)
    with pytest.raises(AssignmentError):
        m.assign(D, 1)
    m.assign(8, 1)  # not in the formula
    assert m.knows(8) is None
    with pytest.raises(KeyError):
        m.explain(D)


def test_backtrack_replays():
    m = UpModule(CHAIN_XORS, 6)
    m.assign(-A, 1)
    m.assign(-B, 1)
    first = m.deduce()
    m.assign(D, 2)
    assert m.deduce() == [E, F]
    m.backtrack(1)
    assert m.knows(D) is None and m.knows(E) is None
    assert all(m.graph[u].level <= 1 for u in m.graph.vertices)
    m.assign(D, 2)
    assert m.deduce() == [E, F]
    m.backtrack(0)
    assert all(m.knows(v) is None for v in range(1, 7))
    assert len(m.graph) == 3
    m.assign(-A, 1)
    m.assign(-B, 1)
    assert m.deduce() == first


def test_skip_mode_matches():
    m = chain_module(materialize=False)
    assert m.deduce() == [C, E, F]
    assert sorted(m.explain(F, Policy.FURTHEST, parity=True)) == sorted((-D, F))
    assert sorted(m.explain(F, Policy.CLOSEST, parity=False)) == sorted((-C, -E, F))


def test_learned_clause_strengthens_up():
    m = UpModule(CHAIN_XORS, 6)
    m.assign(D, 1)
    assert m.deduce() == []
    m.backtrack(0)
    m.add_clause(x(D, F, top=True))
    m.assign(D, 1)
    assert m.deduce() == [F]


def run(n, cs, lits, cls=UpModule, **kw):
    m = cls(cs, n, **kw)
    if BOTTOM_LIT in m.deduce():
        return m, True
    level = 0
    for lit in lits:
        level += 1
        m.assign(lit, level)
        out = m.deduce()
        if BOTTOM_LIT in out:
            return m, True
    return m, False


def implied_lits(m, lits):
    assumed = set(lits)
    return {v if m.value[v] else -v for v in range(1, m.num_vars + 1)
            if m.value[v] is not None and m.unit_vertex[v]} - assumed


@settings(max_examples=300, deadline=None)
@given(xor_systems(max_vars=8, max_clauses=6))
def test_matches_cnf_unit_propagation(system):
    n, cs, lits = system
    m, confl = run(n, cs, lits)
    ref, ref_confl = xor_unit_propagate(CnfXorFormula(n, [], cs), lits)
    assert confl == ref_confl
    if not confl:
        assert implied_lits(m, lits) == ref - set(lits)


@settings(max_examples=200, deadline=None)
@given(xor_systems(max_vars=8, max_clauses=6))
def test_complete_on_total_assignments(system):
    n, cs, _ = system
    used = sorted({v for c in cs for v in c.vars})
    pi = {v: (v * 7) % 3 == 0 for v in used}
    m, confl = run(n, cs, [v if pi[v] else -v for v in used])
    assert confl == (not all(evaluate(c, pi) for c in cs))


def check_explanations(m, ms, policies=tuple(Policy)):
    lits = [v if m.value[v] else -v for v in range(1, m.num_vars + 1)
            if m.value[v] is not None and not m.assumed[v] and m.unit_vertex[v]
            and m.graph[m.unit_vertex[v]].kind is Kind.DERIVED]
    if m.conflict_vertex is not None and m.graph[m.conflict_vertex].kind is Kind.DERIVED:
        lits.append(BOTTOM_LIT)
    checked = 0
    for lit in lits:
        label = m.graph.label(m.vertex_of(lit))
        for pol in policies:
            pexpl = m.parity_explanation(lit, pol)
            assert ms.entails_equiv(pexpl, label)
            cexpl = m.explain(lit, pol, parity=False)
            pclause = m.explain(lit, pol, parity=True)
            assert ms.entails(cexpl) and ms.entails(pclause)
            assert set(pexpl.vars) <= {abs(l) for l in cexpl}
            checked += 1
    return checked


@settings(max_examples=200, deadline=None)
@given(xor_systems(max_vars=8, max_clauses=6))
def test_explanations_sound(system):
    n, cs, lits = system
    m, _ = run(n, cs, lits)
    check_explanations(m, ModelSet(CnfXorFormula(n, [], cs)))
