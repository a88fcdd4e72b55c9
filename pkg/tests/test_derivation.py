import random

import pytest
from hypothesis import given, settings, strategies as st

from dpllxor.derivation import DerivationGraph, Kind, NotCnfCompatible, Policy, ProvisoError
from dpllxor.formula_io import CnfXorFormula
from dpllxor.oracle import ModelSet
from dpllxor.xor_algebra import TOP, XorClause, is_tautology, xor_sum
from helpers import A, B, C, D, E, F, CHAIN_XORS, chain_graph, x


@pytest.fixture
def chain():
    return chain_graph()


def vb(ids, *names):
    return {ids[n] for n in names}


FAR_CUT = ("v7", "v8", "v9", "v10", "v11", "v12")
MID_CUT = ("v12", "v10", "v11", "v7")
MIXED_CUT = ("v12", "v10", "v11")
NEAR_CUT = ("v12", "v11")


def test_labels_follow_premises(chain):
    g, v = chain
    assert g.label(v["v8"]) == x(B, C)
    assert g.label(v["v7"]) == x(C, E, top=True)
    assert g.label(v["v9"]) == XorClause.unit(C)
    assert g.label(v["v12"]) == XorClause.unit(F)


def test_rule_examples():
    g = DerivationGraph()
    na = g.add_input(XorClause.unit(-A), Kind.INPUT_ASSUMPTION)
    abc = g.add_input(x(A, B, C))
    assert g.label(g.add_derived(na, abc)) == x(B, C)
    d = g.add_input(XorClause.unit(D), Kind.INPUT_ASSUMPTION)
    cde = g.add_input(x(C, D, E))
    assert g.label(g.add_derived(d, cde)) == x(C, E, top=True)
    xx = g.add_input(XorClause.unit(1), Kind.INPUT_ASSUMPTION)
    yz = g.add_input(x(2, 3))
    with pytest.raises(ProvisoError):
        g.add_derived(xx, yz)


def test_policy_cuts(chain):
    g, v = chain
    assert g.cut(v["v12"], Policy.FURTHEST) == vb(v, *FAR_CUT)
    assert g.cut(v["v12"], Policy.CLOSEST) == vb(v, *NEAR_CUT)
    labels = {g.label(u) for u in g.cut_frontier(v["v12"], Policy.CLOSEST)}
    assert labels == {XorClause.unit(E), XorClause.unit(C), x(C, E, F)}
    assert [g.label(u) for u in g.reason_set(g.cut(v["v12"], Policy.FURTHEST))] == [
        XorClause.unit(-A), XorClause.unit(-B), XorClause.unit(D)]


def test_implicative_explanations(chain):
    g, v = chain
    t = v["v12"]
    assert sorted(g.implicative_explanation(t, Policy.FURTHEST)) == sorted([-A, D, -B])
    assert sorted(g.implicative_explanation(t, vb(v, *MID_CUT))) == sorted([C, D])
    assert sorted(g.implicative_explanation(t, Policy.CLOSEST)) == sorted([E, C])
    with pytest.raises(NotCnfCompatible):
        g.implicative_explanation(t, vb(v, *MIXED_CUT))


def test_parity_explanations(chain):
    g, v = chain
    t = v["v12"]
    assert g.parity_explanation(t, Policy.CLOSEST) == x(C, E, top=True)
    assert g.parity_explanation(t, vb(v, *MID_CUT)) == XorClause.unit(D)
    assert g.parity_explanation(t, Policy.FURTHEST) == XorClause.unit(D)
    # the mixed cut is not cnf-compatible; v9 is reached twice there and cancels out
    assert g.parity_explanation(t, vb(v, *MIXED_CUT)) == x(C, E, top=True)


def test_even_successor_skip(chain):
    g, v = chain
    # only the assumption d is reached an odd number of times; v9's cone never contributes
    assert g.parity_inputs(v["v12"], Policy.FURTHEST) == [v["v3"], v["v2"]]


def test_implying_or_clauses(chain):
    g, v = chain
    t = v["v12"]
    assert sorted(g.implying_or_clause(t, vb(v, *MID_CUT))) == sorted((-D, F))
    assert sorted(g.implying_or_clause(t, vb(v, *MID_CUT), parity=False)) == sorted((-C, -D, F))
    assert sorted(g.implying_or_clause(t, Policy.CLOSEST)) == sorted((-C, -E, F))
    assert sorted(g.implying_or_clause(t, Policy.FURTHEST)) == sorted((-D, F))


def test_explanations_entailed(chain):
    g, v = chain
    ms = ModelSet(CnfXorFormula(6, [], CHAIN_XORS))
    for cut in (Policy.FURTHEST, Policy.CLOSEST, vb(v, *MID_CUT), vb(v, *MIXED_CUT)):
        assert ms.entails_equiv(g.parity_explanation(v["v12"], cut), g.label(v["v12"]))


def test_single_step_policies_coincide():
    g = DerivationGraph()
    a = g.add_input(XorClause.unit(1), Kind.INPUT_ASSUMPTION, 1)
    c = g.add_input(x(1, 2))
    t = g.add_derived(a, c)
    cuts = {g.cut(t, p) for p in Policy}
    assert cuts == {frozenset({t})}


def test_complementary_reasons_are_expanded():
    # ¬x4 and x4 both derived: the ⊥ vertex must not be explained by (x4 ∨ ¬x4)
    g = DerivationGraph()
    c1 = g.add_input(x(1, 3, 4, top=True))
    c2 = g.add_input(x(1, 3, 4, 5))
    a1 = g.add_input(XorClause.unit(-1), Kind.INPUT_ASSUMPTION, 1)
    a5 = g.add_input(XorClause.unit(-5), Kind.INPUT_ASSUMPTION, 1)
    a3 = g.add_input(XorClause.unit(-3), Kind.INPUT_ASSUMPTION, 2)
    n4 = g.add_derived(g.add_derived(c1, a1), a3)
    p4 = g.add_derived(g.add_derived(g.add_derived(c2, a1), a5), a3)
    bot = g.add_derived(p4, n4)
    assert g.label(bot).is_bottom
    ms = ModelSet(CnfXorFormula(5, [], [g.label(c1), g.label(c2)]))
    for pol in Policy:
        clause = g.implying_or_clause(bot, pol, parity=False)
        assert not is_tautology(clause) and ms.entails(clause)
    assert g.implying_or_clause(bot, Policy.FURTHEST) == (5,)


def test_truncate_and_dump(chain):
    g, v = chain
    text = g.dump()
    assert text.splitlines()[6] == "v7 derived L1 [v2,v6] x3 ⊕ x5 ⊕ ⊤"
    assert text.splitlines()[0] == "v1 clause L0 [] x1 ⊕ x2 ⊕ x3"
    g.truncate(0)
    assert len(g) == 3


def naive_pexpl(g, u, vbset, memo=None):
    memo = {} if memo is None else memo
    if u in memo:
        return memo[u]
    vert = g[u]
    if u in vbset:
        out = TOP
        for p in vert.premises:
            out = xor_sum(out, naive_pexpl(g, p, vbset, memo))
    elif vert.kind is Kind.INPUT_CLAUSE:
        out = TOP
    else:
        out = vert.label
    memo[u] = out
    return out


def random_graph(rng, n_vertices):
    g = DerivationGraph()
    n_vars = 6
    ids = []
    for _ in range(rng.randint(2, 5)):
        ids.append(g.add_input(XorClause.of(rng.sample(range(1, n_vars + 1), 3), rng.random() < .5)))
    for _ in range(rng.randint(1, 4)):
        ids.append(g.add_input(XorClause.unit(rng.choice([1, -1]) * rng.randint(1, n_vars)),
                               Kind.INPUT_ASSUMPTION, 1))
    while len(ids) < n_vertices:
        p, q = rng.sample(ids, 2)
        ids.append(g.add_derived(p, q, check=False))
    return g, ids


@settings(max_examples=200)
@given(st.integers(0, 10**9), st.integers(6, 50))
def test_traversal_matches_recursion(seed, n):
    rng = random.Random(seed)
    g, ids = random_graph(rng, n)
    target = ids[-1]
    derived = [u for u in g.cone(target) if g[u].kind is Kind.DERIVED and u != target]
    cut = {target} | {u for u in derived if rng.random() < 0.6}
    assert g.parity_explanation(target, cut) == naive_pexpl(g, target, cut)
