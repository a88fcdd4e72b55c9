"""Shared builders and hypothesis strategies for the test suite."""

from __future__ import annotations


from hypothesis import strategies as st

from dpllxor.benchgen import random_cnfxor
from dpllxor.derivation import DerivationGraph, Kind
from dpllxor.formula_io import CnfXorFormula
from dpllxor.xor_algebra import XorClause

# named variables used by the worked examples
A, B, C, D, E, F = 1, 2, 3, 4, 5, 6


def x(*vs: int, top: bool = False) -> XorClause:
    """``x(1, 2)`` is x1 ⊕ x2; ``top=True`` appends ⊕ ⊤."""
    return XorClause.of(vs, not top)


CHAIN_XORS = [x(A, B, C), x(C, D, E), x(C, E, F)]


def chain_graph() -> tuple:
    """The three-clause derivation of ``f`` from ¬a, d, ¬b, numbered v1..v12.

    Returns ``(graph, ids)`` where ``ids`` maps ``"v<n>"`` to vertex ids.
    """
    g = DerivationGraph()
    v = {}
    v["v1"] = g.add_input(x(A, B, C))
    v["v2"] = g.add_input(x(C, D, E))
    v["v3"] = g.add_input(x(C, E, F))
    v["v4"] = g.add_input(XorClause.unit(-A), Kind.INPUT_ASSUMPTION, 1)
    v["v5"] = g.add_input(XorClause.unit(-B), Kind.INPUT_ASSUMPTION, 1)
    v["v6"] = g.add_input(XorClause.unit(D), Kind.INPUT_ASSUMPTION, 1)
    v["v7"] = g.add_derived(v["v2"], v["v6"])  # c ⊕ e ⊕ ⊤
    v["v8"] = g.add_derived(v["v1"], v["v4"])  # b ⊕ c
    v["v9"] = g.add_derived(v["v8"], v["v5"])  # c
    v["v10"] = g.add_derived(v["v7"], v["v9"])  # e
    v["v11"] = g.add_derived(v["v3"], v["v9"])  # e ⊕ f ⊕ ⊤
    v["v12"] = g.add_derived(v["v11"], v["v10"])  # f
    return g, v


random_formula = random_cnfxor


@st.composite
def xor_clauses(draw, n_vars: int, max_width: int = 5):
    k = draw(st.integers(1, min(n_vars, max_width)))
    vs = draw(st.lists(st.integers(1, n_vars), min_size=k, max_size=k, unique=True))
    return XorClause.of(vs, draw(st.booleans()))


@st.composite
def xor_systems(draw, max_vars: int = 8, max_clauses: int = 6, max_width: int = 5):
    """``(num_vars, clauses, assumption literals)`` for module-level properties."""
    n = draw(st.integers(2, max_vars))
    cs = draw(st.lists(xor_clauses(n, max_width), min_size=1, max_size=max_clauses))
    used = sorted({v for c in cs for v in c.vars})
    picked = draw(st.lists(st.sampled_from(used), unique=True, max_size=len(used)))
    lits = [v if draw(st.booleans()) else -v for v in picked]
    return n, cs, lits


@st.composite
def cnfxor_formulas(draw, max_vars: int = 8, max_clauses: int = 10):
    n = draw(st.integers(1, max_vars))
    xs = draw(st.lists(xor_clauses(n), max_size=max_clauses))
    ors = draw(st.lists(
        st.lists(st.integers(1, n), min_size=1, max_size=min(n, 4), unique=True).flatmap(
            lambda vs: st.tuples(*[st.sampled_from([v, -v]) for v in vs])),
        max_size=max_clauses))
    return CnfXorFormula(n, ors, xs)
