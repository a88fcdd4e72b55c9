"""Parity-graph instances and spanning-tree refutations of them.

A parity graph has a boolean charge per node and a distinct variable per
edge.  Node ``v`` contributes the xor-clause "the incident edge variables
sum to the charge of ``v``"; the system is unsatisfiable exactly when the
charges sum to true.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .derivation import DerivationGraph, Kind, Policy
from .formula_io import CnfXorFormula
from .xor_algebra import TOP, XorClause, clausify_xor


class GraphError(ValueError):
    pass


@dataclass
class ParityGraph:
    charges: list  # node -> bool
    edges: list  # (u, w); edge i carries variable i + 1

    def __post_init__(self) -> None:
        n = len(self.charges)
        seen = set()
        for u, w in self.edges:
            if u == w or not (0 <= u < n and 0 <= w < n):
                raise GraphError(f"bad edge ({u}, {w})")
            key = (min(u, w), max(u, w))
            if key in seen:
                raise GraphError(f"parallel edge {key}")
            seen.add(key)
        if n and not self._connected():
            raise GraphError("parity graph must be connected")

    @property
    def n_nodes(self) -> int:
        return len(self.charges)

    @property
    def total_charge(self) -> bool:
        t = False
        for c in self.charges:
            t ^= c
        return t

    def incident(self) -> list:
        inc = [[] for _ in self.charges]
        for i, (u, w) in enumerate(self.edges):
            inc[u].append(i + 1)
            inc[w].append(i + 1)
        return inc

    def degree(self) -> int:
        return max((len(x) for x in self.incident()), default=0)

    def _connected(self) -> bool:
        adj = [[] for _ in self.charges]
        for u, w in self.edges:
            adj[u].append(w)
            adj[w].append(u)
        seen = {0}
        stack = [0]
        while stack:
            for y in adj[stack.pop()]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.charges)

    def node_clause(self, v: int) -> XorClause:
        return XorClause.of(self.incident()[v], self.charges[v])


def xorclauses(g: ParityGraph) -> CnfXorFormula:
    inc = g.incident()
    xs = [XorClause.of(inc[v], g.charges[v]) for v in range(g.n_nodes)]
    return CnfXorFormula(len(g.edges), [], [c for c in xs if not c.is_top])


def clauses(g: ParityGraph) -> CnfXorFormula:
    """The same constraints as plain or-clauses (``2^(d-1)`` per degree-``d`` node)."""
    out = []
    for c in xorclauses(g).xor_clauses:
        out.extend(clausify_xor(c))
    return CnfXorFormula(len(g.edges), out, [])


def _fix_charge(charges: list, total: bool) -> list:
    t = False
    for c in charges:
        t ^= c
    if t != total:
        charges[0] = not charges[0]
    return charges


def random_parity_graph(n_nodes: int, degree_bound: int, total_charge: bool, seed: int = 0,
                        extra_edges: int | None = None) -> ParityGraph:
    """A random connected graph with every degree at most ``degree_bound``.

    A random tree comes first; then up to ``extra_edges`` further edges
    (default: about ``n_nodes`` attempts) are added where degrees allow.
    """
    if n_nodes < 1:
        raise GraphError("need at least one node")
    if n_nodes > 2 and degree_bound < 2 or n_nodes == 2 and degree_bound < 1:
        raise GraphError(f"no connected graph on {n_nodes} nodes with degree <= {degree_bound}")
    rng = random.Random(seed)
    deg = [0] * n_nodes
    edges = []
    adj = [set() for _ in range(n_nodes)]

    def link(u: int, w: int) -> None:
        edges.append((u, w))
        adj[u].add(w)
        adj[w].add(u)
        deg[u] += 1
        deg[w] += 1

    for v in range(1, n_nodes):
        link(rng.choice([u for u in range(v) if deg[u] < degree_bound]), v)
    tries = n_nodes if extra_edges is None else extra_edges
    for _ in range(tries):
        u, w = rng.randrange(n_nodes), rng.randrange(n_nodes)
        if u != w and w not in adj[u] and deg[u] < degree_bound and deg[w] < degree_bound:
            link(min(u, w), max(u, w))
    charges = _fix_charge([rng.random() < 0.5 for _ in range(n_nodes)], total_charge)
    return ParityGraph(charges, edges)


def grid_graph(m: int, total_charge: bool, seed: int = 0) -> ParityGraph:
    """``m × m`` torus (plain grid when ``m < 3``); node ``(r, c)`` is ``r * m + c``."""
    if m < 1:
        raise GraphError("grid side must be positive")
    rng = random.Random(seed)
    edges = set()
    for r in range(m):
        for c in range(m):
            v = r * m + c
            for dr, dc in ((0, 1), (1, 0)):
                rr, cc = r + dr, c + dc
                if m >= 3:
                    rr, cc = rr % m, cc % m
                elif rr >= m or cc >= m:
                    continue
                w = rr * m + cc
                edges.add((min(v, w), max(v, w)))
    charges = _fix_charge([rng.random() < 0.5 for _ in range(m * m)], total_charge)
    return ParityGraph(charges, sorted(edges))


def random_cnfxor(rng: random.Random, max_vars: int = 12, max_clauses: int = 30,
                  xor_share: float = 0.5, max_width: int = 5) -> CnfXorFormula:
    """Mixed or/xor formula with up to ``max_vars`` variables and ``max_clauses`` clauses."""
    n = rng.randint(1, max_vars)
    ors, xs = [], []
    for _ in range(rng.randint(0, max_clauses)):
        vs = rng.sample(range(1, n + 1), rng.randint(1, min(n, max_width)))
        if rng.random() < xor_share:
            xs.append(XorClause.of(vs, rng.random() < 0.5))
        else:
            ors.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CnfXorFormula(n, ors, xs)


def triangle(total_charge: bool = True) -> ParityGraph:
    """Nodes 0, 1, 2 with edges x1 = {0,1}, x2 = {1,2}, x3 = {0,2}; node 0 carries the charge."""
    return ParityGraph([total_charge, False, False], [(0, 1), (1, 2), (0, 2)])


def parity_graph_from_formula(f: CnfXorFormula) -> ParityGraph:
    """Read back an instance whose xor-clauses are the nodes and every variable joins two of them."""
    if f.or_clauses:
        raise GraphError("parity-graph instances have no or-clauses")
    where: dict = {}
    for i, c in enumerate(f.xor_clauses):
        for x in c.vars:
            where.setdefault(x, []).append(i)
    edges = []
    for x in range(1, f.num_vars + 1):
        ends = where.get(x, [])
        if len(ends) != 2:
            raise GraphError(f"variable {x} occurs in {len(ends)} clauses, expected 2")
        edges.append(tuple(ends))
    return ParityGraph([c.rhs for c in f.xor_clauses], edges)


@dataclass
class Refutation:
    assumptions: list
    graph: DerivationGraph
    bottom: int
    pexpl: XorClause
    tree: list = field(default_factory=list)  # edge indices of the spanning tree


def _bfs_tree(g: ParityGraph) -> list:
    adj = [[] for _ in range(g.n_nodes)]
    for i, (u, w) in enumerate(g.edges):
        adj[u].append((w, i))
        adj[w].append((u, i))
    seen = {0}
    tree = []
    dq = deque([0])
    while dq:
        u = dq.popleft()
        for w, i in sorted(adj[u]):
            if w not in seen:
                seen.add(w)
                tree.append(i)
                dq.append(w)
    return sorted(tree)


def spanning_tree_refutation(g: ParityGraph) -> Refutation:
    """Derive ⊥ from the node clauses plus the non-tree edge variables set true.

    Each assumed variable is substituted into both of its endpoint clauses.
    Leaves of the spanning tree are then eliminated in ascending node order,
    each pushing its now unary clause into its neighbour.  The parity
    explanation of the final vertex on the furthest cut is checked to be ⊤.
    """
    if not g.total_charge:
        raise GraphError("total charge is false: the node clauses are satisfiable")
    dg = DerivationGraph()
    cur = [dg.add_input(g.node_clause(v), Kind.INPUT_CLAUSE, 0) for v in range(g.n_nodes)]
    tree = _bfs_tree(g)
    in_tree = set(tree)
    assumptions = []
    for i, (u, w) in enumerate(g.edges):
        if i in in_tree:
            continue
        q = i + 1
        assumptions.append(q)
        a = dg.add_input(XorClause.unit(q), Kind.INPUT_ASSUMPTION, 0)
        cur[u] = dg.add_derived(cur[u], a)
        cur[w] = dg.add_derived(cur[w], a)
    nbrs = [set() for _ in range(g.n_nodes)]
    for i in tree:
        u, w = g.edges[i]
        nbrs[u].add(w)
        nbrs[w].add(u)
    alive = set(range(g.n_nodes))
    while len(alive) > 1:
        u = min(v for v in alive if len(nbrs[v]) == 1)
        (p,) = nbrs[u]
        cur[p] = dg.add_derived(cur[p], cur[u])
        nbrs[p].discard(u)
        nbrs[u].clear()
        alive.discard(u)
    (last,) = alive
    bottom = cur[last]
    if not dg.label(bottom).is_bottom:
        raise RuntimeError(f"construction ended in {dg.label(bottom)}, not ⊥")
    if dg[bottom].kind is Kind.DERIVED:
        pexpl = dg.parity_explanation(bottom, Policy.FURTHEST)
    else:
        pexpl = TOP
    if not pexpl.is_top:
        raise RuntimeError(f"parity explanation is {pexpl}, expected ⊤")
    return Refutation(assumptions, dg, bottom, pexpl, tree)
