"""Shared fixture builders for the test suite.

The bilayer instance at the bottom is the one nontrivial "saved" witness we
own: at usable parameter scales the savings thresholds sit near 1/c_A ~ 80,
so a graph where every vertex is saved needs degrees in the eighties.  The
construction is a biregular bipartite graph A x B plus a thin circulant on B:
A-vertices are aberrant (every B-neighbor is lordlier), and B-vertices become
prioritized once A is absorbed.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from critgraph.graphs import Graph
from critgraph.lists import ListAssignment
from critgraph.params import ParamSet, derive_constants, make_params


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def moser_spindle() -> Graph:
    """Two rhombi sharing vertex 0, tips 3 and 6 joined: 7 vertices, 11 edges."""
    return Graph(7, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3),
                     (0, 4), (0, 5), (4, 5), (4, 6), (5, 6), (3, 6)])


def uniform_lists(g: Graph, size: int) -> ListAssignment:
    return ListAssignment(g, {v: range(size) for v in g.vertices})


def random_lists(g: Graph, rng: random.Random, lo: int, hi: int) -> ListAssignment:
    return ListAssignment(g, {v: range(rng.randint(lo, hi)) for v in g.vertices})


# ---------------------------------------------------------------------------
# saved instances
# ---------------------------------------------------------------------------

def gated_saved_instance() -> tuple[Graph, ListAssignment, ParamSet]:
    """A saved instance whose parameters pass the full feasibility gate.

    The gate caps the workable constants hard: c_A tops out near 5e-3, so
    aberrance needs degrees in the hundreds, but c_ES reaches ~0.0113 as
    delta and alpha shrink (epsilon must then drop to ~1e-11 to satisfy the
    egal-sparse constraint).  Egalitarian sparseness asks for
    d*(Save + eps' log^10 k)/c_ES non-edges among the egalitarian
    neighbours; in K_{d,d} with full-degree lists every neighbourhood is
    independent, giving C(d,2) non-edges, so d = 184 > 2/c_ES + 1 makes
    every vertex statically saved -- the smallest gate-passing saved shape
    we know.
    """
    d = 184
    p = make_params(epsilon=Fraction(1, 10**11), delta=Fraction(1, 500),
                    sigma=Fraction(2, 3), alpha=Fraction(1, 1000),
                    k=d, log_base=float(d))
    g = Graph(2 * d, [(i, d + j) for i in range(d) for j in range(d)])
    L = ListAssignment(g, {v: range(d) for v in g.vertices})
    return g, L, p

def bilayer_saved_instance() -> tuple[Graph, ListAssignment, ParamSet, frozenset, frozenset]:
    """A graph/list/parameter triple where is_saved succeeds in two layers.

    Parameters: alpha = 0.035 keeps c_A ~ 0.0124 (so ~81 lordlier neighbors
    buy aberrance at Save = 1) while c_ES and c_BS stay positive; k and
    log_base are matched so the log^10 term is exactly 1.
    """
    base = make_params(epsilon=Fraction(1, 50_000), delta=Fraction(1, 200),
                       alpha=Fraction(7, 200), k=2, log_base=2.0)
    consts = derive_constants(base)
    # lordlier neighbors needed for a Save=1 vertex to be aberrant, plus slack
    need = math.floor(float(1 + 11 * base.epsilon_prime) / consts.c_A) + 2

    deg_a = need
    deg_b = deg_a + 4                      # 4 extra circulant edges inside B
    list_b = max(math.ceil((1 + base.alpha) * deg_a), deg_b)
    p = make_params(epsilon=base.epsilon, delta=base.delta, alpha=base.alpha,
                    k=list_b + 1, log_base=float(list_b + 1))

    m = deg_a + 8
    edges = []
    for i in range(m):
        for j in range(deg_a):
            edges.append((i, m + (i + j) % m))
    for i in range(m):
        for off in (1, 2):
            edges.append((m + i, m + (i + off) % m))
    g = Graph(2 * m, edges)
    L = ListAssignment(g, {**{v: range(deg_a) for v in range(m)},
                           **{v: range(list_b) for v in range(m, 2 * m)}})
    return g, L, p, frozenset(range(m)), frozenset(range(m, 2 * m))
