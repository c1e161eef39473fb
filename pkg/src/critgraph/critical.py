"""Exact colouring solvers, criticality checks, and density-bound verifiers.

A graph is k-critical when its chromatic number is k but every proper
subgraph is (k-1)-colourable; the list analogue replaces the colour budget
with per-vertex lists.  This module supplies the exact machinery the rest of
the package leans on at desk scale: a branch-and-bound chromatic number
(clique lower bound, greedy upper bound, new-colour symmetry breaking), a
budgeted list-colouring solver whose search exhaustion is reported apart
from uncolourability, criticality predicates built from those solvers, and
the classical composition that glues two k-critical graphs into a larger one
along a deleted edge and a split vertex -- the construction that keeps the
average-degree ladder tight at every n = 1 (mod k-1).

The verifiers evaluate the density bounds exactly: the Kostochka-Yancey
baseline ad(G) >= k - 2/(k-1) - (k^2-3k)/(n(k-1)) as a rational margin, the
clique-sensitive strengthening ad(G) > (1+eps)(k-1) - eps*omega - 1, and the
chromatic-number corollary chi(G) <= ceil((1-eps)(mad(G)+1) + eps*omega(G)).
Average degree and maximum average degree come from the graph layer's exact
rational routines, so every margin below is a true rational, not a float
estimate.
"""

from __future__ import annotations

import itertools
import json
import math
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

import networkx as nx

from .graphs import Graph, average_degree, clique_number, mad, max_clique
from .lists import ListAssignment

Rational = Union[int, float, str, Fraction]


class BudgetExceededError(RuntimeError):
    """The exact solver hit its node budget before reaching a verdict."""


# ===========================================================================
# chromatic number
# ===========================================================================

def _edge_list(g: Graph) -> list[tuple[int, int]]:
    return [(u, v) for u in g.vertices for v in g.neighbours(u) if u < v]


def _colour_order(g: Graph) -> list[int]:
    """Maximum clique first (forcing distinct colours early), then by degree."""
    head = max_clique(g)
    seen = set(head)
    tail = sorted((v for v in g.vertices if v not in seen),
                  key=lambda v: (-g.degree(v), v))
    return head + tail


def k_colouring(g: Graph, t: int) -> Optional[dict[int, int]]:
    """A proper colouring with colours 0..t-1, or None if none exists.

    Backtracking over a clique-first order; a vertex may open at most one
    colour beyond the largest used so far, which quotients out colour
    permutations.
    """
    if g.n == 0:
        return {}
    if t <= 0:
        return None
    if t >= g.n:
        return {v: v for v in g.vertices}
    order = _colour_order(g)
    colour: dict[int, int] = {}

    def extend(i: int, max_used: int) -> bool:
        if i == g.n:
            return True
        v = order[i]
        used = {colour[u] for u in g.neighbours(v) if u in colour}
        for c in range(min(max_used + 1, t - 1) + 1):
            if c in used:
                continue
            colour[v] = c
            if extend(i + 1, max(max_used, c)):
                return True
            del colour[v]
        return False

    return dict(colour) if extend(0, -1) else None


def chromatic_number(g: Graph) -> int:
    """Exact chromatic number; intended for n up to a few dozen."""
    if g.n == 0:
        return 0
    lower = clique_number(g)
    greedy: dict[int, int] = {}
    for v in sorted(g.vertices, key=lambda v: (-g.degree(v), v)):
        used = {greedy[u] for u in g.neighbours(v) if u in greedy}
        greedy[v] = next(c for c in itertools.count() if c not in used)
    upper = 1 + max(greedy.values())
    for t in range(lower, upper):
        if k_colouring(g, t) is not None:
            return t
    return upper


# ===========================================================================
# list colouring
# ===========================================================================

class ColoringResult:
    """Solver verdict: "colored" (with the colouring), "uncolorable"
    (search space exhausted), or "budget_exhausted" (verdict unknown --
    never conflated with uncolourability)."""

    __slots__ = ("status", "coloring", "nodes")

    def __init__(self, status: str, coloring: Optional[dict[int, int]], nodes: int):
        self.status = status
        self.coloring = coloring
        self.nodes = nodes

    def __bool__(self) -> bool:
        return self.status == "colored"

    def __repr__(self) -> str:
        return f"ColoringResult({self.status!r}, nodes={self.nodes})"

    def to_json(self) -> str:
        return json.dumps({
            "status": self.status,
            "nodes": self.nodes,
            "coloring": (None if self.coloring is None else
                         {str(v): c for v, c in sorted(self.coloring.items())}),
        }, sort_keys=True)


class _Budget:
    __slots__ = ("nodes", "limit")

    def __init__(self, limit: Optional[int]):
        self.nodes = 0
        self.limit = limit

    def tick(self) -> None:
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise BudgetExceededError(f"node budget {self.limit} exhausted")


def list_color(g: Graph, L: ListAssignment,
               node_budget: Optional[int] = None) -> ColoringResult:
    """Proper colouring from per-vertex lists by minimum-remaining-values.

    Each search node assigns one colour; the vertex with the fewest
    currently-legal colours is branched first, so empty lists fail
    immediately.  Exhausting the search space proves uncolourability;
    exhausting the node budget proves nothing and is reported as such.
    """
    budget = _Budget(node_budget)
    colour: dict[int, int] = {}

    def options(v: int) -> list[int]:
        used = {colour[u] for u in g.neighbours(v) if u in colour}
        return [c for c in sorted(L[v]) if c not in used]

    def solve() -> bool:
        if len(colour) == g.n:
            return True
        v = min((u for u in g.vertices if u not in colour),
                key=lambda u: (len(options(u)), u))
        for c in options(v):
            budget.tick()
            colour[v] = c
            if solve():
                return True
            del colour[v]
        return False

    try:
        ok = solve()
    except BudgetExceededError:
        return ColoringResult("budget_exhausted", None, budget.nodes)
    if ok:
        return ColoringResult("colored", dict(colour), budget.nodes)
    return ColoringResult("uncolorable", None, budget.nodes)


# ===========================================================================
# criticality
# ===========================================================================

def _delete_edge(g: Graph, e: tuple[int, int]) -> Graph:
    u, v = min(e), max(e)
    return Graph(g.n, [f for f in _edge_list(g) if f != (u, v)])


def is_k_critical(g: Graph, k: int) -> bool:
    """chi(G) = k and every proper subgraph is (k-1)-colourable.

    One-edge and one-vertex deletions are checked; every proper subgraph
    lies inside one of those, and the vertex deletions only add strength
    when the graph has isolated vertices.
    """
    if g.n == 0 or chromatic_number(g) != k:
        return False
    for e in _edge_list(g):
        if k_colouring(_delete_edge(g, e), k - 1) is None:
            return False
    for v in g.vertices:
        h, _ = g.induced([u for u in g.vertices if u != v])
        if k_colouring(h, k - 1) is None:
            return False
    return True


def is_L_critical(g: Graph, L: ListAssignment,
                  node_budget: Optional[int] = None) -> bool:
    """Not L-colourable, but every single-vertex-deleted induced subgraph is."""
    whole = list_color(g, L, node_budget)
    if whole.status == "budget_exhausted":
        raise BudgetExceededError("budget exhausted on the full graph")
    if whole.status == "colored":
        return False
    for v in g.vertices:
        rest = [u for u in g.vertices if u != v]
        h, ids = g.induced(rest)
        Lh = ListAssignment(h, {i: sorted(L[w]) for i, w in enumerate(ids)})
        sub = list_color(h, Lh, node_budget)
        if sub.status == "budget_exhausted":
            raise BudgetExceededError(f"budget exhausted on G - {v}")
        if sub.status == "uncolorable":
            return False
    return True


class CriticalityCertificate:
    """Stored evidence that a graph is k-critical.

    The positive half is explicit: a (k-1)-colouring for every one-edge and
    one-vertex deletion (vertex deletions keyed by the deleted vertex, with
    colourings on the surviving original ids).  The negative half -- no
    (k-1)-colouring of the whole graph -- is re-derived by validate(), since
    non-existence has no succinct witness here.
    """

    __slots__ = ("graph", "k", "edge_colorings", "vertex_colorings")

    def __init__(self, graph: Graph, k: int,
                 edge_colorings: dict[tuple[int, int], dict[int, int]],
                 vertex_colorings: dict[int, dict[int, int]]):
        self.graph = graph
        self.k = k
        self.edge_colorings = edge_colorings
        self.vertex_colorings = vertex_colorings

    def validate(self) -> bool:
        g, k = self.graph, self.k
        edges = set(_edge_list(g))
        if set(self.edge_colorings) != edges:
            return False
        if set(self.vertex_colorings) != set(g.vertices):
            return False
        for e, col in self.edge_colorings.items():
            if set(col) != set(g.vertices):
                return False
            if any(c < 0 or c >= k - 1 for c in col.values()):
                return False
            if any(col[u] == col[v] for (u, v) in edges if (u, v) != e):
                return False
        for w, col in self.vertex_colorings.items():
            if set(col) != set(g.vertices) - {w}:
                return False
            if any(c < 0 or c >= k - 1 for c in col.values()):
                return False
            if any(col[u] == col[v] for (u, v) in edges if w not in (u, v)):
                return False
        return k_colouring(g, k - 1) is None and chromatic_number(g) == k

    def to_json(self) -> str:
        return json.dumps({
            "n": self.graph.n,
            "edges": sorted(_edge_list(self.graph)),
            "k": self.k,
            "edge_colorings": {f"{u},{v}": {str(w): c for w, c in sorted(col.items())}
                               for (u, v), col in sorted(self.edge_colorings.items())},
            "vertex_colorings": {str(w): {str(x): c for x, c in sorted(col.items())}
                                 for w, col in sorted(self.vertex_colorings.items())},
        }, sort_keys=True)


def certify_criticality(g: Graph, k: int) -> Optional[CriticalityCertificate]:
    """Build the deletion-colouring certificate, or None if not k-critical."""
    if g.n == 0 or chromatic_number(g) != k:
        return None
    edge_colorings: dict[tuple[int, int], dict[int, int]] = {}
    for e in _edge_list(g):
        col = k_colouring(_delete_edge(g, e), k - 1)
        if col is None:
            return None
        edge_colorings[e] = col
    vertex_colorings: dict[int, dict[int, int]] = {}
    for v in g.vertices:
        rest = [u for u in g.vertices if u != v]
        h, ids = g.induced(rest)
        col = k_colouring(h, k - 1)
        if col is None:
            return None
        vertex_colorings[v] = {ids[i]: c for i, c in col.items()}
    return CriticalityCertificate(g, k, edge_colorings, vertex_colorings)


# ===========================================================================
# composition of critical graphs
# ===========================================================================

def ore_compose(g1: Graph, g2: Graph, xy: tuple[int, int], z: int,
                split: Optional[Iterable[int]] = None,
                k: Optional[int] = None) -> Graph:
    """Glue g1 and g2: delete the edge xy, split z, identify across.

    The vertex z of g2 is split into two stubs, one inheriting a nonempty
    proper subset of its edges and the other the rest; the stubs are then
    identified with x and y.  The result always has n1+n2-1 vertices and
    m1+m2-1 edges, and when both inputs are k-critical some split yields a
    k-critical output.  With split given (the set of z-neighbours routed to
    x), that split is built verbatim and raises ValueError if either side
    is empty.  With split omitted, splits are enumerated until one passes
    the full criticality check (k defaulting to chi(g1)); ValueError if
    none does.
    """
    x, y = xy
    if not g1.has_edge(x, y):
        raise ValueError(f"({x},{y}) is not an edge of the first graph")
    if not 0 <= z < g2.n:
        raise ValueError(f"{z} is not a vertex of the second graph")
    z_nbrs = sorted(g2.neighbours(z))
    if len(z_nbrs) < 2:
        raise ValueError("the split vertex needs at least two neighbours")
    others = [w for w in g2.vertices if w != z]
    relabel = {w: g1.n + i for i, w in enumerate(others)}

    def build(side_x: frozenset[int]) -> Graph:
        edges = [e for e in _edge_list(g1) if e != (min(x, y), max(x, y))]
        for (u, v) in _edge_list(g2):
            if z in (u, v):
                w = v if u == z else u
                edges.append((x if w in side_x else y, relabel[w]))
            else:
                edges.append((relabel[u], relabel[v]))
        return Graph(g1.n + len(others), edges)

    if split is not None:
        side = frozenset(split)
        if not side or not side < set(z_nbrs):
            raise ValueError(
                "split must be a nonempty proper subset of the z-neighbours")
        return build(side)

    target = k if k is not None else chromatic_number(g1)
    for r in range(1, len(z_nbrs)):
        for combo in itertools.combinations(z_nbrs, r):
            candidate = build(frozenset(combo))
            if is_k_critical(candidate, target):
                return candidate
    raise ValueError(f"no split of vertex {z} yields a {target}-critical graph")


# ===========================================================================
# density-bound verifiers
# ===========================================================================

class BoundCheck:
    """An evaluated inequality plus its hypothesis flag.

    holds answers "does the inequality hold on this instance"; hypothesis_ok
    answers "is the instance inside the regime the theorem actually claims"
    (typically false at desk scale, and reported rather than fudged).
    """

    __slots__ = ("name", "holds", "hypothesis_ok", "lhs", "rhs")

    def __init__(self, name: str, holds: bool, hypothesis_ok: bool,
                 lhs: Fraction, rhs: Fraction):
        self.name = name
        self.holds = holds
        self.hypothesis_ok = hypothesis_ok
        self.lhs = lhs
        self.rhs = rhs

    def __bool__(self) -> bool:
        return self.holds

    def __repr__(self) -> str:
        return (f"BoundCheck({self.name!r}, holds={self.holds}, "
                f"hypothesis_ok={self.hypothesis_ok}, lhs={self.lhs}, rhs={self.rhs})")


def verify_ky_bound(g: Graph, k: int) -> Fraction:
    """ad(G) minus the critical-density baseline, as an exact rational.

    The baseline is k - 2/(k-1) - (k^2-3k)/(n(k-1)); the margin is >= 0 for
    every k-critical graph and exactly 0 on the tight composition ladder.
    Non-critical input is rejected rather than scored.
    """
    if k < 2:
        raise ValueError("the bound needs k >= 2")
    if not is_k_critical(g, k):
        raise ValueError(f"graph is not {k}-critical; margin undefined")
    baseline = k - Fraction(2, k - 1) - Fraction(k * k - 3 * k, g.n * (k - 1))
    return average_degree(g) - baseline


def verify_thm_1_2(g: Graph, k: int, omega_cap: int, eps: Rational) -> BoundCheck:
    """ad(G) > (1+eps)(k-1) - eps*omega_cap - 1 for k-critical K_{omega+1}-free G.

    hypothesis_ok reports omega_cap <= k - log^10(k), the regime the
    asymptotic statement lives in; it is false for every desk-scale k.
    """
    eps = Fraction(eps)
    if not is_k_critical(g, k):
        raise ValueError(f"graph is not {k}-critical")
    if clique_number(g) > omega_cap:
        raise ValueError("clique number exceeds omega_cap")
    lhs = average_degree(g)
    rhs = (1 + eps) * (k - 1) - eps * omega_cap - 1
    hypothesis = k >= 2 and omega_cap <= k - math.log(k) ** 10
    return BoundCheck("avg-degree-vs-clique", lhs > rhs, hypothesis, lhs, rhs)


def verify_thm_1_4(g: Graph, eps: Rational) -> BoundCheck:
    """chi(G) <= ceil((1-eps)(mad(G)+1) + eps*omega(G)), evaluated exactly.

    hypothesis_ok reports omega(G) <= mad(G) - log^10(mad(G)).
    """
    eps = Fraction(eps)
    chi = chromatic_number(g)
    density = mad(g)
    omega = clique_number(g)
    ceiling = math.ceil((1 - eps) * (density + 1) + eps * omega)
    hypothesis = density > 0 and omega <= float(density) - math.log(float(density)) ** 10
    return BoundCheck("chi-vs-mad", chi <= ceiling, hypothesis,
                      Fraction(chi), Fraction(ceiling))


# ===========================================================================
# enumeration of small critical graphs
# ===========================================================================

def _mask_colourable(rows: list[int], upto: int, t: int) -> bool:
    """Is the graph on vertices 0..upto (adjacency bitmasks) t-colourable?"""
    classes = [0] * t  # bitmask of vertices per colour

    def place(v: int) -> bool:
        if v > upto:
            return True
        opened = False
        for c in range(t):
            if classes[c] == 0:
                if opened:
                    break  # empty classes are interchangeable
                opened = True
            if classes[c] & rows[v]:
                continue
            classes[c] |= 1 << v
            if place(v + 1):
                return True
            classes[c] &= ~(1 << v)
        return False

    return place(0)


def _creates_clique(rows: list[int], v: int, k: int) -> bool:
    """Does vertex v (just added) close a K_k with earlier vertices?"""
    nbrs = [u for u in range(v) if rows[v] >> u & 1]
    for combo in itertools.combinations(nbrs, k - 1):
        if all(rows[a] >> b & 1 for a, b in itertools.combinations(combo, 2)):
            return True
    return False


def enumerate_k_critical(k: int, n_max: int,
                         node_budget: Optional[int] = None
                         ) -> Iterator[tuple[Graph, CriticalityCertificate]]:
    """All k-critical graphs on up to n_max vertices, one per isomorphism class.

    Vertices are added one row of the adjacency matrix at a time, keeping
    every prefix connected (sound up to isomorphism: critical graphs are
    connected, so some ordering survives) and pruning branches whose prefix
    is not (k-1)-colourable, whose prefix contains K_k (impossible inside a
    larger critical graph), or where some vertex can no longer reach degree
    k-1.  Survivors get the full criticality check and are deduplicated by
    isomorphism testing.  The search is exponential: n_max is capped at 9,
    and even that is patient work for k = 4; node_budget (search nodes)
    turns an over-ambitious call into BudgetExceededError instead.
    """
    if k not in (3, 4):
        raise ValueError("enumeration supports k in {3, 4}")
    if not 1 <= n_max <= 9:
        raise ValueError("n_max must be between 1 and 9")
    budget = _Budget(node_budget)

    def emit(n: int) -> Iterator[Graph]:
        rows = [0] * n

        def descend(v: int) -> Iterator[Graph]:
            if v == n:
                if any(bin(rows[u]).count("1") < k - 1 for u in range(n)):
                    return
                if _mask_colourable(rows, n - 1, k - 1):
                    return  # chi <= k-1: not k-chromatic
                yield Graph(n, [(a, b) for a in range(n) for b in range(a)
                                if rows[a] >> b & 1])
                return
            for mask in range(1, 1 << v):  # nonzero: prefixes stay connected
                budget.tick()
                rows[v] = mask
                for u in range(v):
                    rows[u] |= (mask >> u & 1) << v
                ok = (not (n > k and _creates_clique(rows, v, k))
                      and all(bin(rows[u]).count("1") + (n - 1 - v) >= k - 1
                              for u in range(v + 1))
                      and (v == n - 1 or _mask_colourable(rows, v, k - 1)))
                if ok:
                    yield from descend(v + 1)
                for u in range(v):
                    rows[u] &= ~(1 << v)
                rows[v] = 0

        if n == 1:
            return  # untestable degree floor: no k-critical singleton for k >= 3
        yield from descend(1)

    for n in range(1, n_max + 1):
        found: list[Graph] = []
        for g in emit(n):
            cert = certify_criticality(g, k)
            if cert is None:
                continue
            gx = g.to_networkx()
            if any(nx.is_isomorphic(gx, h.to_networkx()) for h in found):
                continue
            found.append(g)
            yield g, cert
