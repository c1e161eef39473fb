"""Graphs and the exact combinatorial primitives everything else consumes.

Vertices are dense integers 0..n-1.  All solvers here are exact: clique
number via bitmask branch-and-bound with a greedy-colouring bound, maximum
matching via the blossom algorithm (networkx), maximum average degree via
exhaustive subset search for small graphs and Goldberg's max-flow densest
subgraph reduction above that.  mad() returns an exact Fraction so that
bound comparisons never suffer float error.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

import networkx as nx


class Graph:
    """Immutable undirected simple graph on vertices 0..n-1."""

    __slots__ = ("n", "adj", "edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        canonical = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            canonical.add((min(u, v), max(u, v)))
        self.n = n
        self.edges = frozenset(canonical)
        neighbours: list[set[int]] = [set() for _ in range(n)]
        for u, v in canonical:
            neighbours[u].add(v)
            neighbours[v].add(u)
        self.adj = tuple(frozenset(s) for s in neighbours)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbours(self, v: int) -> frozenset[int]:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def complement(self) -> "Graph":
        return Graph(self.n, [(u, v) for u in range(self.n)
                              for v in range(u + 1, self.n)
                              if v not in self.adj[u]])

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph relabelled to 0..|S|-1; returns (graph, old ids)."""
        old = sorted(set(vertices))
        index = {v: i for i, v in enumerate(old)}
        sub = Graph(len(old), [(index[u], index[v]) for u, v in self.edges
                               if u in index and v in index])
        return sub, old

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(sorted(self.edges))
        return g

    def __eq__(self, other) -> bool:
        return (isinstance(other, Graph)
                and self.n == other.n and self.edges == other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"


class Matching:
    """A set of pairwise-disjoint edges of a host graph."""

    __slots__ = ("pairs",)

    def __init__(self, pairs: Iterable[tuple[int, int]], host: Optional[Graph] = None):
        canonical = frozenset((min(u, v), max(u, v)) for u, v in pairs)
        seen: set[int] = set()
        for u, v in canonical:
            if u in seen or v in seen:
                raise ValueError(f"vertex reused in matching at edge ({u},{v})")
            seen.add(u)
            seen.add(v)
            if host is not None and not host.has_edge(u, v):
                raise ValueError(f"({u},{v}) is not an edge of the host graph")
        self.pairs = canonical

    def __len__(self) -> int:
        return len(self.pairs)

    def vertices(self) -> set[int]:
        return {x for e in self.pairs for x in e}

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __repr__(self) -> str:
        return f"Matching({sorted(self.pairs)})"


# ---------------------------------------------------------------------------
# Cliques
# ---------------------------------------------------------------------------

def _greedy_colour_order(p_mask: int, adj: Sequence[int]) -> tuple[list[int], list[int]]:
    """Greedy colouring of the candidate set; returns (order, colour bounds).

    Vertices are emitted colour class by colour class, so the colour number
    of the i-th vertex upper-bounds any clique inside the first i+1 of them.
    """
    order: list[int] = []
    bounds: list[int] = []
    colour = 0
    uncoloured = p_mask
    while uncoloured:
        colour += 1
        avail = uncoloured
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= ~((1 << v) | adj[v])
            uncoloured &= ~(1 << v)
            order.append(v)
            bounds.append(colour)
    return order, bounds


def max_clique(g: Graph, subset: Optional[Iterable[int]] = None) -> list[int]:
    """A maximum clique of g (restricted to `subset` if given), exact.

    Tomita-style branch and bound: candidates are greedily coloured and a
    branch is cut when |current| + colour bound cannot beat the incumbent.
    """
    verts = sorted(set(subset)) if subset is not None else list(range(g.n))
    if not verts:
        return []
    index = {v: i for i, v in enumerate(verts)}
    adj = [0] * len(verts)
    for i, v in enumerate(verts):
        for u in g.adj[v]:
            j = index.get(u)
            if j is not None:
                adj[i] |= 1 << j
    best: list[list[int]] = [[]]
    current: list[int] = []

    def expand(p_mask: int) -> None:
        order, bounds = _greedy_colour_order(p_mask, adj)
        for i in range(len(order) - 1, -1, -1):
            if len(current) + bounds[i] <= len(best[0]):
                return
            v = order[i]
            current.append(v)
            nxt = p_mask & adj[v]
            if nxt:
                expand(nxt)
            elif len(current) > len(best[0]):
                best[0] = current.copy()
            current.pop()
            p_mask &= ~(1 << v)

    expand((1 << len(verts)) - 1)
    return sorted(verts[i] for i in best[0])


def clique_number(g: Graph) -> int:
    return len(max_clique(g))


def clique_number_at(g: Graph, v: int) -> int:
    """Size of a largest clique of g containing v (isolated v gives 1)."""
    if not (0 <= v < g.n):
        raise ValueError(f"vertex {v} not in graph")
    return 1 + len(max_clique(g, g.adj[v]))


def gap(g: Graph, v: int) -> int:
    """d(v) + 1 - omega(v): slack between degree bound and local clique."""
    return g.degree(v) + 1 - clique_number_at(g, v)


# ---------------------------------------------------------------------------
# Matchings, triangles
# ---------------------------------------------------------------------------

def max_matching(g: Graph) -> Matching:
    """A maximum-cardinality matching, exact (blossom algorithm)."""
    mate = nx.max_weight_matching(g.to_networkx(), maxcardinality=True)
    return Matching(mate, host=g)


def triangle_count(g: Graph) -> int:
    total = 0
    for u, v in g.edges:
        total += len(g.adj[u] & g.adj[v])
    return total // 3


def rivin_check(g: Graph) -> bool:
    """|T(G)| <= (2|E|)^{3/2} / 6, compared exactly in integers."""
    t = triangle_count(g)
    m = g.num_edges()
    return (6 * t) ** 2 <= (2 * m) ** 3


# ---------------------------------------------------------------------------
# Maximum average degree
# ---------------------------------------------------------------------------

def average_degree(g: Graph) -> Fraction:
    if g.n == 0:
        return Fraction(0)
    return Fraction(2 * g.num_edges(), g.n)


def _mad_exhaustive(g: Graph) -> Fraction:
    n = g.n
    adj = [0] * n
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    # e[mask] built from e[mask minus lowest bit] plus edges into the rest
    edge_count = [0] * (1 << n)
    best_num, best_den = 0, 1
    for mask in range(1, 1 << n):
        low = mask & -mask
        v = low.bit_length() - 1
        rest = mask ^ low
        e = edge_count[rest] + (adj[v] & rest).bit_count()
        edge_count[mask] = e
        s = mask.bit_count()
        if 2 * e * best_den > best_num * s:
            best_num, best_den = 2 * e, s
    return Fraction(best_num, best_den)


def _densest_cut(g: Graph, target: Fraction) -> Optional[list[int]]:
    """Vertex set S with e(S)/|S| > target, or None if none exists.

    Goldberg's construction: on the network with s->v of capacity m,
    v->t of capacity m + 2*target - d(v) and unit capacities inside,
    the source side of a minimum cut maximises e(S) - target*|S|.
    Capacities are scaled by the denominator so the flow stays integral.
    """
    n, m = g.n, g.num_edges()
    a, b = target.numerator, target.denominator
    net = nx.DiGraph()
    source, sink = "s", "t"
    for v in range(n):
        net.add_edge(source, v, capacity=m * b)
        net.add_edge(v, sink, capacity=m * b + 2 * a - g.degree(v) * b)
    for u, v in g.edges:
        net.add_edge(u, v, capacity=b)
        net.add_edge(v, u, capacity=b)
    cut_value, (reachable, _) = nx.minimum_cut(net, source, sink)
    if cut_value >= m * n * b:
        return None
    side = sorted(v for v in reachable if v != source)
    return side or None


def mad(g: Graph, exhaustive_limit: int = 20) -> Fraction:
    """Exact maximum average degree max_H 2|E(H)|/|V(H)| over subgraphs.

    Exhaustive over induced subgraphs up to `exhaustive_limit` vertices,
    max-flow densest-subgraph search above.  Density only improves through
    induced subgraphs, so restricting to those is sound.
    """
    if g.n == 0 or g.num_edges() == 0:
        return Fraction(0)
    if g.n <= exhaustive_limit:
        return _mad_exhaustive(g)
    n = g.n
    best = Fraction(g.num_edges(), n)
    # distinct achievable densities e/s with s <= n differ by more than 1/n^2,
    # so probing just above the incumbent either improves it or proves optimality
    while True:
        probe = best + Fraction(1, 2 * n * n)
        side = _densest_cut(g, probe)
        if side is None:
            break
        sub, _ = g.induced(side)
        density = Fraction(sub.num_edges(), sub.n)
        if density <= best:
            break
        best = density
    return 2 * best


# ---------------------------------------------------------------------------
# DIMACS edge format
# ---------------------------------------------------------------------------

def parse_dimacs(text: str) -> Graph:
    """Parse DIMACS edge format: 'p edge n m' then 1-indexed 'e u v' lines."""
    n = None
    declared_m = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise ValueError(f"line {lineno}: malformed problem line {line!r}")
            n, declared_m = int(parts[2]), int(parts[3])
        elif parts[0] == "e":
            if n is None:
                raise ValueError(f"line {lineno}: edge before problem line")
            u, v = int(parts[1]), int(parts[2])
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"line {lineno}: endpoint out of range")
            edges.append((u - 1, v - 1))
        else:
            raise ValueError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise ValueError("missing problem line")
    g = Graph(n, edges)
    if declared_m is not None and declared_m != g.num_edges():
        raise ValueError(f"problem line declares {declared_m} edges, found {g.num_edges()}")
    return g


def to_dimacs(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.num_edges()}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"
