"""Detection of subgraphs that are dense with respect to a list assignment.

H (an induced subgraph of some neighborhood) is dense when there is a
matching M in the complement of H with

    |E(comp H)| < |M| * (|V(H)| - |M|) - sum_{u in H} Save_L(u).

The right side is nondecreasing in |M| for |M| <= |V(H)|/2 (the step is
|V(H)| - 2|M| + 1 > 0), and every matching size below the maximum is
realizable by truncation, so testing one maximum matching of the complement
decides the existential question over all matchings.

find_dense_subgraph has two modes.  The heuristic one mirrors the way dense
subgraphs actually arise in the structural argument: it tries the whole
neighborhood and its egalitarian/sigma-egalitarian cores.  The exhaustive
one sweeps every induced subgraph of N(v) with a bitmask dynamic program
(complement non-edge counts, Save sums, and maximum-matching sizes each in
O(2^d * d)) and exists to audit the heuristic on small neighborhoods.
"""

from __future__ import annotations

from dataclasses import dataclass
import json
from typing import Iterable, Optional

from .classify import partition_neighbors
from .graphs import Graph, Matching, max_matching
from .lists import ListAssignment, save
from .params import ParamSet

EXHAUSTIVE_LIMIT = 14


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DenseWitness:
    host_vertex: int
    subgraph: frozenset[int]
    matching: Matching
    lhs: int          # non-edges inside the subgraph
    rhs: int          # |M|(|V(H)| - |M|) - sum of Save

    def to_json(self) -> str:
        return json.dumps({
            "host_vertex": self.host_vertex,
            "subgraph": sorted(self.subgraph),
            "matching": [list(e) for e in self.matching],
            "lhs": self.lhs,
            "rhs": self.rhs,
        }, sort_keys=True)


def _complement_within(g: Graph, H: frozenset[int]) -> Graph:
    """Graph on g's vertex set whose edges are the non-edges inside H."""
    inside = sorted(H)
    return Graph(g.n, [(a, b) for i, a in enumerate(inside)
                       for b in inside[i + 1:] if not g.has_edge(a, b)])


def is_dense(g: Graph, L: ListAssignment, H: Iterable[int],
             M: Iterable[tuple[int, int]]) -> bool:
    """Evaluate the density inequality for an explicit subgraph and matching.

    Raises ValueError when M is not a matching in the complement of G[H].
    """
    hset = frozenset(H)
    pairs = Matching(M)  # validates disjointness
    for a, b in pairs:
        if a not in hset or b not in hset:
            raise ValueError(f"matching edge ({a},{b}) leaves the subgraph")
        if g.has_edge(a, b):
            raise ValueError(f"({a},{b}) is an edge of G, not of the complement")
    inside = sorted(hset)
    lhs = sum(1 for i, a in enumerate(inside) for b in inside[i + 1:]
              if not g.has_edge(a, b))
    rhs = len(pairs) * (len(hset) - len(pairs)) - sum(save(g, L, u) for u in hset)
    return lhs < rhs


def _witness_for(g: Graph, L: ListAssignment, v: int,
                 H: frozenset[int]) -> Optional[DenseWitness]:
    if len(H) < 2:
        return None
    comp = _complement_within(g, H)
    M = max_matching(comp)
    assert 2 * len(M) <= len(H)
    lhs = comp.num_edges()
    rhs = len(M) * (len(H) - len(M)) - sum(save(g, L, u) for u in H)
    if lhs < rhs:
        return DenseWitness(v, H, M, lhs, rhs)
    return None


# ---------------------------------------------------------------------------
# per-vertex search
# ---------------------------------------------------------------------------

def _heuristic_candidates(g: Graph, L: ListAssignment, v: int,
                          p: Optional[ParamSet]) -> list[tuple[str, frozenset[int]]]:
    candidates = [("N(v)", g.neighbours(v))]
    if p is not None:
        part = partition_neighbors(g, L, p, v)
        candidates.append(("egal", part.egal))
        candidates.append(("egal_sigma", part.egal_sigma))
    seen: set[frozenset[int]] = set()
    out = []
    for label, hs in candidates:
        if hs and hs not in seen:
            seen.add(hs)
            out.append((label, frozenset(hs)))
    return out


def _exhaustive_search(g: Graph, L: ListAssignment, v: int) -> Optional[DenseWitness]:
    nbrs = sorted(g.neighbours(v))
    h = len(nbrs)
    if h > EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive mode needs |N(v)| <= {EXHAUSTIVE_LIMIT}, got {h}")
    if h < 2:
        return None
    comp_mask = [0] * h
    for i in range(h):
        for j in range(h):
            if i != j and not g.has_edge(nbrs[i], nbrs[j]):
                comp_mask[i] |= 1 << j

    size = 1 << h
    non_edges = [0] * size
    save_sum = [0] * size
    match_dp = [0] * size
    saves = [save(g, L, u) for u in nbrs]
    for mask in range(1, size):
        i = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << i)
        non_edges[mask] = non_edges[rest] + (comp_mask[i] & rest).bit_count()
        save_sum[mask] = save_sum[rest] + saves[i]
        best = match_dp[rest]
        avail = comp_mask[i] & rest
        while avail:
            j_bit = avail & -avail
            cand = 1 + match_dp[rest ^ j_bit]
            if cand > best:
                best = cand
            avail ^= j_bit
        match_dp[mask] = best

    for mask in range(3, size):
        hh = mask.bit_count()
        if hh < 2:
            continue
        m = match_dp[mask]
        if non_edges[mask] < m * (hh - m) - save_sum[mask]:
            H = frozenset(nbrs[i] for i in range(h) if mask >> i & 1)
            pairs = []
            cur = mask
            while cur:
                i = (cur & -cur).bit_length() - 1
                rest = cur ^ (1 << i)
                if match_dp[cur] == match_dp[rest]:
                    cur = rest
                    continue
                avail = comp_mask[i] & rest
                while avail:
                    j_bit = avail & -avail
                    if 1 + match_dp[rest ^ j_bit] == match_dp[cur]:
                        pairs.append((nbrs[i], nbrs[j_bit.bit_length() - 1]))
                        cur = rest ^ j_bit
                        break
                    avail ^= j_bit
            M = Matching(pairs)
            assert len(M) == match_dp[mask]
            hh_m = match_dp[mask]
            return DenseWitness(v, H, M, non_edges[mask],
                                hh_m * (hh - hh_m) - save_sum[mask])
    return None


def find_dense_subgraph(g: Graph, L: ListAssignment, v: int,
                        p: Optional[ParamSet] = None,
                        mode: str = "heuristic") -> Optional[DenseWitness]:
    """Search for a dense induced subgraph of G[N(v)].

    mode="heuristic" tries N(v) and, when parameters are supplied, the
    egalitarian and sigma-egalitarian neighbor classes, each against one
    maximum matching of its complement.  mode="exhaustive" sweeps all
    induced subgraphs (|N(v)| <= 14) and returns the first witness.
    """
    if mode == "exhaustive":
        return _exhaustive_search(g, L, v)
    if mode != "heuristic":
        raise ValueError(f"unknown mode {mode!r}")
    for _, H in _heuristic_candidates(g, L, v, p):
        witness = _witness_for(g, L, v, H)
        if witness is not None:
            return witness
    return None


# ---------------------------------------------------------------------------
# whole-graph scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DenseScanReport:
    """Outcome of scanning every vertex for dense neighborhoods.

    no_dense is the headline verdict; log holds one record per scanned
    vertex with the candidate-set sizes and maximum-matching sizes that
    certify how the verdict was reached.
    """

    no_dense: bool
    witness: Optional[DenseWitness]
    log: tuple[dict, ...]

    def __bool__(self) -> bool:
        return self.no_dense


def has_no_dense_subgraph(g: Graph, L: ListAssignment,
                          p: Optional[ParamSet] = None,
                          mode: str = "heuristic") -> DenseScanReport:
    log: list[dict] = []
    for v in g.vertices:
        if mode == "heuristic":
            record: dict = {"vertex": v, "candidates": []}
            hit = None
            for label, H in _heuristic_candidates(g, L, v, p):
                comp = _complement_within(g, H)
                M = max_matching(comp)
                lhs = comp.num_edges()
                rhs = len(M) * (len(H) - len(M)) - sum(save(g, L, u) for u in H)
                record["candidates"].append(
                    {"set": label, "size": len(H), "matching": len(M),
                     "lhs": lhs, "rhs": rhs})
                if lhs < rhs:
                    hit = DenseWitness(v, H, M, lhs, rhs)
                    break
            log.append(record)
            if hit is not None:
                return DenseScanReport(False, hit, tuple(log))
        else:
            witness = find_dense_subgraph(g, L, v, p, mode=mode)
            log.append({"vertex": v, "candidates": "exhaustive"})
            if witness is not None:
                return DenseScanReport(False, witness, tuple(log))
    return DenseScanReport(True, None, tuple(log))
