"""List and correspondence assignments over a graph.

A list assignment L gives every vertex a finite set of colour ids.  A
correspondence assignment additionally carries, for every edge uv, a
partial matching between L(u) and L(v) describing which colour pairs
clash.  The assignment is *total* when every edge's matching saturates at
least one endpoint's list; totality is verified, not assumed.
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping, Optional

from .graphs import Graph


class ListAssignment:
    """Map vertex -> frozenset of colour ids; missing vertices get empty lists."""

    __slots__ = ("lists",)

    def __init__(self, g: Graph, lists: Mapping[int, Iterable[int]]):
        table: dict[int, frozenset[int]] = {}
        for v, colours in lists.items():
            if not (0 <= v < g.n):
                raise ValueError(f"vertex {v} not in graph")
            table[v] = frozenset(int(c) for c in colours)
        for v in range(g.n):
            table.setdefault(v, frozenset())
        self.lists = table

    def __getitem__(self, v: int) -> frozenset[int]:
        return self.lists[v]

    def size(self, v: int) -> int:
        return len(self.lists[v])

    def restrict(self, g: Graph, keep: Mapping[int, Iterable[int]]) -> "ListAssignment":
        return ListAssignment(g, keep)

    def __repr__(self) -> str:
        return f"ListAssignment({ {v: sorted(c) for v, c in sorted(self.lists.items())} })"


def save(g: Graph, L: ListAssignment, v: int) -> int:
    """d(v) + 1 - |L(v)|: colours missing relative to the greedy bound.

    Negative values are legal and mean the list is over-provisioned.
    """
    return g.degree(v) + 1 - L.size(v)


class CorrespondenceAssignment:
    """Lists plus one partial matching of colour pairs per edge."""

    __slots__ = ("base", "matchings", "_partner")

    def __init__(self, g: Graph, base: ListAssignment,
                 matchings: Mapping[tuple[int, int], Iterable[tuple[int, int]]]):
        self.base = base
        table: dict[tuple[int, int], tuple[tuple[int, int], ...]] = {}
        partner: dict[tuple[int, int, int], int] = {}
        for (u, v), pairs in matchings.items():
            if not g.has_edge(u, v):
                raise ValueError(f"matching given for non-edge ({u},{v})")
            if u > v:
                u, v = v, u
                pairs = [(cv, cu) for cu, cv in pairs]
            pairs = sorted((int(cu), int(cv)) for cu, cv in pairs)
            used_u: set[int] = set()
            used_v: set[int] = set()
            for cu, cv in pairs:
                if cu not in base[u] or cv not in base[v]:
                    raise ValueError(
                        f"pair ({cu},{cv}) on edge ({u},{v}) uses colours outside the lists")
                if cu in used_u or cv in used_v:
                    raise ValueError(f"matching on edge ({u},{v}) is not one-to-one")
                used_u.add(cu)
                used_v.add(cv)
                partner[(u, cu, v)] = cv
                partner[(v, cv, u)] = cu
            table[(u, v)] = tuple(pairs)
        for u, v in g.edges:
            table.setdefault((u, v), ())
        self.matchings = table
        self._partner = partner

    def pairs(self, u: int, v: int) -> tuple[tuple[int, int], ...]:
        """Matched (colour-of-u, colour-of-v) pairs on edge uv."""
        if u <= v:
            return self.matchings[(u, v)]
        return tuple((cv, cu) for cu, cv in self.matchings[(v, u)])

    def partner(self, u: int, cu: int, v: int) -> Optional[int]:
        """Colour of v matched to (u, cu) on edge uv, or None."""
        return self._partner.get((u, cu, v))

    def matched_colours(self, u: int, v: int) -> frozenset[int]:
        """Colours of u that have a partner on edge uv (the set V(M_uv) at u)."""
        return frozenset(cu for cu, _ in self.pairs(u, v))

    def is_total(self, g: Graph) -> bool:
        """True when every edge's matching saturates at least one endpoint."""
        for u, v in g.edges:
            pairs = self.matchings[(u, v)]
            if len(pairs) < min(self.base.size(u), self.base.size(v)):
                return False
        return True


def identity_correspondence(g: Graph, L: ListAssignment) -> CorrespondenceAssignment:
    """Canonical total correspondence: match equal colour ids, then pad.

    Shared colours are matched to themselves; remaining colours are paired
    smallest-id-first until the smaller list is saturated, so any proper
    colouring under the result is exactly a proper list colouring.
    """
    matchings: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for u, v in sorted(g.edges):
        shared = sorted(L[u] & L[v])
        pairs = [(c, c) for c in shared]
        left = sorted(L[u] - L[v])
        right = sorted(L[v] - L[u])
        pairs.extend(zip(left, right))
        matchings[(u, v)] = pairs
    return CorrespondenceAssignment(g, L, matchings)


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def assignment_to_json(LM: CorrespondenceAssignment | ListAssignment) -> str:
    if isinstance(LM, CorrespondenceAssignment):
        payload = {
            "lists": {str(v): sorted(c) for v, c in sorted(LM.base.lists.items())},
            "matchings": {f"{u}-{v}": [list(p) for p in pairs]
                          for (u, v), pairs in sorted(LM.matchings.items())},
        }
    else:
        payload = {"lists": {str(v): sorted(c) for v, c in sorted(LM.lists.items())}}
    return json.dumps(payload, sort_keys=True)


def assignment_from_json(g: Graph, text: str) -> ListAssignment | CorrespondenceAssignment:
    payload = json.loads(text)
    if "lists" not in payload:
        raise ValueError("assignment JSON must contain a 'lists' object")
    lists = ListAssignment(g, {int(v): colours for v, colours in payload["lists"].items()})
    if "matchings" not in payload or payload["matchings"] is None:
        return lists
    matchings: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for key, pairs in payload["matchings"].items():
        u_str, _, v_str = key.partition("-")
        matchings[(int(u_str), int(v_str))] = [(int(a), int(b)) for a, b in pairs]
    return CorrespondenceAssignment(g, lists, matchings)
