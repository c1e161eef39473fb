"""Per-vertex classification machinery.

Everything here is a threshold test against the parameter ledger.  A vertex v
sees its neighbors partitioned by list size relative to |L(v)| (subservient /
egalitarian / lordlier, plus the overlapping slightly-lordlier and
sigma-egalitarian classes), carries a charge

    ch(v) = Save_L(v) - 2*eps*Gap(v) + eps*log^10(k) + 7*eps*(k - |L(v)|),

and is "saved" by one of five routes: aberrant, slightly aberrant,
egalitarian-sparse, bipartite-sparse (via a half-egalitarian bipartition),
or prioritized under a vertex ordering.  The heavy / extremely-heavy /
very-lordly / sponsored predicates drive the discharging layer on top.

Comparisons that only involve the rational parameters are done in exact
Fraction arithmetic; the savings thresholds divide by the derived constants
(c_A, c_ES, c_BS) and K, which are floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import json
from typing import Optional, Sequence

from .graphs import Graph, clique_number_at, gap, max_clique
from .lists import ListAssignment, save
from .params import DerivedConstants, ParamSet, derive_constants

Ordering = Sequence[int]  # a permutation of V(G); earlier position = higher priority


@lru_cache(maxsize=64)
def _constants(p: ParamSet) -> DerivedConstants:
    return derive_constants(p)


def _log_fraction(p: ParamSet) -> Fraction:
    """The log^10(k) term as an exact dyadic rational (of its float value).

    Pinning the term to one rational makes every charge identity below exact,
    which the discharging conservation checks rely on.
    """
    return Fraction(p.log_term())


# ---------------------------------------------------------------------------
# neighbor partition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NeighborPartition:
    """N(v) split by list size.  subserv/egal/lordlier partition N(v);
    slightly_lordlier and egal_sigma are independent overlapping classes."""

    center: int
    subserv: frozenset[int]
    egal: frozenset[int]
    lordlier: frozenset[int]
    slightly_lordlier: frozenset[int]
    egal_sigma: frozenset[int]


def partition_neighbors(g: Graph, L: ListAssignment, p: ParamSet, v: int) -> NeighborPartition:
    """Classify every neighbor of v by |L(u)| against exact rational thresholds.

    u is subservient if |L(u)| < (1-delta)|L(v)|, egalitarian if it lands in
    [(1-delta)|L(v)|, (1+alpha)|L(v)|), lordlier above that; slightly lordlier
    if |L(u)| >= |L(v)| + alpha*Gap(v); sigma-egalitarian if
    |L(u)| >= (1-sigma)|L(v)|.
    """
    lv = L.size(v)
    lower = (1 - p.delta) * lv
    upper = (1 + p.alpha) * lv
    slight = lv + p.alpha * gap(g, v)
    sigma_floor = (1 - p.sigma) * lv

    subserv, egal, lord, slightly, egal_sigma = set(), set(), set(), set(), set()
    for u in g.neighbours(v):
        lu = L.size(u)
        if lu < lower:
            subserv.add(u)
        elif lu < upper:
            egal.add(u)
        else:
            lord.add(u)
        if lu >= slight:
            slightly.add(u)
        if lu >= sigma_floor:
            egal_sigma.add(u)
    return NeighborPartition(v, frozenset(subserv), frozenset(egal), frozenset(lord),
                             frozenset(slightly), frozenset(egal_sigma))


# ---------------------------------------------------------------------------
# charge
# ---------------------------------------------------------------------------

def charge_exact(g: Graph, L: ListAssignment, p: ParamSet, v: int) -> Fraction:
    """ch(v) as an exact rational (log^10 k pinned to its float's value)."""
    lv = L.size(v)
    if lv > p.k:
        raise ValueError(f"|L({v})| = {lv} exceeds k = {p.k}")
    return (save(g, L, v)
            + p.epsilon * (-2 * gap(g, v) + _log_fraction(p) + 7 * (p.k - lv)))


def charge(g: Graph, L: ListAssignment, p: ParamSet, v: int) -> float:
    return float(charge_exact(g, L, p, v))


# ---------------------------------------------------------------------------
# the five ways to save
# ---------------------------------------------------------------------------

def _savings_threshold(p: ParamSet, save_v: int) -> float:
    """The numerator (Save + 11*eps'*log^10 k) shared by four predicates."""
    return float(save_v + 11 * p.epsilon_prime * _log_fraction(p))


def is_aberrant(g: Graph, L: ListAssignment, p: ParamSet, v: int) -> bool:
    part = partition_neighbors(g, L, p, v)
    return len(part.lordlier) >= _savings_threshold(p, save(g, L, v)) / _constants(p).c_A


def is_slightly_aberrant(g: Graph, L: ListAssignment, p: ParamSet, v: int) -> bool:
    gp = gap(g, v)
    if gp == 0:
        # the d(v)/Gap(v) factor diverges; the predicate is vacuously false
        return False
    part = partition_neighbors(g, L, p, v)
    threshold = (g.degree(v) / gp) * _savings_threshold(p, save(g, L, v)) / _constants(p).c_A
    return len(part.slightly_lordlier) >= threshold


def is_egalitarian_sparse(g: Graph, L: ListAssignment, p: ParamSet, v: int) -> bool:
    part = partition_neighbors(g, L, p, v)
    egal = sorted(part.egal)
    inside = sum(1 for i, a in enumerate(egal) for b in egal[i + 1:] if g.has_edge(a, b))
    non_edges = len(egal) * (len(egal) - 1) // 2 - inside
    threshold = g.degree(v) * _savings_threshold(p, save(g, L, v)) / _constants(p).c_ES
    return non_edges >= threshold


def is_bipartite_sparse(g: Graph, L: ListAssignment, p: ParamSet, v: int) -> bool:
    found = find_half_egalitarian_bipartition(g, L, p, v)
    if found is None:
        return False
    A, _ = found
    return len(A) >= _savings_threshold(p, save(g, L, v)) / _constants(p).c_BS


def is_prioritized(g: Graph, L: ListAssignment, p: ParamSet, v: int,
                   ordering: Optional[Ordering]) -> bool:
    """v has enough neighbors after it in the ordering: at least
    (Save + eps'*log^10 k) / ((1-K)(1-eps')) of them."""
    if ordering is None:
        raise ValueError("is_prioritized requires a vertex ordering")
    rank = {u: i for i, u in enumerate(ordering)}
    later = sum(1 for u in g.neighbours(v) if rank[v] < rank[u])
    return later >= priority_threshold(g, L, p, v)


def priority_threshold(g: Graph, L: ListAssignment, p: ParamSet, v: int) -> float:
    return float(save(g, L, v) + p.epsilon_prime * _log_fraction(p)) / (
        (1 - p.K) * float(1 - p.epsilon_prime))


# ---------------------------------------------------------------------------
# half-egalitarian bipartitions
# ---------------------------------------------------------------------------

def _required_non_neighbours(p: ParamSet, degree: int) -> Fraction:
    return ((p.delta - p.epsilon_prime) / (1 - p.epsilon_prime)
            - 15 * p.delta / 16) * degree


def is_half_egalitarian_bipartition(g: Graph, L: ListAssignment, p: ParamSet,
                                    v: int, A: frozenset[int], B: frozenset[int]) -> bool:
    """Validate the three defining clauses for (A, B) at v (empty A is legal
    but useless; the finder only ever returns nonempty A)."""
    if A & B:
        return False
    part = partition_neighbors(g, L, p, v)
    nv = g.neighbours(v)
    if not (A <= nv and B <= nv):
        return False
    if not B <= part.egal:
        return False
    if not A <= (part.egal_sigma & part.subserv):
        return False
    need = _required_non_neighbours(p, g.degree(v))
    return all(sum(1 for b in B if not g.has_edge(u, b)) >= need for u in A)


def find_half_egalitarian_bipartition(
        g: Graph, L: ListAssignment, p: ParamSet, v: int
) -> Optional[tuple[frozenset[int], frozenset[int]]]:
    """Constructive search mirroring the structural proof: B is a maximum
    clique among the non-lordlier neighbors (trimmed to the egalitarian
    class), A collects every subservient sigma-egalitarian neighbor with
    enough non-neighbors in B.  Returns the candidate with |A| largest, or
    None when no valid pair with nonempty A exists.
    """
    need = _required_non_neighbours(p, g.degree(v))
    if need <= 0:
        # degenerate parameters: the non-neighbor requirement is vacuous and
        # the bipartition carries no information (the gate's bipartite-sparse
        # positivity constraint rules this out for sane ParamSets)
        return None
    part = partition_neighbors(g, L, p, v)
    pool = part.egal_sigma & part.subserv
    if not pool:
        return None

    candidates = []
    trimmed = frozenset(max_clique(g, part.subserv | part.egal)) & part.egal
    candidates.append(trimmed)
    egal_clique = frozenset(max_clique(g, part.egal))
    if egal_clique != trimmed:
        candidates.append(egal_clique)

    best: Optional[tuple[frozenset[int], frozenset[int]]] = None
    for B in candidates:
        A = frozenset(u for u in pool
                      if sum(1 for b in B if not g.has_edge(u, b)) >= need)
        if A and (best is None or len(A) > len(best[0])):
            best = (A, B)
    if best is not None:
        assert is_half_egalitarian_bipartition(g, L, p, v, *best)
    return best


# ---------------------------------------------------------------------------
# heavy / very lordly / sponsored
# ---------------------------------------------------------------------------

def is_heavy(g: Graph, L: ListAssignment, p: ParamSet, v: int) -> bool:
    return charge_exact(g, L, p, v) >= (36 * p.epsilon / p.delta) * gap(g, v)


def is_extremely_heavy(g: Graph, L: ListAssignment, p: ParamSet, v: int) -> bool:
    return charge_exact(g, L, p, v) >= 9 * p.epsilon * g.degree(v)


def is_very_lordly(g: Graph, L: ListAssignment, p: ParamSet, v: int) -> bool:
    gp = gap(g, v)
    if gp < (3 * p.delta / 4) * g.degree(v):
        return False
    part = partition_neighbors(g, L, p, v)
    return len(part.subserv) > Fraction(gp, 4)


def _sponsor_coefficient(p: ParamSet) -> Optional[Fraction]:
    denom = p.delta / (36 + 2 * p.delta) - p.epsilon
    if denom <= 0:
        return None
    return p.epsilon * (Fraction(5, 2) - p.alpha) / denom


def is_sponsored(g: Graph, L: ListAssignment, p: ParamSet, v: int) -> bool:
    """At least d(v)/2 heavy neighbors u with Save_L(u) above a Gap(v)
    multiple and d(u) within a (1+alpha*delta/4)/(1-eps') factor of d(v)."""
    coeff = _sponsor_coefficient(p)
    if coeff is None:
        return False  # epsilon too large for the threshold to make sense
    save_floor = coeff * gap(g, v)
    degree_cap = (1 + p.alpha * p.delta / 4) / (1 - p.epsilon_prime) * g.degree(v)
    sponsors = [u for u in g.neighbours(v)
                if save(g, L, u) >= save_floor
                and g.degree(u) <= degree_cap
                and L.size(u) <= p.k          # heaviness is undefined past k
                and is_heavy(g, L, p, u)]
    return len(sponsors) >= Fraction(g.degree(v), 2)


# ---------------------------------------------------------------------------
# per-vertex report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VertexReport:
    vertex: int
    degree: int
    omega_v: int
    gap: int
    save: int
    charge: float
    aberrant: bool
    slightly_aberrant: bool
    egalitarian_sparse: bool
    bipartite_sparse: bool
    prioritized: Optional[bool]          # None when no ordering was supplied
    heavy: bool
    extremely_heavy: bool
    very_lordly: bool
    sponsored: bool
    witness: Optional[tuple[tuple[int, ...], tuple[int, ...]]]  # (A, B) if found

    @property
    def normal(self) -> bool:
        return not self.heavy

    def to_json(self) -> str:
        payload = {k: getattr(self, k) for k in (
            "vertex", "degree", "omega_v", "gap", "save", "charge",
            "aberrant", "slightly_aberrant", "egalitarian_sparse",
            "bipartite_sparse", "prioritized", "heavy", "extremely_heavy",
            "very_lordly", "sponsored")}
        payload["normal"] = self.normal
        payload["witness"] = (None if self.witness is None
                              else [sorted(self.witness[0]), sorted(self.witness[1])])
        return json.dumps(payload, sort_keys=True)


def classify_vertex(g: Graph, L: ListAssignment, p: ParamSet, v: int,
                    ordering: Optional[Ordering] = None) -> VertexReport:
    witness = find_half_egalitarian_bipartition(g, L, p, v)
    bip = (witness is not None
           and len(witness[0]) >= _savings_threshold(p, save(g, L, v)) / _constants(p).c_BS)
    return VertexReport(
        vertex=v,
        degree=g.degree(v),
        omega_v=clique_number_at(g, v),
        gap=gap(g, v),
        save=save(g, L, v),
        charge=charge(g, L, p, v),
        aberrant=is_aberrant(g, L, p, v),
        slightly_aberrant=is_slightly_aberrant(g, L, p, v),
        egalitarian_sparse=is_egalitarian_sparse(g, L, p, v),
        bipartite_sparse=bip,
        prioritized=None if ordering is None else is_prioritized(g, L, p, v, ordering),
        heavy=is_heavy(g, L, p, v),
        extremely_heavy=is_extremely_heavy(g, L, p, v),
        very_lordly=is_very_lordly(g, L, p, v),
        sponsored=is_sponsored(g, L, p, v),
        witness=None if witness is None else (tuple(sorted(witness[0])),
                                              tuple(sorted(witness[1]))),
    )


def classify_graph(g: Graph, L: ListAssignment, p: ParamSet,
                   ordering: Optional[Ordering] = None) -> list[VertexReport]:
    return [classify_vertex(g, L, p, v, ordering) for v in g.vertices]


# ---------------------------------------------------------------------------
# saved graphs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SavedResult:
    """Outcome of the saved-graph check.

    status is one of "saved", "sandwich_violation" (some vertex breaks
    |L(v)| <= k or (1-eps')d(v) <= |L(v)| <= d(v)), or "not_saturated"
    (the absorption fixed point stalls).  For "saved", layers[0] holds the
    statically-saved vertices and layers[i] the i-th absorption wave; the
    witness ordering puts later layers first (so every absorbed vertex has
    its counted neighbors after itself) and breaks ties by vertex id.
    """

    status: str
    layers: tuple[frozenset[int], ...] = ()
    ordering: tuple[int, ...] = ()
    offenders: frozenset[int] = frozenset()

    def __bool__(self) -> bool:
        return self.status == "saved"


def static_saved_classes(g: Graph, L: ListAssignment, p: ParamSet) -> frozenset[int]:
    """Vertices saved without reference to an ordering."""
    return frozenset(
        v for v in g.vertices
        if is_aberrant(g, L, p, v) or is_slightly_aberrant(g, L, p, v)
        or is_egalitarian_sparse(g, L, p, v) or is_bipartite_sparse(g, L, p, v))


def is_saved(g: Graph, L: ListAssignment, p: ParamSet,
             k: Optional[int] = None) -> SavedResult:
    """Decide savedness constructively.

    Seeds with the four static classes, then repeatedly absorbs any vertex
    whose already-absorbed neighbor count meets its priority threshold; the
    layer structure induces an ordering under which every absorbed vertex is
    prioritized.  k defaults to the ledger's k (it is the same bound the
    thresholds' log term uses).
    """
    if k is None:
        k = p.k
    bad = frozenset(
        v for v in g.vertices
        if L.size(v) > k or L.size(v) > g.degree(v)
        or L.size(v) < (1 - p.epsilon_prime) * g.degree(v))
    if bad:
        return SavedResult(status="sandwich_violation", offenders=bad)

    layers = [static_saved_classes(g, L, p)]
    absorbed = set(layers[0])
    while len(absorbed) < g.n:
        wave = frozenset(
            v for v in g.vertices if v not in absorbed
            and sum(1 for u in g.neighbours(v) if u in absorbed)
            >= priority_threshold(g, L, p, v))
        if not wave:
            return SavedResult(status="not_saturated", layers=tuple(layers),
                               offenders=frozenset(g.vertices) - absorbed)
        layers.append(wave)
        absorbed |= wave
    ordering = tuple(v for layer in reversed(layers) for v in sorted(layer))
    return SavedResult(status="saved", layers=tuple(layers), ordering=ordering)


# ---------------------------------------------------------------------------
# structural proposition checkers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PropositionCheck:
    """Result of sweeping one structural fact over an instance.

    applicable holds the items (vertices, or (v, u) pairs) that satisfied the
    premise; violations the subset where the stated conclusion failed.  An
    empty applicable set means the sweep was vacuous — callers that need
    non-vacuous coverage must arrange instances accordingly.
    """

    name: str
    applicable: tuple
    violations: tuple

    @property
    def vacuous(self) -> bool:
        return not self.applicable

    @property
    def ok(self) -> bool:
        return not self.violations


def check_list_size_bounds(g: Graph, L: ListAssignment, p: ParamSet) -> PropositionCheck:
    """Non-extremely-heavy vertices have Save < 11*eps*d and long lists.

    Premise per vertex: not extremely heavy and |L(v)| <= k.  Conclusions:
    Save_L(v) < 11*eps*d(v) and |L(v)| > (1-11*eps)*d(v); when additionally
    |L(v)| <= d(v) and eps <= 3/154, also |L(v)| > k/3.
    """
    applicable, violations = [], []
    for v in g.vertices:
        if L.size(v) > p.k or is_extremely_heavy(g, L, p, v):
            continue
        applicable.append(v)
        d, lv = g.degree(v), L.size(v)
        ok = (save(g, L, v) < 11 * p.epsilon * d) and (lv > (1 - 11 * p.epsilon) * d)
        if ok and lv <= d and p.epsilon <= Fraction(3, 154):
            ok = lv > Fraction(p.k, 3)
        if not ok:
            violations.append(v)
    return PropositionCheck("list-size-bounds", tuple(applicable), tuple(violations))


def check_heavy_vertex_facts(g: Graph, L: ListAssignment, p: ParamSet) -> PropositionCheck:
    """Heavy non-extremely-heavy vertices have small Gap and charge tracking Save.

    Premise per vertex: heavy, not extremely heavy, |L(v)| <= min(d(v), k).
    Conclusions: Gap(v) <= (delta/4)*d(v) and
    ch(v) > (Save + eps*log^10 k)/(1 + delta/18).
    """
    applicable, violations = [], []
    log_f = _log_fraction(p)
    for v in g.vertices:
        lv = L.size(v)
        if lv > p.k or lv > g.degree(v):
            continue
        if not is_heavy(g, L, p, v) or is_extremely_heavy(g, L, p, v):
            continue
        applicable.append(v)
        gap_ok = gap(g, v) <= (p.delta / 4) * g.degree(v)
        charge_ok = (charge_exact(g, L, p, v)
                     > (save(g, L, v) + p.epsilon * log_f) / (1 + p.delta / 18))
        if not (gap_ok and charge_ok):
            violations.append(v)
    return PropositionCheck("heavy-vertex-facts", tuple(applicable), tuple(violations))


def check_normal_gap_bound(g: Graph, L: ListAssignment, p: ParamSet) -> PropositionCheck:
    """Normal vertices have Gap at least (Save + eps*log^10 k)/(eps*(36/delta + 2)).

    Premise per vertex: normal (not heavy) and |L(v)| <= k.
    """
    applicable, violations = [], []
    log_f = _log_fraction(p)
    floor_div = p.epsilon * (36 / p.delta + 2)
    for v in g.vertices:
        if L.size(v) > p.k or is_heavy(g, L, p, v):
            continue
        applicable.append(v)
        if gap(g, v) < (save(g, L, v) + p.epsilon * log_f) / floor_div:
            violations.append(v)
    return PropositionCheck("normal-gap-bound", tuple(applicable), tuple(violations))


def check_very_lordly_promotion(g: Graph, L: ListAssignment, p: ParamSet) -> PropositionCheck:
    """A very lordly neighbor sitting in a big clique is lordlier.

    Premise per pair (v, u): u in N(v) very lordly with
    omega(u) >= (1 - delta/4)*d(v) + 1, list lower bounds
    |L(u)| >= (1 - eps')*d(u) and |L(v)| <= d(v), and alpha at or below its
    cap (checked exactly).  Conclusion: u is a lordlier neighbor of v.
    """
    cap = (p.delta * (2 + p.epsilon_prime) - 4 * p.epsilon_prime) / (4 - 3 * p.delta)
    if p.alpha > cap:
        return PropositionCheck("very-lordly-promotion", (), ())
    applicable, violations = [], []
    lordly = {u for u in g.vertices if is_very_lordly(g, L, p, u)}
    omega = {u: clique_number_at(g, u) for u in lordly}
    for v in g.vertices:
        if L.size(v) > g.degree(v):
            continue
        part = partition_neighbors(g, L, p, v)
        for u in g.neighbours(v) & lordly:
            if L.size(u) < (1 - p.epsilon_prime) * g.degree(u):
                continue
            if omega[u] < (1 - p.delta / 4) * g.degree(v) + 1:
                continue
            applicable.append((v, u))
            if u not in part.lordlier:
                violations.append((v, u))
    return PropositionCheck("very-lordly-promotion", tuple(applicable), tuple(violations))
