"""Local naive random colouring with per-colour equalizing coin-flips.

Every vertex draws a colour uniformly from its list, independently of all
other vertices.  A vertex keeps its draw only if (a) no neighbour's draw
corresponds to it under the edge matching and (b) an independent coin
succeeds.  The coin is calibrated per drawn colour: colour c of vertex v
survives its neighbours' draws with probability

    q_v(c) = prod_{u in N(v), c matched on uv} (1 - 1/|L(u)|),

exactly, because neighbour draws are independent and each matching pairs c
with at most one colour of L(u).  Keeping with probability K / q_v(c),
where K = .999 * exp(-1/(1 - eps)), makes P(v coloured | draw = c) = K for
every colour, hence P(v uncoloured) = 1 - K exactly and the drawn colour
stays uniform.  The construction needs q_v(c) >= K for every colour; the
sampler refuses instances that violate it.

Around a fixed vertex v, four random variables measure how much slack the
outcome buys: aberrance (coloured neighbours whose colour escapes the edge
matching), pairs and trips (non-adjacent pairs/triples of coloured
sigma-egalitarian neighbours whose colours correspond to one common colour
of L(v)), and subservience (uncoloured neighbours that precede v in a
fixed ordering).  savings = aberrance + subservience + pairs - trips.

Expectations come out in closed form.  Aberrance and subservience are
single-vertex marginals, so the per-colour calibration gives exactly

    E[aberrance] = K * sum_u |L(u) unmatched on uv| / |L(u)|,
    E[subservience] = (1 - K) * #{earlier neighbours}.

Pairs and trips involve the joint retention of two or three non-adjacent
vertices, which does not factor into single-vertex marginals: a shared
neighbour w must dodge the matched partner of every fixed colour at once,
one draw against a pooled forbidden set F_w, giving (1 - |F_w|/|L(w)|)
rather than the product of the individual factors.  The closed forms here
multiply the exact joint factor; the simpler fully-factored product is
only a bound (it errs exactly by the shared-neighbour correction, which
every pair picks up at least through the centre v itself).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Optional, Union

import numpy as np

from .classify import Ordering, partition_neighbors, find_half_egalitarian_bipartition
from .graphs import Graph, gap
from .lists import CorrespondenceAssignment, save
from .params import ParamSet, derive_constants, retention_probability

EpsLike = Union[Fraction, float, int, str]


# ===========================================================================
# retention rate and the conflict-survival table
# ===========================================================================

def retention_rate(eps_proc: EpsLike) -> float:
    """K = .999 * exp(-1/(1 - eps)): the exact per-vertex colouring rate."""
    eps = eps_proc if isinstance(eps_proc, Fraction) else Fraction(eps_proc)
    if not (0 < eps < 1):
        raise ValueError(f"equalizing epsilon {eps_proc} must lie in (0, 1)")
    return float(retention_probability(eps))


def conflict_survival(g: Graph, LM: CorrespondenceAssignment) -> dict[int, dict[int, float]]:
    """q_v(c) for every vertex and colour: the probability that no
    neighbour's uniform draw corresponds to colour c at v."""
    q: dict[int, dict[int, float]] = {}
    for v in range(g.n):
        row: dict[int, float] = {}
        for c in LM.base[v]:
            prob = 1.0
            for u in g.neighbours(v):
                if LM.partner(v, c, u) is not None:
                    prob *= 1.0 - 1.0 / LM.base.size(u)
            row[c] = prob
        q[v] = row
    return q


def _ranks(g: Graph, ordering: Ordering) -> dict[int, int]:
    rank = {u: i for i, u in enumerate(ordering)}
    for v in range(g.n):
        if v not in rank:
            raise ValueError(f"ordering does not cover vertex {v}")
    return rank


# ===========================================================================
# partial colourings
# ===========================================================================

class PartialColoring:
    """A total draw phi plus the set of vertices whose draw was revoked.

    phi assigns every vertex a colour from its list (uncoloured vertices
    keep their draw on record); restricted to the coloured vertices it is
    proper under the edge matchings.
    """

    __slots__ = ("phi", "uncolored")

    def __init__(self, phi: Mapping[int, int], uncolored: Iterable[int]):
        self.phi = dict(phi)
        self.uncolored = frozenset(uncolored)

    def is_colored(self, v: int) -> bool:
        return v not in self.uncolored

    def validate(self, g: Graph, LM: CorrespondenceAssignment) -> None:
        """Raise ValueError unless phi is total, in-list, and proper on the
        coloured vertices; the uncoloured set must be a vertex subset."""
        for v in range(g.n):
            if v not in self.phi:
                raise ValueError(f"phi is missing vertex {v}")
            if self.phi[v] not in LM.base[v]:
                raise ValueError(f"phi({v}) = {self.phi[v]} is not in the list of {v}")
        for v in self.uncolored:
            if not (0 <= v < g.n):
                raise ValueError(f"uncoloured vertex {v} not in graph")
        for u, v in g.edges:
            if u in self.uncolored or v in self.uncolored:
                continue
            if LM.partner(u, self.phi[u], v) == self.phi[v]:
                raise ValueError(
                    f"coloured edge ({u},{v}) carries corresponding colours "
                    f"{self.phi[u]} and {self.phi[v]}")

    def __repr__(self) -> str:
        return f"PartialColoring(coloured={len(self.phi) - len(self.uncolored)}, " \
               f"uncoloured={sorted(self.uncolored)})"


# ===========================================================================
# sampling
# ===========================================================================
#
# One trial consumes a fixed, block-aligned span of a counter-based stream:
# n colour draws, n coin draws, padded up to a whole number of 4-draw
# counter blocks (the stream's advance unit).  A batch starting at trial t
# therefore equals rows t.. of any larger batch: shards glue together
# independently of how the work was split.

def _prepare(g: Graph, LM: CorrespondenceAssignment, eps_proc: EpsLike):
    """Colour order, q-table as arrays, per-edge partner index maps, K."""
    K = retention_rate(eps_proc)
    colours = [sorted(LM.base[v]) for v in range(g.n)]
    for v in range(g.n):
        if not colours[v]:
            raise ValueError(f"vertex {v} has an empty list")
    q = conflict_survival(g, LM)
    q_arr = [np.array([q[v][c] for c in colours[v]]) for v in range(g.n)]
    for v in range(g.n):
        worst = int(np.argmin(q_arr[v]))
        if q_arr[v][worst] < K:
            raise ValueError(
                f"equalizing coin impossible at vertex {v}: colour "
                f"{colours[v][worst]} survives conflicts with probability "
                f"{q_arr[v][worst]:.6f} < K = {K:.6f}")
    index = [{c: i for i, c in enumerate(colours[v])} for v in range(g.n)]
    partner_idx = {}
    for u, v in g.edges:
        pu = np.full(len(colours[u]), -1, dtype=np.int64)
        for i, cu in enumerate(colours[u]):
            cv = LM.partner(u, cu, v)
            if cv is not None:
                pu[i] = index[v][cv]
        partner_idx[(u, v)] = pu
    return colours, q_arr, partner_idx, K


def sample_batch(g: Graph, LM: CorrespondenceAssignment, eps_proc: EpsLike,
                 rng_seed: int, trials: int,
                 trial_offset: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised trials: (colour index array, uncoloured mask), both (trials, n).

    Colour indices point into the sorted list of each vertex.  Trial t of
    seed s is the same array row no matter how trials are batched.
    """
    colours, q_arr, partner_idx, K = _prepare(g, LM, eps_proc)
    n = g.n
    blocks_per_trial = (2 * n + 3) // 4
    bitgen = np.random.Philox(key=rng_seed)
    if trial_offset:
        bitgen.advance(blocks_per_trial * trial_offset)
    draws = np.random.Generator(bitgen).random((trials, 4 * blocks_per_trial)) if n \
        else np.zeros((trials, 0))
    sizes = np.array([len(c) for c in colours], dtype=np.int64)
    idx = np.minimum((draws[:, :n] * sizes).astype(np.int64),
                     np.maximum(sizes - 1, 0))
    conflict = np.zeros((trials, n), dtype=bool)
    for u, v in g.edges:
        hit = partner_idx[(u, v)][idx[:, u]] == idx[:, v]
        conflict[:, u] |= hit
        conflict[:, v] |= hit
    uncolored = conflict.copy()
    for v in range(n):
        keep = draws[:, n + v] < K / q_arr[v][idx[:, v]]
        uncolored[:, v] |= ~keep
    return idx, uncolored


def sample_colorings(g: Graph, LM: CorrespondenceAssignment, eps_proc: EpsLike,
                     rng_seed: int, trials: int,
                     trial_offset: int = 0) -> Iterator[PartialColoring]:
    """The batch rows as PartialColoring objects, in trial order."""
    idx, uncol = sample_batch(g, LM, eps_proc, rng_seed, trials, trial_offset)
    colours = [sorted(LM.base[v]) for v in range(g.n)]
    for t in range(trials):
        phi = {v: colours[v][idx[t, v]] for v in range(g.n)}
        yield PartialColoring(phi, np.flatnonzero(uncol[t]).tolist())


def sample_coloring(g: Graph, LM: CorrespondenceAssignment, eps_proc: EpsLike,
                    rng_seed: int) -> PartialColoring:
    """One draw of the procedure: uniform colours, conflict revocation, and
    the per-colour equalizing coin; P(v uncoloured) = 1 - K exactly."""
    return next(sample_colorings(g, LM, eps_proc, rng_seed, 1))


def empirical_marginals(g: Graph, LM: CorrespondenceAssignment, eps_proc: EpsLike,
                        rng_seed: int, trials: int, chunk: int = 100_000,
                        trial_offset: int = 0,
                        ) -> tuple[dict[int, dict[int, int]], dict[int, int]]:
    """Colour counts and uncoloured counts per vertex over `trials` draws.

    Chunked so memory stays flat; the counter-based stream makes the result
    identical to one giant batch.  trial_offset shifts the counter, so a
    run split into spans [0,a) and [a,a+b) sums to the same counts as one
    run of a+b trials -- which is what lets callers fan spans out to
    worker threads without touching the statistics.
    """
    colours = [sorted(LM.base[v]) for v in range(g.n)]
    counts = {v: np.zeros(len(colours[v]), dtype=np.int64) for v in range(g.n)}
    uncol_counts = {v: 0 for v in range(g.n)}
    done = 0
    while done < trials:
        step = min(chunk, trials - done)
        idx, uncol = sample_batch(g, LM, eps_proc, rng_seed, step,
                                  trial_offset=trial_offset + done)
        for v in range(g.n):
            counts[v] += np.bincount(idx[:, v], minlength=len(colours[v]))
            uncol_counts[v] += int(uncol[:, v].sum())
        done += step
    colour_counts = {v: {c: int(counts[v][i]) for i, c in enumerate(colours[v])}
                     for v in range(g.n)}
    return colour_counts, uncol_counts


# ===========================================================================
# the savings random variables
# ===========================================================================

class SavingsRecord:
    """aberrance + subservience + pairs - trips, with the parts on record.

    Holds exact integer counts for a single sample and reals when it stores
    an expectation.
    """

    __slots__ = ("aberrance", "pairs", "trips", "subservience", "savings")

    def __init__(self, aberrance, pairs, trips, subservience):
        self.aberrance = aberrance
        self.pairs = pairs
        self.trips = trips
        self.subservience = subservience
        self.savings = aberrance + subservience + pairs - trips

    def astuple(self) -> tuple:
        return (self.aberrance, self.pairs, self.trips, self.subservience, self.savings)

    def __eq__(self, other) -> bool:
        return isinstance(other, SavingsRecord) and self.astuple() == other.astuple()

    def __repr__(self) -> str:
        return (f"SavingsRecord(aberrance={self.aberrance}, pairs={self.pairs}, "
                f"trips={self.trips}, subservience={self.subservience}, "
                f"savings={self.savings})")


def _sigma_pair_colours(LM: CorrespondenceAssignment, v: int, x: int) -> frozenset[int]:
    """Colours of v that correspond into L(x) on the edge xv."""
    return LM.matched_colours(v, x)


def compute_rvs(g: Graph, LM: CorrespondenceAssignment, p: ParamSet, v: int,
                ordering: Ordering, sample: PartialColoring) -> SavingsRecord:
    """Count the four savings random variables of v on one sample, exactly.

    Pairs and trips range over non-adjacent pairs/triples of coloured
    sigma-egalitarian neighbours whose colours all correspond to one common
    colour of L(v); each tuple is counted once per such colour (the edge
    matchings give at most one per tuple).
    """
    rank = _ranks(g, ordering)
    part = partition_neighbors(g, LM.base, p, v)
    nbrs = g.neighbours(v)

    aberrance = sum(1 for u in nbrs
                    if sample.is_colored(u)
                    and sample.phi[u] not in LM.matched_colours(u, v))
    subservience = sum(1 for u in nbrs
                       if not sample.is_colored(u) and rank[u] < rank[v])

    sig = sorted(u for u in part.egal_sigma if sample.is_colored(u))
    reached = {}
    for x in sig:
        reached[x] = LM.partner(x, sample.phi[x], v)  # colour of v hit by x, or None
    sig = [x for x in sig if reached[x] is not None]

    pairs = trips = 0
    for i, x in enumerate(sig):
        for j in range(i + 1, len(sig)):
            y = sig[j]
            if g.has_edge(x, y) or reached[x] != reached[y]:
                continue
            pairs += 1
            for m in range(j + 1, len(sig)):
                z = sig[m]
                if (reached[z] == reached[x]
                        and not g.has_edge(x, z) and not g.has_edge(y, z)):
                    trips += 1
    # each triple was found once per leading pair (x,y): divide the 3 orderings
    # out by counting it only from its smallest pair -- already the case above,
    # since (x, y) iterates in sorted order and z > y.
    return SavingsRecord(aberrance, pairs, trips, subservience)


# ===========================================================================
# exact expectations
# ===========================================================================

def _joint_coloured_probability(g: Graph, LM: CorrespondenceAssignment,
                                q: Callable[[int, int], float], K: float,
                                fixed: dict[int, int]) -> float:
    """P(every s in `fixed` draws its given colour and keeps it), exactly.

    Requires the fixed vertices to be pairwise non-adjacent.  Draw factors
    are 1/|L(s)|; coins contribute K/q(s, c_s); the remaining randomness is
    the draws of the fixed set's neighbours, where a vertex adjacent to
    several fixed vertices must dodge the pooled forbidden partners in a
    single draw: one factor (1 - |F_w|/|L(w)|) per such w.
    """
    prob = 1.0
    forbidden: dict[int, set[int]] = {}
    for s, cs in fixed.items():
        qs = q(s, cs)
        if qs == 0.0:
            # a matched neighbour with a singleton list forces the conflict:
            # the colour is never kept, so the joint event is null
            return 0.0
        prob *= (K / qs) / LM.base.size(s)
        for w in g.neighbours(s):
            if w in fixed:
                raise ValueError("joint retention needs pairwise non-adjacent vertices")
            cw = LM.partner(s, cs, w)
            if cw is not None:
                forbidden.setdefault(w, set()).add(cw)
    for w, cols in forbidden.items():
        prob *= 1.0 - len(cols) / LM.base.size(w)
    return prob


def exact_expectations(g: Graph, LM: CorrespondenceAssignment, p: ParamSet, v: int,
                       ordering: Ordering,
                       eps_proc: Optional[EpsLike] = None) -> SavingsRecord:
    """E[aberrance], E[pairs], E[trips], E[subservience] at v, in closed form.

    The coin parameter defaults to the ParamSet's equalizing epsilon.  The
    single-vertex marginals are K * (unmatched fraction) summed over
    neighbours and (1 - K) * (earlier neighbours); pairs and trips sum the
    exact joint retention of each non-adjacent sigma-egalitarian tuple over
    the common colours of L(v) it can reach through the matchings.
    """
    if eps_proc is None:
        eps_proc = p.equalizing_epsilon
    K = retention_rate(eps_proc)
    rank = _ranks(g, ordering)

    # survival probabilities on demand: the pair/trip sums touch only a few
    # (vertex, colour) cells, so building the full table would dominate
    q_memo: dict[tuple[int, int], float] = {}

    def q(s: int, cs: int) -> float:
        key = (s, cs)
        if key not in q_memo:
            val = 1.0
            for u in g.neighbours(s):
                if LM.partner(s, cs, u) is not None:
                    val *= 1.0 - 1.0 / LM.base.size(u)
            q_memo[key] = val
        return q_memo[key]

    e_aberrance = 0.0
    for u in g.neighbours(v):
        lu = LM.base.size(u)
        if lu:
            e_aberrance += K * (lu - len(LM.matched_colours(u, v))) / lu
    e_subservience = (1.0 - K) * sum(1 for u in g.neighbours(v) if rank[u] < rank[v])

    part = partition_neighbors(g, LM.base, p, v)
    sig = sorted(part.egal_sigma)
    into = {x: _sigma_pair_colours(LM, v, x) for x in sig}

    e_pairs = 0.0
    linked: list[tuple[int, int, frozenset[int]]] = []
    for i, x in enumerate(sig):
        for y in sig[i + 1:]:
            if g.has_edge(x, y):
                continue
            common = into[x] & into[y]
            if not common:
                continue
            linked.append((x, y, common))
            for c in sorted(common):
                e_pairs += _joint_coloured_probability(
                    g, LM, q, K, {x: LM.partner(v, c, x), y: LM.partner(v, c, y)})

    e_trips = 0.0
    for x, y, common in linked:
        for z in sig:
            if z <= y or g.has_edge(x, z) or g.has_edge(y, z):
                continue
            for c in sorted(common & into[z]):
                e_trips += _joint_coloured_probability(
                    g, LM, q, K, {x: LM.partner(v, c, x), y: LM.partner(v, c, y),
                                  z: LM.partner(v, c, z)})

    return SavingsRecord(e_aberrance, e_pairs, e_trips, e_subservience)


def estimate_savings(g: Graph, LM: CorrespondenceAssignment, p: ParamSet,
                     ordering: Ordering, trials: int, rng_seed: int,
                     eps_proc: Optional[EpsLike] = None) -> dict[int, SavingsRecord]:
    """Monte Carlo means of the savings record at every vertex."""
    if eps_proc is None:
        eps_proc = p.equalizing_epsilon
    sums = {v: [0, 0, 0, 0] for v in range(g.n)}
    for pc in sample_colorings(g, LM, eps_proc, rng_seed, trials):
        for v in range(g.n):
            rec = compute_rvs(g, LM, p, v, ordering, pc)
            sums[v][0] += rec.aberrance
            sums[v][1] += rec.pairs
            sums[v][2] += rec.trips
            sums[v][3] += rec.subservience
    return {v: SavingsRecord(*(s / trials for s in sums[v])) for v in sums}


# ===========================================================================
# analytic lower bounds on the expectations
# ===========================================================================

class SavingsBounds:
    """Per-mechanism lower bounds on expected savings at one vertex.

    aberrance, egal_sparse and bipartite_sparse are None when their
    hypotheses fail (list/degree sandwich, or no half-egalitarian
    bipartition); subservience is an exact equality, always present.
    """

    __slots__ = ("vertex", "aberrance", "egal_sparse", "bipartite_sparse",
                 "subservience", "hypotheses")

    def __init__(self, vertex, aberrance, egal_sparse, bipartite_sparse,
                 subservience, hypotheses):
        self.vertex = vertex
        self.aberrance = aberrance
        self.egal_sparse = egal_sparse
        self.bipartite_sparse = bipartite_sparse
        self.subservience = subservience
        self.hypotheses = dict(hypotheses)

    def __repr__(self) -> str:
        return (f"SavingsBounds(v={self.vertex}, aberrance={self.aberrance}, "
                f"egal_sparse={self.egal_sparse}, "
                f"bipartite_sparse={self.bipartite_sparse}, "
                f"subservience={self.subservience})")


def analytic_lower_bounds(g: Graph, LM: CorrespondenceAssignment, p: ParamSet,
                          v: int, ordering: Ordering) -> SavingsBounds:
    """The provable floors under each savings mechanism at v.

    aberrance: (c_A/(1-eps')) * max(|lordlier|, Gap/d * |slightly lordlier|),
    valid when |L(v)| <= d(v).  egal_sparse: (c_ES/(1-eps')) * (non-edges
    inside the egalitarian class) / d(v), valid under the full sandwich
    (1-eps')d <= |L| <= d.  bipartite_sparse: |A| * c_BS/(1-eps') for a
    half-egalitarian bipartition (A, B), when one exists.  subservience:
    (1-K) * #{earlier neighbours}, an equality.
    """
    L = LM.base
    d = g.degree(v)
    lv = L.size(v)
    cons = derive_constants(p)
    one_minus = float(1 - p.epsilon_prime)
    rank = _ranks(g, ordering)

    hyp_ab = lv <= d
    hyp_es = Fraction(lv) >= (1 - p.epsilon_prime) * d and lv <= d
    bip = find_half_egalitarian_bipartition(g, L, p, v)

    aberrance = None
    if hyp_ab:
        part = partition_neighbors(g, L, p, v)
        gap_share = gap(g, v) / d * len(part.slightly_lordlier) if d else 0.0
        aberrance = cons.c_A / one_minus * max(len(part.lordlier), gap_share)

    egal_sparse = None
    if hyp_es:
        if d == 0:
            egal_sparse = 0.0
        else:
            egal = sorted(partition_neighbors(g, L, p, v).egal)
            inside = sum(1 for i, a in enumerate(egal)
                         for b in egal[i + 1:] if g.has_edge(a, b))
            non_edges = len(egal) * (len(egal) - 1) // 2 - inside
            egal_sparse = cons.c_ES / one_minus * non_edges / d

    bipartite_sparse = None if bip is None else len(bip[0]) * cons.c_BS / one_minus
    subservience = (1.0 - p.K) * sum(1 for u in g.neighbours(v) if rank[u] < rank[v])

    return SavingsBounds(
        vertex=v, aberrance=aberrance, egal_sparse=egal_sparse,
        bipartite_sparse=bipartite_sparse, subservience=subservience,
        hypotheses={"aberrance": hyp_ab, "egal_sparse": hyp_es,
                    "bipartite_sparse": bip is not None})


# ===========================================================================
# premises of the main colourability theorem
# ===========================================================================

class PremiseRow:
    """Per-vertex verdicts: degree window, list sandwich, expected savings."""

    __slots__ = ("vertex", "degree_ok", "lists_ok", "savings_ok",
                 "expected_savings", "savings_threshold")

    def __init__(self, vertex, degree_ok, lists_ok, savings_ok,
                 expected_savings, savings_threshold):
        self.vertex = vertex
        self.degree_ok = degree_ok
        self.lists_ok = lists_ok
        self.savings_ok = savings_ok
        self.expected_savings = expected_savings
        self.savings_threshold = savings_threshold

    def __repr__(self) -> str:
        return (f"PremiseRow(v={self.vertex}, degree_ok={self.degree_ok}, "
                f"lists_ok={self.lists_ok}, savings_ok={self.savings_ok})")


class PremiseReport:
    """Vertices against the colourability theorem's four conditions.

    condition 1 in the source statement is an existential largeness bound on
    the global degree cap; the checkable surrogate recorded here is that the
    cap leaves the required degree window nonempty (Delta >= 100/(1-eps)^2).
    The others are per-vertex: degree inside [100/(1-eps)^2, Delta], list
    size inside [(1-eps) d(v), Delta], and expected savings at least
    max((1+xi1) Save, xi2 log^10 Delta).
    """

    __slots__ = ("delta", "degree_floor", "xi1", "xi2", "window_ok", "rows")

    def __init__(self, delta, degree_floor, xi1, xi2, window_ok, rows):
        self.delta = delta
        self.degree_floor = degree_floor
        self.xi1 = xi1
        self.xi2 = xi2
        self.window_ok = window_ok
        self.rows = tuple(rows)

    @property
    def all_pass(self) -> bool:
        return self.window_ok and all(
            r.degree_ok and r.lists_ok and r.savings_ok for r in self.rows)

    def failing(self) -> list[tuple[int, str]]:
        out = []
        if not self.window_ok:
            out.append((-1, "degree-window"))
        for r in self.rows:
            if not r.degree_ok:
                out.append((r.vertex, "degree"))
            if not r.lists_ok:
                out.append((r.vertex, "lists"))
            if not r.savings_ok:
                out.append((r.vertex, "savings"))
        return out

    def __repr__(self) -> str:
        status = "pass" if self.all_pass else f"fail({len(self.failing())})"
        return f"PremiseReport(delta={self.delta}, {status})"


def check_colorability_premises(g: Graph, LM: CorrespondenceAssignment, p: ParamSet,
                                ordering: Ordering, delta: Optional[int] = None,
                                eps_proc: Optional[EpsLike] = None) -> PremiseReport:
    """Evaluate the colourability theorem's premises vertex by vertex.

    Wired constants: Delta defaults to 2k, xi1 = eps'/(1-eps'), and
    xi2 = .99 * 11 eps'/(1-eps'); the savings threshold uses log^10 Delta.
    The coin parameter eps drives the degree floor 100/(1-eps)^2 and the
    list sandwich, and defaults to the ParamSet's equalizing epsilon.
    """
    if delta is None:
        delta = 2 * p.k
    if eps_proc is None:
        eps_proc = p.equalizing_epsilon
    eps = eps_proc if isinstance(eps_proc, Fraction) else Fraction(eps_proc)
    one_minus_p = float(1 - p.epsilon_prime)
    xi1 = float(p.epsilon_prime) / one_minus_p
    xi2 = 0.99 * float(11 * p.epsilon_prime) / one_minus_p
    degree_floor = 100.0 / float(1 - eps) ** 2
    log_delta = p.log_term(delta)

    rows = []
    for v in range(g.n):
        d = g.degree(v)
        lv = LM.base.size(v)
        degree_ok = d <= delta and d >= degree_floor
        lists_ok = lv <= delta and Fraction(lv) >= (1 - eps) * d
        expected = exact_expectations(g, LM, p, v, ordering, eps_proc).savings
        threshold = max((1.0 + xi1) * save(g, LM.base, v), xi2 * log_delta)
        rows.append(PremiseRow(v, degree_ok, lists_ok,
                               expected >= threshold, expected, threshold))
    return PremiseReport(delta=delta, degree_floor=degree_floor, xi1=xi1, xi2=xi2,
                         window_ok=delta >= degree_floor, rows=rows)
