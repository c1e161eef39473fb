"""Charge redistribution on the layered decomposition, and the reduction loop.

Every vertex starts with charge

    ch(v) = Save_L(v) - 2*eps*Gap(v) + eps*log^10(k) + 7*eps*(k - |L(v)|),

so the main inequality -- the savings side strictly exceeding the gap side,
summed over the graph -- is exactly the statement sum(ch) > 0.  When it
fails, the layered decomposition splits V(G) into absorption layers
S_0, S_1, ... (S_0 the four static savings classes, each later layer having
enough already-absorbed neighbours), the very-lordly residue, and the
discharged set D of everything else.  Rules R1-R4 then move charge out of D:
a heavy vertex pays 9*eps to each neighbour outside D and splits half its
original charge among its neighbours inside D; a normal vertex pays 9*eps to
each absorbed or very-lordly neighbour.  Two facts make this useful: total
charge is conserved exactly, and -- under the standing hypotheses (parameter
gate, |L(v)| <= min(d(v), k), no extremely heavy vertex, no dense
subgraph) -- every vertex of D ends with positive charge.  Since the grand
total was non-positive, the complement of D then inherits a strictly
stronger residual inequality, with Gap measured in G - D and a 9*eps credit
per deleted neighbour.

The reduction pipeline turns that shrinkage into a colouring loop: peel a
single extremely heavy vertex when one exists while the main inequality
fails, otherwise peel the discharged set; colour the peeled part with the
exact solver, delete the used colours from the neighbouring lists, trim the
lists so each survivor keeps Save unchanged, and recurse.  Saved instances
terminate the loop with an ordering witness instead.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Optional, Union

from .classify import (_log_fraction, charge, charge_exact, is_extremely_heavy,
                       is_heavy, is_saved, is_very_lordly, static_saved_classes)
from .critical import list_color
from .graphs import Graph, gap
from .lists import ListAssignment, save
from .params import ParamSet, check_inequalities
from .dense import has_no_dense_subgraph

Charge = Union[Fraction, float]


# ===========================================================================
# absorption layers
# ===========================================================================

def absorption_threshold(g: Graph, L: ListAssignment, p: ParamSet, v: int) -> float:
    """Neighbours inside the absorbed set that an outside vertex needs to join.

    (Save_L(v) + eps*log^10 k) / ((1-K)(1-eps')).  Note the log term is paid
    at eps, not eps': absorption into a layer is deliberately cheaper than
    the priority threshold used by the savedness check.
    """
    return float(save(g, L, v) + p.epsilon * _log_fraction(p)) / (
        (1 - p.K) * float(1 - p.epsilon_prime))


class Decomposition:
    """The S_0/S_1/.../very-lordly/discharged split of a vertex set.

    layers[0] is the static four-class seed; layers[i] the i-th absorption
    wave.  s_infinity is the union of all layers (the seed included: the
    receivers of rules R1/R3 are exactly the absorbed vertices).  The
    very-lordly residue collects very lordly vertices that were never
    absorbed, and discharged is everything else.  The four parts
    (s_infinity, residue, discharged) partition V(G), with s_infinity
    itself partitioned by the layers.

    ordering lists later layers first and breaks ties by vertex id, so a
    vertex absorbed by wave i sees its counted neighbours after itself;
    the residue and the discharged set are appended at the end, making the
    ordering a full permutation of V(G).
    """

    __slots__ = ("layers", "s_infinity", "very_lordly_residue", "discharged",
                 "ordering")

    def __init__(self, layers: tuple[frozenset[int], ...],
                 s_infinity: frozenset[int],
                 very_lordly_residue: frozenset[int],
                 discharged: frozenset[int],
                 ordering: tuple[int, ...]):
        self.layers = layers
        self.s_infinity = s_infinity
        self.very_lordly_residue = very_lordly_residue
        self.discharged = discharged
        self.ordering = ordering

    def layer_of(self, v: int) -> Optional[int]:
        for i, layer in enumerate(self.layers):
            if v in layer:
                return i
        return None

    def to_json(self) -> str:
        return json.dumps({
            "layers": [sorted(layer) for layer in self.layers],
            "s_infinity": sorted(self.s_infinity),
            "very_lordly_residue": sorted(self.very_lordly_residue),
            "discharged": sorted(self.discharged),
            "ordering": list(self.ordering),
        }, sort_keys=True)

    def __repr__(self) -> str:
        sizes = ",".join(str(len(layer)) for layer in self.layers)
        return (f"Decomposition(layers=[{sizes}], "
                f"|L|={len(self.very_lordly_residue)}, "
                f"|D|={len(self.discharged)})")


def build_decomposition(g: Graph, L: ListAssignment, p: ParamSet) -> Decomposition:
    """Run the absorption fixed point and classify the leftovers.

    Waves are computed against the union of all earlier layers, so the
    construction is monotone and stops at the first empty wave.  A vertex
    whose threshold is non-positive (negative Save from an oversized list)
    joins the first wave unconditionally.
    """
    layers = [static_saved_classes(g, L, p)]
    absorbed = set(layers[0])
    while True:
        wave = frozenset(
            v for v in g.vertices if v not in absorbed
            and sum(1 for u in g.neighbours(v) if u in absorbed)
            >= absorption_threshold(g, L, p, v))
        if not wave:
            break
        layers.append(wave)
        absorbed |= wave
    s_infinity = frozenset(absorbed)
    residue = frozenset(v for v in g.vertices if v not in s_infinity
                        and is_very_lordly(g, L, p, v))
    discharged = frozenset(v for v in g.vertices
                           if v not in s_infinity and v not in residue)
    ordering = tuple(v for layer in reversed(layers) for v in sorted(layer))
    ordering += tuple(sorted(residue)) + tuple(sorted(discharged))
    return Decomposition(tuple(layers), s_infinity, residue, discharged, ordering)


# ===========================================================================
# charge ledger and rules R1-R4
# ===========================================================================

class ChargeLedger:
    """Charges before, between, and after the redistribution rules.

    ch is the initial charge, ch1 the state after R1, ch2 after R2, and
    ch_star the final state after R3 and R4.  trace records every transfer
    as (rule, sender, receiver, amount) in application order.  With
    exact=True all amounts are Fractions and conservation is an identity;
    with exact=False everything runs in floats.
    """

    __slots__ = ("ch", "ch1", "ch2", "ch_star", "trace", "exact")

    def __init__(self, ch: dict[int, Charge], ch1: dict[int, Charge],
                 ch2: dict[int, Charge], ch_star: dict[int, Charge],
                 trace: tuple[tuple[str, int, int, Charge], ...], exact: bool):
        self.ch = ch
        self.ch1 = ch1
        self.ch2 = ch2
        self.ch_star = ch_star
        self.trace = trace
        self.exact = exact

    def total_initial(self) -> Charge:
        return sum(self.ch.values())

    def total_final(self) -> Charge:
        return sum(self.ch_star.values())

    def conservation_defect(self) -> Charge:
        """sum(ch_star) - sum(ch): exactly zero in exact mode."""
        return self.total_final() - self.total_initial()

    def to_json(self) -> str:
        def num(x: Charge):
            return str(x) if isinstance(x, Fraction) else x
        return json.dumps({
            "exact": self.exact,
            "ch": {str(v): num(c) for v, c in sorted(self.ch.items())},
            "ch_star": {str(v): num(c) for v, c in sorted(self.ch_star.items())},
            "trace": [{"rule": r, "from": s, "to": t, "amount": num(a)}
                      for r, s, t, a in self.trace],
        }, sort_keys=True)


def apply_rules(g: Graph, L: ListAssignment, p: ParamSet, dec: Decomposition,
                exact: bool = True) -> ChargeLedger:
    """Redistribute charge out of the discharged set, rule by rule.

    For v in D: if v is heavy, R1 sends 9*eps to each neighbour outside D
    and R2 splits ch(v)/2 evenly among the neighbours inside D (computed
    from the original charge; with no such neighbour the rule is vacuous).
    If instead v is normal, R3 sends 9*eps to each absorbed neighbour and
    R4 sends 9*eps to each very-lordly neighbour.  Senders are processed in
    vertex order, which never matters: every amount depends only on the
    initial charges.
    """
    if exact:
        nine_eps: Charge = 9 * p.epsilon
        base: dict[int, Charge] = {v: charge_exact(g, L, p, v) for v in g.vertices}
    else:
        nine_eps = float(9 * p.epsilon)
        base = {v: charge(g, L, p, v) for v in g.vertices}
    D = dec.discharged
    heavy = frozenset(v for v in D if is_heavy(g, L, p, v))
    trace: list[tuple[str, int, int, Charge]] = []

    ch1 = dict(base)
    for v in sorted(heavy):
        for u in sorted(g.neighbours(v) - D):
            ch1[v] -= nine_eps
            ch1[u] += nine_eps
            trace.append(("R1", v, u, nine_eps))

    ch2 = dict(ch1)
    for v in sorted(heavy):
        inside = sorted(g.neighbours(v) & D)
        if not inside:
            continue
        amount = base[v] / (2 * len(inside))
        for u in inside:
            ch2[v] -= amount
            ch2[u] += amount
            trace.append(("R2", v, u, amount))

    ch_star = dict(ch2)
    for v in sorted(D - heavy):
        for u in sorted(g.neighbours(v) & dec.s_infinity):
            ch_star[v] -= nine_eps
            ch_star[u] += nine_eps
            trace.append(("R3", v, u, nine_eps))
        for u in sorted(g.neighbours(v) & dec.very_lordly_residue):
            ch_star[v] -= nine_eps
            ch_star[u] += nine_eps
            trace.append(("R4", v, u, nine_eps))

    return ChargeLedger(base, ch1, ch2, ch_star, tuple(trace), exact)


def receiver_identity_defects(g: Graph, p: ParamSet, ledger: ChargeLedger,
                              dec: Decomposition) -> dict[int, Charge]:
    """ch_star(v) - (ch(v) + 9*eps*|N(v) cap D|) for each receiver v.

    Receivers are the vertices outside D (absorbed or very lordly); each
    gets 9*eps from every discharged neighbour -- under R1 from heavy ones,
    under R3/R4 from normal ones -- and never sends.  All defects are
    exactly zero in exact mode.
    """
    nine_eps: Charge = 9 * p.epsilon if ledger.exact else float(9 * p.epsilon)
    defects: dict[int, Charge] = {}
    for v in sorted(dec.s_infinity | dec.very_lordly_residue):
        in_d = sum(1 for u in g.neighbours(v) if u in dec.discharged)
        defects[v] = ledger.ch_star[v] - (ledger.ch[v] + nine_eps * in_d)
    return defects


# ===========================================================================
# positivity verification
# ===========================================================================

class PositivityReport:
    """Verdict on the final-charge positivity claims.

    hypotheses maps each standing hypothesis to whether it holds on the
    instance: the parameter gate, the list cap |L(v)| <= min(d(v), k), the
    failure of the main inequality, no extremely heavy vertex, and no dense
    subgraph.  When all hold, the claims under test are ch1(v) > ch(v)/2
    for heavy v in D and ch_star(v) > 0 for every v in D; violations are
    recorded regardless, but only count against a "verified" status when
    the hypotheses applied.
    """

    __slots__ = ("hypotheses", "heavy_violations", "positivity_violations")

    def __init__(self, hypotheses: dict[str, bool],
                 heavy_violations: tuple[int, ...],
                 positivity_violations: tuple[int, ...]):
        self.hypotheses = hypotheses
        self.heavy_violations = heavy_violations
        self.positivity_violations = positivity_violations

    @property
    def applicable(self) -> bool:
        return all(self.hypotheses.values())

    def failing_hypotheses(self) -> list[str]:
        return [name for name, ok in self.hypotheses.items() if not ok]

    @property
    def status(self) -> str:
        if not self.applicable:
            return "hypothesis_failed"
        if self.heavy_violations or self.positivity_violations:
            return "counterexample"
        return "verified"

    def __bool__(self) -> bool:
        return self.status == "verified"

    def to_json(self) -> str:
        return json.dumps({
            "status": self.status,
            "hypotheses": self.hypotheses,
            "heavy_violations": list(self.heavy_violations),
            "positivity_violations": list(self.positivity_violations),
        }, sort_keys=True)


def verify_positive_final_charge(g: Graph, L: ListAssignment, p: ParamSet,
                                 ledger: ChargeLedger, dec: Decomposition,
                                 dense_mode: str = "heuristic") -> PositivityReport:
    """Check that discharging left every vertex of D strictly positive.

    The claims are theorems only under the standing hypotheses, so the
    report carries both: which hypotheses the instance satisfies, and which
    vertices (if any) break the numeric conclusions.  A failed hypothesis
    downgrades the verdict to "hypothesis_failed" rather than asserting.
    """
    list_cap = all(L.size(v) <= min(g.degree(v), p.k) for v in g.vertices)
    if list_cap:
        main_fails = not check_main_inequality(g, L, p)
    else:
        main_fails = False  # not evaluable without the cap; treat as unmet
    hypotheses = {
        "parameter_gate": check_inequalities(p).all_pass,
        "list_cap": list_cap,
        "main_inequality_fails": main_fails,
        "no_extremely_heavy": not any(is_extremely_heavy(g, L, p, v)
                                      for v in g.vertices),
        "no_dense_subgraph": bool(has_no_dense_subgraph(g, L, p, mode=dense_mode)),
    }
    heavy_bad = tuple(
        v for v in sorted(dec.discharged)
        if is_heavy(g, L, p, v) and not ledger.ch1[v] > ledger.ch[v] / 2)
    positive_bad = tuple(v for v in sorted(dec.discharged)
                         if not ledger.ch_star[v] > 0)
    return PositivityReport(hypotheses, heavy_bad, positive_bad)


# ===========================================================================
# global inequalities
# ===========================================================================

def main_inequality_sides(g: Graph, L: ListAssignment, p: ParamSet,
                          k: Optional[int] = None) -> tuple[Fraction, Fraction]:
    """Exact sides of sum(Save + eps log^10 k) > sum(2 eps Gap - 7 eps (k-|L|)).

    The difference of the two sides is exactly the total initial charge.
    """
    if k is None:
        k = p.k
    eps = p.epsilon
    log_term = Fraction(p.log_term(k))
    lhs = Fraction(0)
    rhs = Fraction(0)
    for v in g.vertices:
        lhs += save(g, L, v) + eps * log_term
        rhs += 2 * eps * gap(g, v) - 7 * eps * (k - L.size(v))
    return lhs, rhs


def check_main_inequality(g: Graph, L: ListAssignment, p: ParamSet,
                          k: Optional[int] = None) -> bool:
    """Strict main inequality, evaluated in exact rational arithmetic."""
    if k is None:
        k = p.k
    over = sorted(v for v in g.vertices if L.size(v) > k)
    if over:
        raise ValueError(f"|L(v)| <= k required; violated at {over[:5]}")
    lhs, rhs = main_inequality_sides(g, L, p, k)
    return lhs > rhs


def check_nice_inequality(g: Graph, L: ListAssignment, p: ParamSet) -> bool:
    """sum(Save) > eps * sum(Gap), the log-free form of the density bound."""
    total_save = sum(Fraction(save(g, L, v)) for v in g.vertices)
    total_gap = sum(Fraction(gap(g, v)) for v in g.vertices)
    return total_save > p.epsilon * total_gap


def residual_inequality_sides(g: Graph, L: ListAssignment, p: ParamSet,
                              D: Iterable[int],
                              k: Optional[int] = None) -> tuple[Fraction, Fraction]:
    """Exact sides of the inequality inherited by G - D.

    Over v outside D: Save + eps log^10 k on the left; on the right
    2 eps Gap_{G-D}(v) - 7 eps (k - |L(v)| + |N(v) cap D|), with the gap
    recomputed in the induced subgraph.  Save keeps the original degree:
    after the pipeline's list trim it equals the residual instance's Save.
    """
    if k is None:
        k = p.k
    D = frozenset(D)
    rest = [v for v in g.vertices if v not in D]
    h, ids = g.induced(rest)
    eps = p.epsilon
    log_term = Fraction(p.log_term(k))
    lhs = Fraction(0)
    rhs = Fraction(0)
    for i, v in enumerate(ids):
        in_d = sum(1 for u in g.neighbours(v) if u in D)
        lhs += save(g, L, v) + eps * log_term
        rhs += 2 * eps * gap(h, i) - 7 * eps * (k - L.size(v) + in_d)
    return lhs, rhs


def check_residual_inequality(g: Graph, L: ListAssignment, p: ParamSet,
                              D: Iterable[int], k: Optional[int] = None) -> bool:
    """Strict residual inequality for the complement of D."""
    lhs, rhs = residual_inequality_sides(g, L, p, D, k)
    return lhs < rhs


# ===========================================================================
# reduction pipeline
# ===========================================================================

class PipelineOutcome:
    """Terminal state of the reduction loop.

    status is one of "saved" (the remaining instance passed the savedness
    check; witness holds the ordering in original vertex ids), "colored"
    (a full list-colouring was assembled and validated), "uncolorable", or
    "budget_exhausted" (the exact solver hit its node budget).  mode is
    "reduction", or "solver_only" when the parameter gate failed and the
    pipeline refused to use any savedness reasoning, or "reduction_ungated"
    when the caller waived that refusal (enforce_gate=False) and the loop
    ran with the savedness terminal disabled.  iterations carries one
    summary dict per loop step.

    An "uncolorable" status is a certificate for the original instance only
    if no list was restricted before the solver reported it (the first
    iteration): later reports are relative to the colours committed on
    peeled vertices and to the arbitrary half of the list trim.
    """

    __slots__ = ("status", "mode", "coloring", "witness", "iterations")

    def __init__(self, status: str, mode: str,
                 coloring: Optional[dict[int, int]],
                 witness: Optional[tuple[int, ...]],
                 iterations: tuple[dict, ...]):
        self.status = status
        self.mode = mode
        self.coloring = coloring
        self.witness = witness
        self.iterations = iterations

    def __bool__(self) -> bool:
        return self.status in ("saved", "colored")

    def to_json(self) -> str:
        return json.dumps({
            "status": self.status,
            "mode": self.mode,
            "coloring": (None if self.coloring is None
                         else {str(v): c for v, c in sorted(self.coloring.items())}),
            "witness": None if self.witness is None else list(self.witness),
            "iterations": list(self.iterations),
        }, sort_keys=True)

    def __repr__(self) -> str:
        return (f"PipelineOutcome(status={self.status!r}, mode={self.mode!r}, "
                f"iterations={len(self.iterations)})")


def greedy_by_ordering(g: Graph, L: ListAssignment,
                       ordering: Iterable[int]) -> Optional[dict[int, int]]:
    """First-fit colouring along the ordering; None when some vertex is stuck."""
    colour: dict[int, int] = {}
    for v in ordering:
        used = {colour[u] for u in g.neighbours(v) if u in colour}
        pick = next((c for c in sorted(L[v]) if c not in used), None)
        if pick is None:
            return None
        colour[v] = pick
    return colour


def _validate_colouring(g: Graph, L: ListAssignment, phi: dict[int, int]) -> None:
    assert set(phi) == set(g.vertices), "colouring must cover every vertex"
    for v, c in phi.items():
        assert c in L[v], f"colour {c} not in the list of {v}"
    for v in g.vertices:
        for u in g.neighbours(v):
            assert phi[u] != phi[v], f"edge {u},{v} is monochromatic"


def _restricted_instance(g: Graph, L: ListAssignment, D: frozenset[int],
                         phi: dict[int, int]) -> tuple[Graph, ListAssignment, list[int]]:
    """Delete D, remove its colours from neighbouring lists, trim to Save parity.

    Each survivor v keeps |L(v)| - |N(v) cap D| colours (never fewer exist:
    every deleted neighbour removes at most one colour), dropping the
    largest ones first when repeated colours on deleted neighbours left the
    list too long.  Trimming to that exact size keeps Save_L(v) unchanged
    across the step, which is what the residual inequality accounts for.
    The floor at zero only triggers when v had more deleted neighbours than
    colours, in which case v is already uncolourable in this branch.
    """
    rest = [v for v in g.vertices if v not in D]
    h, ids = g.induced(rest)
    new_lists: dict[int, list[int]] = {}
    for i, v in enumerate(ids):
        used = {phi[u] for u in g.neighbours(v) if u in D}
        kept = [c for c in sorted(L[v]) if c not in used]
        target = max(0, L.size(v) - sum(1 for u in g.neighbours(v) if u in D))
        new_lists[i] = kept[:target]
    return h, ListAssignment(h, new_lists), ids


def reduction_pipeline(g: Graph, L: ListAssignment, p: ParamSet,
                       k: Optional[int] = None,
                       node_budget: Optional[int] = 200_000,
                       enforce_gate: bool = True) -> PipelineOutcome:
    """Peel, colour, restrict, repeat.

    Each iteration first tries the savedness check (terminal: the instance
    is colourable by the probabilistic argument; a greedy completion is
    attempted for a concrete witness).  Otherwise it peels: a single
    extremely heavy vertex when one exists and the main inequality fails,
    else the discharged set of the layered decomposition.  The peeled part
    is coloured exactly, surviving lists are restricted and trimmed, and
    the loop recurses on the strictly smaller remainder.  An empty
    discharged set (layers plus residue covering the graph without the
    savedness check firing) falls back to solving the remainder outright,
    as does a failed parameter gate on the whole instance.

    ``enforce_gate=False`` keeps running the peel loop under a failed
    parameter gate, but with the savedness terminal disabled, since its
    colourability guarantee is exactly what the gate certifies.  Colouring
    a peeled part exactly and striking its colours from surviving lists is
    sound for any parameters, so this mode is useful for studying the
    reduction mechanics at exaggerated epsilon, where degrees around
    1/epsilon (and hence the extremely-heavy peel) are reachable on small
    graphs.  Gated runs only meet that peel on graphs with max degree on
    the order of 1/epsilon.
    """
    if k is None:
        k = p.k
    offenders = sorted(v for v in g.vertices
                       if L.size(v) > min(g.degree(v), k))
    if offenders:
        raise ValueError(
            f"|L(v)| <= min(d(v), k) required; violated at {offenders[:5]}")

    iterations: list[dict] = []
    gate = check_inequalities(p)
    if not gate.all_pass and enforce_gate:
        result = list_color(g, L, node_budget=node_budget)
        iterations.append({"n": g.n, "action": "solver_only",
                           "gate_failures": gate.failing(),
                           "solver_nodes": result.nodes})
        phi = None
        if result.status == "colored":
            phi = dict(result.coloring)
            _validate_colouring(g, L, phi)
        return PipelineOutcome(result.status, "solver_only", phi, None,
                               tuple(iterations))
    mode = "reduction" if gate.all_pass else "reduction_ungated"
    if not gate.all_pass:
        iterations.append({"n": g.n, "action": "gate_waived",
                           "gate_failures": gate.failing()})

    cur_g, cur_L = g, L
    orig = list(g.vertices)  # current index -> original vertex id
    assembled: dict[int, int] = {}
    prev_n = g.n + 1
    while True:
        assert cur_g.n < prev_n, "reduction failed to shrink the vertex set"
        prev_n = cur_g.n
        if cur_g.n == 0:
            _validate_colouring(g, L, assembled)
            return PipelineOutcome("colored", mode, assembled, None,
                                   tuple(iterations))

        saved = is_saved(cur_g, cur_L, p, k) if gate.all_pass else None
        if saved:
            greedy = greedy_by_ordering(cur_g, cur_L, saved.ordering)
            full = None
            if greedy is not None:
                full = dict(assembled)
                full.update({orig[v]: c for v, c in greedy.items()})
                _validate_colouring(g, L, full)
            iterations.append({"n": cur_g.n, "action": "saved",
                               "layer_sizes": [len(x) for x in saved.layers],
                               "greedy_completed": greedy is not None})
            witness = tuple(orig[v] for v in saved.ordering)
            return PipelineOutcome("saved", mode, full, witness,
                                   tuple(iterations))

        main_holds = check_main_inequality(cur_g, cur_L, p, k)
        heavy_single = None
        if not main_holds:
            extremes = [v for v in cur_g.vertices
                        if is_extremely_heavy(cur_g, cur_L, p, v)]
            if extremes:
                heavy_single = max(
                    extremes, key=lambda v: (charge_exact(cur_g, cur_L, p, v), -v))

        if heavy_single is not None:
            D = frozenset([heavy_single])
            action = "extremely_heavy"
        else:
            dec = build_decomposition(cur_g, cur_L, p)
            D = dec.discharged
            action = "decomposition"
            if not D:
                result = list_color(cur_g, cur_L, node_budget=node_budget)
                iterations.append({"n": cur_g.n, "action": "solver_fallback",
                                   "reason": "layers cover the graph",
                                   "solver_nodes": result.nodes})
                full = None
                if result.status == "colored":
                    full = dict(assembled)
                    full.update({orig[v]: c for v, c in result.coloring.items()})
                    _validate_colouring(g, L, full)
                return PipelineOutcome(result.status, mode, full, None,
                                       tuple(iterations))

        part = sorted(D)
        gd, part_ids = cur_g.induced(part)
        Ld = ListAssignment(gd, {i: sorted(cur_L[w]) for i, w in enumerate(part_ids)})
        result = list_color(gd, Ld, node_budget=node_budget)
        iterations.append({"n": cur_g.n, "action": action, "peeled": len(part),
                           "peeled_ids": tuple(orig[w] for w in part),
                           "solver_nodes": result.nodes})
        if result.status != "colored":
            return PipelineOutcome(result.status, mode, None, None,
                                   tuple(iterations))
        phi_local = {part_ids[i]: c for i, c in result.coloring.items()}
        assembled.update({orig[w]: c for w, c in phi_local.items()})
        cur_g, cur_L, rest_ids = _restricted_instance(cur_g, cur_L, D, phi_local)
        orig = [orig[w] for w in rest_ids]
