"""Tests for the exact solvers, criticality checks, and density-bound verifiers.

The chromatic-number solver is cross-validated against a plain colour-vector
search over the complete catalogue of graphs on at most seven vertices, so
everything built on it (criticality predicates, composition, enumeration)
rests on an independently confirmed foundation.  Density margins are exact
rationals throughout: the composition ladder K4, K4*K4, K4*(K4*K4) meets the
Kostochka-Yancey baseline with margin exactly 0 at n = 4, 7, 10, and the
Moser spindle ties the n = 7 rung at average degree 22/7.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from critgraph.critical import (
    BudgetExceededError,
    certify_criticality,
    chromatic_number,
    enumerate_k_critical,
    is_L_critical,
    is_k_critical,
    k_colouring,
    list_color,
    ore_compose,
    verify_ky_bound,
    verify_thm_1_2,
    verify_thm_1_4,
)
from critgraph.graphs import Graph, average_degree, clique_number, mad
from critgraph.lists import ListAssignment

from helpers import (
    complete_graph,
    cycle_graph,
    moser_spindle,
    path_graph,
    petersen_graph,
    random_graph,
    uniform_lists,
)


def wheel5() -> Graph:
    """Hub 0 joined to the 5-cycle 1..5: the unique 4-critical graph on 6."""
    return Graph(6, [(0, i) for i in range(1, 6)]
                 + [(i, i % 5 + 1) for i in range(1, 6)])


def proper(g: Graph, colouring: dict) -> bool:
    return (set(colouring) == set(g.vertices)
            and all(colouring[u] != colouring[v]
                    for u in g.vertices for v in g.neighbours(u)))


# ===========================================================================
# reference solver: exhaustive colour-vector search
# ===========================================================================

def vector_colourable(g: Graph, t: int) -> bool:
    """Depth-first over all colour vectors in vertex order -- no clique
    bounds, no symmetry breaking, nothing shared with the real solver."""
    if g.n == 0:
        return True
    if t == 0:
        return False
    colour: dict[int, int] = {}

    def go(v: int) -> bool:
        if v == g.n:
            return True
        for c in range(t):
            if any(colour.get(u) == c for u in g.neighbours(v)):
                continue
            colour[v] = c
            if go(v + 1):
                return True
            del colour[v]
        return False

    return go(0)


def chi_by_vectors(g: Graph) -> int:
    return next(t for t in itertools.count() if vector_colourable(g, t))


# ===========================================================================
# chromatic number
# ===========================================================================

def test_chromatic_number_named_graphs():
    assert chromatic_number(cycle_graph(5)) == 3
    assert chromatic_number(petersen_graph()) == 3
    assert chromatic_number(moser_spindle()) == 4
    assert chromatic_number(complete_graph(4)) == 4
    assert chromatic_number(cycle_graph(6)) == 2
    assert chromatic_number(path_graph(5)) == 2
    assert chromatic_number(Graph(3, [])) == 1
    assert chromatic_number(Graph(1, [])) == 1
    assert chromatic_number(Graph(0, [])) == 0


def test_k_colouring_returns_proper_colourings():
    for g, t in [(cycle_graph(5), 3), (petersen_graph(), 3),
                 (moser_spindle(), 4), (complete_graph(5), 5)]:
        col = k_colouring(g, t)
        assert col is not None and proper(g, col)
        assert all(0 <= c < t for c in col.values())


def test_k_colouring_refuses_below_chi():
    assert k_colouring(cycle_graph(5), 2) is None
    assert k_colouring(petersen_graph(), 2) is None
    assert k_colouring(moser_spindle(), 3) is None
    assert k_colouring(complete_graph(4), 3) is None


def test_k_colouring_degenerate_budgets():
    assert k_colouring(cycle_graph(4), 0) is None
    assert k_colouring(Graph(0, []), 0) == {}
    col = k_colouring(cycle_graph(5), 7)      # t >= n shortcut
    assert col is not None and proper(cycle_graph(5), col)


def test_chromatic_number_matches_vector_search_on_full_catalogue():
    # every graph on at most 7 vertices, one per isomorphism class
    atlas = nx.graph_atlas_g()
    assert len(atlas) == 1253
    assert max(a.number_of_nodes() for a in atlas) == 7
    for a in atlas:
        g = Graph(a.number_of_nodes(), a.edges())
        assert chromatic_number(g) == chi_by_vectors(g)


# ===========================================================================
# list colouring
# ===========================================================================

def test_k4_with_three_lists_uncolorable():
    res = list_color(complete_graph(4), uniform_lists(complete_graph(4), 3))
    assert res.status == "uncolorable"
    assert res.coloring is None and not res


def test_two_lists_on_cycles():
    even = list_color(cycle_graph(6), uniform_lists(cycle_graph(6), 2))
    assert even.status == "colored" and proper(cycle_graph(6), even.coloring)

    g5 = cycle_graph(5)
    identical = list_color(g5, uniform_lists(g5, 2))
    assert identical.status == "uncolorable"

    # one deviant list breaks the parity obstruction
    lists = {v: [0, 1] for v in range(5)}
    lists[2] = [0, 2]
    varied = list_color(g5, ListAssignment(g5, lists))
    assert varied.status == "colored"
    assert all(varied.coloring[v] in lists[v] for v in range(5))


def test_colored_result_surface():
    g = cycle_graph(6)
    res = list_color(g, uniform_lists(g, 2))
    assert bool(res) and res.nodes >= g.n
    blob = json.loads(res.to_json())
    assert blob["status"] == "colored"
    assert blob["coloring"]["0"] in (0, 1)
    assert blob["nodes"] == res.nodes


def test_empty_list_fails_without_search():
    g = path_graph(3)
    L = ListAssignment(g, {0: [0, 1], 1: [], 2: [0]})
    res = list_color(g, L)
    assert res.status == "uncolorable" and res.nodes == 0


def test_budget_exhaustion_is_not_uncolorable():
    g = complete_graph(4)
    L = uniform_lists(g, 3)
    starved = list_color(g, L, node_budget=3)
    assert starved.status == "budget_exhausted"
    assert starved.coloring is None and not starved
    assert starved.nodes == 4                   # the tick that broke the budget
    assert list_color(g, L).status == "uncolorable"


@given(st.integers(0, 10**9))
@settings(max_examples=60, deadline=None)
def test_list_color_agrees_with_brute_force(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(2, 5), rng.uniform(0.2, 0.9))
    lists = {v: sorted(rng.sample(range(4), rng.randint(1, 3)))
             for v in g.vertices}
    L = ListAssignment(g, lists)
    verts = list(g.vertices)
    brute = any(
        all(pick[u] != pick[v] for u in verts for v in g.neighbours(u) if u < v)
        for pick in (dict(zip(verts, combo))
                     for combo in itertools.product(*(lists[v] for v in verts)))
    )
    res = list_color(g, L)
    assert (res.status == "colored") == brute
    if res:
        assert proper(g, res.coloring)
        assert all(res.coloring[v] in lists[v] for v in verts)


# ===========================================================================
# criticality
# ===========================================================================

def test_complete_graphs_are_critical():
    for k in (3, 4, 5):
        assert is_k_critical(complete_graph(k), k)
    assert not is_k_critical(complete_graph(4), 3)
    assert not is_k_critical(complete_graph(4), 5)


def test_odd_cycles_are_3_critical():
    for n in (3, 5, 7, 9):
        assert is_k_critical(cycle_graph(n), 3)
    assert not is_k_critical(cycle_graph(6), 3)


def test_moser_spindle_is_4_critical():
    g = moser_spindle()
    assert (g.n, g.num_edges()) == (7, 11)
    assert chromatic_number(g) == 4
    assert is_k_critical(g, 4)


def test_isolated_vertex_breaks_criticality():
    # every one-edge deletion of K4-plus-isolate is 3-colourable, yet the
    # graph is not vertex-critical: dropping the isolate changes nothing
    g = Graph(5, [(a, b) for a in range(4) for b in range(a)])
    assert chromatic_number(g) == 4
    assert not is_k_critical(g, 4)


def test_diamond_is_not_3_critical():
    diamond = Graph(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])
    assert chromatic_number(diamond) == 3
    assert not is_k_critical(diamond, 3)


def test_L_criticality():
    g5 = cycle_graph(5)
    assert is_L_critical(g5, uniform_lists(g5, 2))
    assert is_L_critical(complete_graph(4), uniform_lists(complete_graph(4), 3))
    assert not is_L_critical(cycle_graph(6), uniform_lists(cycle_graph(6), 2))
    assert not is_L_critical(g5, uniform_lists(g5, 3))


def test_L_criticality_fails_on_uncolorable_subinstance():
    # C5 plus an isolate: still uncolorable after deleting the isolate
    g = Graph(6, [(i, (i + 1) % 5) for i in range(5)])
    lists = {v: [0, 1] for v in range(5)}
    lists[5] = [0]
    assert not is_L_critical(g, ListAssignment(g, lists))


def test_L_criticality_budget_raises():
    g = complete_graph(4)
    with pytest.raises(BudgetExceededError):
        is_L_critical(g, uniform_lists(g, 3), node_budget=2)


def test_certificate_roundtrip_and_validation():
    cert = certify_criticality(moser_spindle(), 4)
    assert cert is not None and cert.validate()
    blob = json.loads(cert.to_json())
    assert blob["n"] == 7 and blob["k"] == 4
    assert len(blob["edge_colorings"]) == 11
    assert len(blob["vertex_colorings"]) == 7

    # corrupt one stored colour: a clash with the surviving edges
    e = next(iter(cert.edge_colorings))
    u, v = next((a, b) for a in range(7) for b in range(7)
                if a != b and moser_spindle().has_edge(a, b) and (a, b) != e)
    cert.edge_colorings[e][u] = cert.edge_colorings[e][v]
    assert not cert.validate()


def test_certificate_none_for_non_critical():
    assert certify_criticality(cycle_graph(6), 3) is None
    assert certify_criticality(cycle_graph(5), 4) is None


# ===========================================================================
# composition
# ===========================================================================

def test_composition_bookkeeping_for_every_split():
    g1, g2, z = complete_graph(4), wheel5(), 0
    nbrs = sorted(g2.neighbours(z))
    for r in range(1, len(nbrs)):
        for combo in itertools.combinations(nbrs, r):
            h = ore_compose(g1, g2, (0, 1), z, split=combo)
            assert h.n == g1.n + g2.n - 1
            assert h.num_edges() == g1.num_edges() + g2.num_edges() - 1


def test_k4_composition_ladder():
    k4 = complete_graph(4)
    c7 = ore_compose(k4, k4, (0, 1), 0)
    assert (c7.n, c7.num_edges()) == (7, 11)
    assert average_degree(c7) == Fraction(22, 7)
    assert is_k_critical(c7, 4)

    c10 = ore_compose(k4, c7, (2, 3), 1)
    assert (c10.n, c10.num_edges()) == (10, 16)
    assert average_degree(c10) == Fraction(16, 5)
    assert is_k_critical(c10, 4)

    # the ladder meets the baseline exactly at every rung n = 1 (mod 3)
    assert verify_ky_bound(k4, 4) == 0
    assert verify_ky_bound(c7, 4) == 0
    assert verify_ky_bound(c10, 4) == 0


def test_composing_odd_cycles_gives_the_next_one():
    c9 = ore_compose(cycle_graph(5), cycle_graph(5), (0, 1), 0)
    assert nx.is_isomorphic(c9.to_networkx(), nx.cycle_graph(9))
    assert is_k_critical(c9, 3)


def test_composition_is_certified_critical_for_seed_pairs():
    pairs = [
        (complete_graph(4), complete_graph(4), 4),
        (wheel5(), complete_graph(4), 4),
        (cycle_graph(5), cycle_graph(7), 3),
    ]
    for g1, g2, k in pairs:
        h = ore_compose(g1, g2, next(iter(_edges(g1))), 0, k=k)
        cert = certify_criticality(h, k)
        assert cert is not None and cert.validate()


def _edges(g: Graph):
    return [(u, v) for u in g.vertices for v in g.neighbours(u) if u < v]


def test_composition_rejects_bad_inputs():
    k4, c5 = complete_graph(4), cycle_graph(5)
    with pytest.raises(ValueError):
        ore_compose(c5, k4, (0, 2), 0)              # not an edge
    with pytest.raises(ValueError):
        ore_compose(k4, k4, (0, 1), 9)              # no such vertex
    with pytest.raises(ValueError):
        ore_compose(k4, path_graph(2), (0, 1), 0)   # split vertex too thin
    with pytest.raises(ValueError):
        ore_compose(k4, k4, (0, 1), 0, split=[])    # empty side
    with pytest.raises(ValueError):
        ore_compose(k4, k4, (0, 1), 0, split=[1, 2, 3])  # nothing left for y
    with pytest.raises(ValueError):
        ore_compose(k4, wheel5(), (0, 1), 1, split=[3])  # 3 not adjacent to z
    with pytest.raises(ValueError):
        ore_compose(k4, c5, (0, 1), 0)              # no split is 4-critical


# ===========================================================================
# density baseline
# ===========================================================================

def test_ky_margin_zero_on_tight_families():
    for k in (3, 4, 5, 6):
        assert verify_ky_bound(complete_graph(k), k) == 0
    for n in (3, 5, 7, 9):
        assert verify_ky_bound(cycle_graph(n), 3) == 0
    assert verify_ky_bound(moser_spindle(), 4) == 0


def test_ky_margin_positive_on_wheel():
    assert verify_ky_bound(wheel5(), 4) == Fraction(2, 9)


def test_ky_rejects_non_critical_and_bad_k():
    with pytest.raises(ValueError):
        verify_ky_bound(cycle_graph(6), 3)
    with pytest.raises(ValueError):
        verify_ky_bound(petersen_graph(), 3)
    with pytest.raises(ValueError):
        verify_ky_bound(complete_graph(4), 1)


# ===========================================================================
# clique-sensitive average-degree bound
# ===========================================================================

def test_thm12_at_zero_eps_is_the_degree_floor():
    for g, k in [(complete_graph(4), 4), (wheel5(), 4),
                 (moser_spindle(), 4), (cycle_graph(7), 3)]:
        check = verify_thm_1_2(g, k, clique_number(g), 0)
        assert check.holds and bool(check)
        assert check.rhs == k - 2
        assert check.lhs == average_degree(g)


def test_thm12_complete_graph_algebra():
    eps = Fraction(1, 1000)
    for k in (4, 5, 6):
        check = verify_thm_1_2(complete_graph(k), k, k, eps)
        assert check.lhs == k - 1
        assert check.rhs == k - 2 - eps
        assert check.holds


def test_thm12_rhs_exact_at_tiny_eps():
    # at k = 4 the eps terms cancel against omega_cap = 3: rhs is exactly 2
    eps = Fraction(13, 50_000_000_000)
    check = verify_thm_1_2(moser_spindle(), 4, 3, eps)
    assert check.rhs == 2
    assert check.lhs == Fraction(22, 7) and check.holds

    slack = verify_thm_1_2(wheel5(), 4, 4, eps)
    assert slack.rhs == 2 - eps


def test_thm12_hypothesis_flag_reported_not_fudged():
    # omega_cap <= k - log^10 k is unsatisfiable at desk-scale k
    check = verify_thm_1_2(moser_spindle(), 4, 3, Fraction(1, 100))
    assert check.holds and not check.hypothesis_ok
    assert "hypothesis_ok=False" in repr(check)


def test_thm12_rejects_bad_instances():
    with pytest.raises(ValueError):
        verify_thm_1_2(cycle_graph(6), 3, 2, 0)         # not critical
    with pytest.raises(ValueError):
        verify_thm_1_2(moser_spindle(), 4, 2, 0)        # omega above the cap


# ===========================================================================
# chromatic number vs mad bound
# ===========================================================================

def test_thm14_k4_boundary_case():
    check = verify_thm_1_4(complete_graph(4), Fraction(1, 100))
    assert check.lhs == 4 and check.rhs == 4      # ceil(0.99*4 + 0.04)
    assert check.holds and not check.hypothesis_ok


def test_thm14_petersen():
    g = petersen_graph()
    assert mad(g) == 3 and clique_number(g) == 2
    check = verify_thm_1_4(g, Fraction(1, 20))
    assert check.lhs == 3 and check.rhs == 4      # ceil(0.95*4 + 0.1)
    assert check.holds


def test_thm14_zero_eps_is_the_degeneracy_bound():
    rng = random.Random(414)
    for _ in range(40):
        g = random_graph(rng, rng.randint(1, 9), rng.uniform(0.1, 0.9))
        check = verify_thm_1_4(g, 0)
        assert check.holds
        assert check.rhs == math.ceil(mad(g) + 1)


def test_thm14_reports_failure_outside_its_regime():
    # eps = 1 collapses the bound to omega, which C5 exceeds
    check = verify_thm_1_4(cycle_graph(5), 1)
    assert check.lhs == 3 and check.rhs == 2
    assert not check.holds and not check.hypothesis_ok


# ===========================================================================
# enumeration
# ===========================================================================

def test_enumerate_3_critical_finds_exactly_the_odd_cycles():
    found = list(enumerate_k_critical(3, 7))
    assert [(g.n, g.num_edges()) for g, _ in found] == [(3, 3), (5, 5), (7, 7)]
    for g, cert in found:
        assert nx.is_isomorphic(g.to_networkx(), nx.cycle_graph(g.n))
        assert cert.k == 3 and cert.validate()


def test_enumerate_4_critical_catalogue_to_seven_vertices():
    found = list(enumerate_k_critical(4, 7))
    signatures = sorted((g.n, g.num_edges()) for g, _ in found)
    assert signatures == [(4, 6), (6, 10), (7, 11), (7, 12)]
    assert all(g.n != 5 for g, _ in found)        # no 4-critical graph on 5

    by_sig = {(g.n, g.num_edges()): g for g, _ in found}
    assert nx.is_isomorphic(by_sig[(4, 6)].to_networkx(),
                            nx.complete_graph(4))
    assert nx.is_isomorphic(by_sig[(6, 10)].to_networkx(), nx.wheel_graph(6))
    assert nx.is_isomorphic(by_sig[(7, 11)].to_networkx(),
                            moser_spindle().to_networkx())

    for g, cert in found:
        assert cert.validate()
        assert min(g.degree(v) for v in g.vertices) >= 3
        assert verify_ky_bound(g, 4) >= 0
    assert verify_ky_bound(by_sig[(7, 12)], 4) == Fraction(2, 7)


def test_enumeration_validates_arguments():
    for k, n_max in [(2, 5), (5, 5), (3, 0), (3, 10)]:
        with pytest.raises(ValueError):
            list(enumerate_k_critical(k, n_max))


def test_enumeration_budget():
    with pytest.raises(BudgetExceededError):
        list(enumerate_k_critical(4, 7, node_budget=200))
