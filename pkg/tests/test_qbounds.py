import itertools
import math

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from strongprops.matgraph import (Graph, HighQFamily, complete, cycle, disjoint_union,
                                  empty_graph, enumerate_graphs, h_tree, path, star,
                                  three_sun)
from strongprops.qbounds import (GraphParams, Justification, bounds, brute_force_params,
                                 classify_high_q, clique_cover, cycles, disjoint_pair,
                                 find_forbidden_structure, longest_cycle, q_lower, q_upper,
                                 replay, zero_forcing_number)
from strongprops.spectra import q_exact


def to_nx(G):
    H = nx.Graph()
    H.add_nodes_from(G.vertices)
    H.add_edges_from(G.edges)
    return H


@st.composite
def graphs(draw, lo=1, hi=7):
    n = draw(st.integers(lo, hi))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, keep in zip(pairs, mask) if keep])


def test_lower_examples():
    assert q_lower(star(3), GraphParams(M=2, Mplus=1)).value == 3
    for n in range(3, 10):
        assert q_lower(cycle(n), GraphParams(M=2)).value >= math.ceil(n / 2)
    b = q_lower(empty_graph(4))
    assert b.value == 1 and b.rules[0].rule == "edges"
    assert q_lower(path(2)).value == 2


def test_lower_without_M_is_trivial():
    b = q_lower(cycle(5))
    assert b.value == 2 and [r.rule for r in b.rules] == ["edges"]
    # K13 is a path with an interior leaf, so the family rule applies
    assert q_lower(star(3)).value == 3


def test_params_validation():
    with pytest.raises(ValueError):
        q_lower(path(3), GraphParams(M=4))
    with pytest.raises(ValueError):
        q_lower(path(3), GraphParams(M=1, Mplus=2))


def test_upper_examples(certs):
    b = q_upper(three_sun())
    assert b.value <= 4
    assert any(r.rule == "certificate" and r.numbers["certificate"] == "prop:HHY3/A4" and r.value == 4
               for r in b.rules)
    # C6 with a pendant path of two vertices
    G = Graph.from_edges(8, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1), (6, 7), (7, 8)])
    b = q_upper(G)
    assert b.value <= 5 and any(r.rule == "cycle" and r.value == 5 for r in b.rules)
    # K3 and K4 joined by one edge: two cliques cover it
    G = Graph.from_edges(7, [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (4, 7), (5, 6), (5, 7), (6, 7), (3, 4)])
    b = q_upper(G)
    assert b.value <= 4 and any(r.rule == "clique_cover" and r.value == 4 for r in b.rules)


def test_user_clique_cover_for_large_graphs():
    G = disjoint_union(complete(6), complete(6))
    b = q_upper(G, params=GraphParams(clique_cover_number=2))
    assert any(r.rule == "clique_cover" and r.witness is None and r.value == 4 for r in b.rules)


def test_paths_round_trip():
    for n in range(1, 9):
        lo = q_lower(path(n), GraphParams(M=1)).value
        assert lo == n == q_upper(path(n)).value


def test_cycles_tight_with_corpus(certs):
    import strongprops.constructs as cs
    for n in range(4, 9):
        extra = list(certs.values()) + [cs.flipped_cycle(n)]
        assert q_lower(cycle(n), GraphParams(M=2)).value == math.ceil(n / 2)
        assert q_upper(cycle(n), corpus=extra).value == math.ceil(n / 2)


@given(graphs(1, 4), graphs(1, 4))
def test_disjoint_union_bound(g1, g2):
    G = disjoint_union(g1, g2)
    assert q_upper(G).value <= max(g1.n, g2.n)


@given(graphs())
def test_every_rule_replays(G):
    rep = bounds(G, GraphParams())
    for j in rep.lower.rules + rep.upper.rules:
        assert replay(G, j), j.to_json()
    assert rep.lower.value <= rep.upper.value


@given(graphs(2, 7))
def test_tampered_rules_fail(G):
    for j in q_upper(G).rules:
        bad = Justification(j.rule, j.value - 1, j.numbers, j.witness)
        assert not replay(G, bad)


@given(graphs(1, 6))
def test_bounds_bracket_brute_force(G):
    params = brute_force_params(G, budget=300)
    rep = bounds(G, params)
    assert rep.lower.value <= rep.upper.value
    for j in rep.upper.rules:
        assert replay(G, j, params=params)


@given(graphs(1, 8))
def test_clique_cover_matches_complement_colouring(G):
    cover = clique_cover(G)
    comp = nx.complement(to_nx(G))
    best = min(len(set(nx.coloring.greedy_color(comp, s).values()))
               for s in ("largest_first", "DSATUR", "independent_set"))
    assert len(cover) <= best
    for part in cover:
        assert all(G.has_edge(u, v) for u, v in itertools.combinations(part, 2))
    # no partition into fewer cliques: check by brute-force colouring
    if G.n <= 6:
        k = len(cover) - 1
        if k >= 1:
            ok = any(all(c[u - 1] != c[v - 1] for u, v in comp.edges)
                     for c in itertools.product(range(k), repeat=G.n))
            assert not ok


@given(graphs(3, 7))
def test_longest_cycle_matches_networkx(G):
    cyc = longest_cycle(G)
    nx_longest = max((len(c) for c in nx.simple_cycles(to_nx(G))), default=0)
    nx_longest = nx_longest if nx_longest >= 3 else 0
    assert (len(cyc) if cyc else 0) == nx_longest


def test_disjoint_pair():
    G = disjoint_union(complete(3), star(3))
    assert disjoint_pair(G) is not None
    assert disjoint_pair(star(3)) is None
    assert disjoint_pair(path(8)) is None


def test_zero_forcing():
    assert zero_forcing_number(path(5)) == 1
    assert zero_forcing_number(complete(5)) == 4
    assert zero_forcing_number(cycle(6)) == 2
    assert zero_forcing_number(star(4)) == 3
    assert zero_forcing_number(star(4), psd=True) == 1
    assert zero_forcing_number(h_tree(), psd=True) == 1


def test_brute_force_star():
    p = brute_force_params(star(3))
    assert (p.M, p.Mplus) == (2, 1) and p.M_lower == 2
    assert q_lower(star(3), p).value == 3


def test_classify_examples():
    c = classify_high_q(path(6))
    assert c.verdict == "q_equals_n" and c.family is HighQFamily.PATH
    G = Graph.from_edges(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 3)])
    c = classify_high_q(G)
    assert c.verdict == "q_at_least_n_minus_1" and c.family is HighQFamily.PATH_WITH_DISTANCE2_CHORD
    c = classify_high_q(cycle(5))
    assert c.verdict == "q_at_most_n_minus_2" and c.evidence.rule == "cycle"
    assert replay(cycle(5), c.evidence) and c.evidence.value == 3
    c = classify_high_q(h_tree())
    assert c.verdict == "q_at_most_n_minus_2" and c.structure == "H tree"


@pytest.mark.parametrize("n", range(1, 7))
def test_classifier_consistent_with_bounds(n):
    for G in enumerate_graphs(n, up_to_isomorphism=True):
        c = classify_high_q(G)
        up = q_upper(G)
        if c.verdict == "q_at_most_n_minus_2":
            assert c.evidence is not None and replay(G, c.evidence)
            assert c.evidence.value <= n - 2
        else:
            assert up.value >= n - 1
            assert find_forbidden_structure(G) is None


def test_classify_json():
    out = classify_high_q(cycle(5)).to_json()
    assert out["schema"] == "strongprops.classification/1" and out["evidence"]["rule"] == "cycle"
