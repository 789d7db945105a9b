import random
from fractions import Fraction

import pytest

from vetoflow.matching import (
    CutWitness,
    Dinic,
    DominationGraph,
    build_domination_graph,
    extract_deficiency_witness,
    fractional_matching,
    hall_check_bruteforce,
    has_fractional_perfect_matching,
    max_bipartite_matching,
)
from vetoflow.profiles import PreferenceProfile, dominated_set
from tests_support_random import random_profiles


def test_dinic_on_a_small_network():
    # source 0, two middles, sink 3; bottleneck 3
    d = Dinic(4)
    d.add_edge(0, 1, 2)
    d.add_edge(0, 2, 2)
    d.add_edge(1, 3, 1)
    d.add_edge(2, 3, 2)
    assert d.max_flow(0, 3) == 3
    # saturated arcs cut 1 off; 0 and 1 stay connected through the residual
    assert d.reachable_in_residual(0) == frozenset({0, 1})


def test_domination_graph_edges(fix_p):
    g = build_domination_graph(fix_p, 1)
    assert g.edges == (
        frozenset({1, 2}),
        frozenset({1, 2}),
        frozenset({0, 1}),
        frozenset({0, 1}),
    )


def test_domination_graph_validation():
    with pytest.raises(ValueError):
        DominationGraph(0, 2, 2, (frozenset({0}),))
    with pytest.raises(ValueError):
        DominationGraph(0, 1, 2, (frozenset({1}),))
    with pytest.raises(ValueError):
        DominationGraph(0, 1, 2, (frozenset({0, 5}),))


def test_fix_p_middle_candidate_has_matching(fix_p):
    g = build_domination_graph(fix_p, 1)
    assert has_fractional_perfect_matching(g)
    mu = fractional_matching(g)
    assert mu is not None
    for row in mu:
        assert sum(row) == 1
    for c in range(3):
        assert sum(row[c] for row in mu) == Fraction(4, 3)
    # weights only sit on edges of the graph
    for i, row in enumerate(mu):
        for c, w in enumerate(row):
            assert w == 0 or c in g.edges[i]


def test_fix_t_worst_candidate_has_no_matching(fix_t):
    g = build_domination_graph(fix_t, 2)
    assert not has_fractional_perfect_matching(g)
    assert fractional_matching(g) is None
    w = extract_deficiency_witness(fix_t, 2)
    assert w is not None
    assert frozenset({0, 1}) <= w.voters
    assert w.dominated == frozenset({2})
    w.validate(fix_t, 2)


def test_witness_none_when_matching_exists(fix_p):
    assert extract_deficiency_witness(fix_p, 1) is None


def test_single_candidate_always_matches():
    p = PreferenceProfile.of([(0,), (0,), (0,)])
    assert has_fractional_perfect_matching(build_domination_graph(p, 0))


def test_cut_witness_validation(fix_t):
    with pytest.raises(ValueError, match="empty"):
        CutWitness(frozenset(), frozenset()).validate(fix_t, 2)
    with pytest.raises(ValueError, match="dominated"):
        CutWitness(frozenset({0, 1}), frozenset({1, 2})).validate(fix_t, 2)
    with pytest.raises(ValueError, match="Hall"):
        # voter 2 ranks c on top, so this cut dominates everything
        CutWitness(frozenset({2}), dominated_set(fix_t, 2, [2])).validate(fix_t, 2)


def test_hall_bruteforce_agrees_on_fixtures(fix_p, fix_t):
    for p in (fix_p, fix_t):
        for c in range(p.m):
            g = build_domination_graph(p, c)
            assert hall_check_bruteforce(g) == has_fractional_perfect_matching(g)


def test_hall_bruteforce_agrees_on_random_profiles():
    for p in random_profiles(300, seed=2024, nmax=8, mmax=5):
        for c in range(p.m):
            g = build_domination_graph(p, c)
            assert hall_check_bruteforce(g) == has_fractional_perfect_matching(g), (
                p.rankings,
                c,
            )


def test_witness_extraction_on_random_profiles():
    rng = random.Random(31)
    for p in random_profiles(200, seed=77, nmax=6, mmax=5):
        c = rng.randrange(p.m)
        w = extract_deficiency_witness(p, c)
        g = build_domination_graph(p, c)
        if has_fractional_perfect_matching(g):
            assert w is None
        else:
            w.validate(p, c)


def test_max_bipartite_matching_basics():
    assert max_bipartite_matching([]) == {}
    assert max_bipartite_matching([[0], [0]]) in ({0: 0}, {1: 0})
    complete = max_bipartite_matching([[0, 1, 2]] * 3)
    assert sorted(complete) == [0, 1, 2]
    assert sorted(complete.values()) == [0, 1, 2]
    crossed = max_bipartite_matching([[1], [0, 1]])
    assert crossed == {0: 1, 1: 0}


def test_max_bipartite_matching_respects_adjacency():
    rng = random.Random(5)
    for _ in range(100):
        left, right = rng.randint(1, 6), rng.randint(1, 6)
        adjacency = [
            [j for j in range(right) if rng.random() < 0.5] for _ in range(left)
        ]
        mu = max_bipartite_matching(adjacency)
        assert len(set(mu.values())) == len(mu)
        for i, j in mu.items():
            assert j in adjacency[i]
