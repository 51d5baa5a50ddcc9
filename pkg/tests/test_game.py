from math import comb

import pytest
from hypothesis import given, settings

from conftest import all_networks, naive_dissonance, naive_utility, network_and_edge, networks
from signedgame.game import (
    EdgeStats,
    Variant,
    dissonance,
    edge_stats,
    is_efficient,
    is_nash,
    max_welfare,
    social_welfare,
    utility,
)
from signedgame.network import (
    NetworkError,
    all_negative,
    all_positive,
    clustering_partition,
    from_clusters,
    is_structurally_balanced,
    pair_list,
)
from signedgame.oracle import bell_number, paper_counterexample

C, S = Variant.CLUSTERING, Variant.STRUCTURAL


def test_edge_stats_one_triad(one_triad):
    # the positive pair {0,1}; agent 2 is a friend of 0 and an enemy of 1
    assert edge_stats(one_triad, 0, 1) == EdgeStats(
        delta_b=0, delta_u=1, delta_n=0, lam=0, p_count=0, n_count=1
    )
    assert edge_stats(one_triad, 1, 2) == EdgeStats(
        delta_b=0, delta_u=1, delta_n=0, lam=0, p_count=1, n_count=0
    )


def test_edge_stats_all_negative():
    st = edge_stats(all_negative(4), 0, 1)
    assert (st.delta_b, st.delta_u, st.delta_n, st.lam) == (0, 2, 2, 2)


def test_edge_stats_all_positive():
    st = edge_stats(all_positive(5), 0, 1)
    assert (st.delta_b, st.delta_u, st.delta_n, st.lam) == (3, 0, 0, 0)


def test_edge_stats_rejects_loop():
    with pytest.raises(NetworkError):
        edge_stats(all_positive(4), 2, 2)


@settings(max_examples=300, deadline=None)
@given(network_and_edge(max_n=20))
def test_edge_stats_invariants(case):
    G, i, j = case
    st = edge_stats(G, i, j)
    assert st.delta_b + st.delta_u == G.n - 2
    assert st.delta_n <= st.delta_u
    assert st.p_count + st.n_count + st.lam == G.n - 2
    if G.sign(i, j) < 0:
        assert st.lam == st.delta_n
    else:
        assert st.delta_n == 0


@pytest.mark.parametrize("n", [3, 4, 5])
def test_category_partition_exhaustive(n):
    for G in all_networks(n):
        for i, j in pair_list(n):
            st = edge_stats(G, i, j)
            assert st.p_count + st.n_count + st.lam == n - 2


def test_utility_examples(one_triad):
    assert utility(one_triad, 1, 2) == -1
    assert utility(one_triad, 0, 1) == -1
    # 0 - 2 - 2 * (-1) * 1
    assert utility(all_negative(4), 0, 1) == 0
    for n in (3, 6, 9):
        G = all_positive(n)
        assert all(utility(G, i, j) == n - 2 for i, j in pair_list(n))
        assert all(utility(G, i, j, S) == n - 2 for i, j in pair_list(n))


def test_structural_utility_drops_common_enemy_term():
    assert utility(all_negative(4), 0, 1, S) == -2


@settings(max_examples=300, deadline=None)
@given(network_and_edge(max_n=14))
def test_utility_matches_brute_force(case):
    G, i, j = case
    assert utility(G, i, j) == naive_utility(G, i, j)
    assert utility(G, i, j, S) == naive_utility(G, i, j, structural=True)
    assert -(G.n - 2) <= utility(G, i, j) <= G.n - 2


def test_dissonance_examples(one_triad):
    assert dissonance(all_negative(5), C) == 0
    assert dissonance(all_negative(5), S) == comb(5, 3)
    assert dissonance(one_triad, C) == dissonance(one_triad, S) == 1
    assert dissonance(all_positive(7), C) == dissonance(all_positive(7), S) == 0


@settings(max_examples=200, deadline=None)
@given(networks(max_n=12))
def test_dissonance_matches_brute_force(G):
    assert dissonance(G, C) == naive_dissonance(G)
    assert dissonance(G, S) == naive_dissonance(G, structural=True)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_zero_dissonance_equivalences(n):
    for G in all_networks(n):
        assert (dissonance(G, C) == 0) == (clustering_partition(G) is not None)
        assert (dissonance(G, S) == 0) == is_structurally_balanced(G)


def test_nash_examples(one_triad):
    assert not is_nash(one_triad)
    G = paper_counterexample()
    assert is_nash(G)
    assert clustering_partition(G) is None
    # the first negative pair sits exactly at zero utility
    assert utility(G, 0, 1) == 0


def _all_partitions(n):
    def rec(v, labels, k):
        if v == n:
            yield tuple(labels)
            return
        for c in range(k + 1):
            yield from rec(v + 1, labels + [c], max(k, c + 1))
    yield from rec(0, [], 0)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_clustering_balanced_networks_are_nash(n):
    parts = list(_all_partitions(n))
    assert len(parts) == bell_number(n)
    for labels in parts:
        G = from_clusters(labels)
        assert is_nash(G, C)
        assert all(utility(G, i, j) >= 0 for i, j in pair_list(n))


def test_welfare_examples():
    for n in (3, 5, 8):
        assert social_welfare(all_positive(n)) == comb(n, 2) * (n - 2) == max_welfare(n)
        assert social_welfare(all_negative(n)) == 0
    assert social_welfare(all_positive(5)) == 30


def test_efficiency_examples():
    assert is_efficient(all_positive(6))
    assert not is_efficient(all_negative(6))
    # two factions {1,2,3}/{4,5}: every triad balanced, every edge utility n - 2
    two = from_clusters([0, 0, 0, 1, 1])
    assert social_welfare(two) == 30
    assert is_efficient(two)
    assert not is_efficient(from_clusters([0, 0, 1, 1, 2]))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_welfare_maximizers_are_structural(n):
    best = max(social_welfare(G) for G in all_networks(n))
    assert best == comb(n, 2) * (n - 2)
    maximizers = [G for G in all_networks(n) if social_welfare(G) == best]
    assert maximizers and all(is_structurally_balanced(G) and is_nash(G) for G in maximizers)
    assert all(is_efficient(G) for G in maximizers)


def test_variant_parse():
    assert Variant.parse("Structural") is S
    assert Variant.parse(C) is C
    with pytest.raises(ValueError):
        Variant.parse("heider")
