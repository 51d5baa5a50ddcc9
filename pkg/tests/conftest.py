import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from signedgame.network import SignedNetwork, num_pairs


def all_networks(n):
    for code in range(1 << num_pairs(n)):
        yield SignedNetwork.from_code(n, code)


def random_networks(n, count, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield SignedNetwork(n, rng.choice(np.array([-1, 1], dtype=np.int8), num_pairs(n)))


@st.composite
def networks(draw, min_n=3, max_n=12):
    n = draw(st.integers(min_n, max_n))
    signs = draw(st.lists(st.sampled_from([-1, 1]), min_size=num_pairs(n), max_size=num_pairs(n)))
    return SignedNetwork(n, signs)


@st.composite
def network_and_edge(draw, min_n=3, max_n=12):
    G = draw(networks(min_n, max_n))
    i, j = draw(st.sampled_from(list(itertools.combinations(range(G.n), 2))))
    return G, i, j


# Brute-force reference quantities, written straight from the definitions
# with plain dict lookups so they share no code with the package.

def naive_utility(G, i, j, structural=False):
    sign = {(a, b): s for a, b, s in G.edges()}
    x = lambda a, b: sign[(min(a, b), max(a, b))]
    balanced = unbalanced = common_enemies = 0
    for k in range(G.n):
        if k in (i, j):
            continue
        if x(i, j) * x(i, k) * x(j, k) > 0:
            balanced += 1
        else:
            unbalanced += 1
        if x(i, k) == -1 and x(j, k) == -1:
            common_enemies += 1
    if structural:
        return balanced - unbalanced
    return balanced - unbalanced - common_enemies * x(i, j) * (1 if unbalanced > 0 else 0)


def naive_dissonance(G, structural=False):
    sign = {(a, b): s for a, b, s in G.edges()}
    total = 0
    for a, b, c in itertools.combinations(range(G.n), 3):
        xs = (sign[(a, b)], sign[(b, c)], sign[(a, c)])
        if xs[0] * xs[1] * xs[2] < 0 and (structural or max(xs) > 0):
            total += 1
    return total


def naive_partition_exists(G):
    """Try every set partition of the nodes (small n only)."""
    def partitions(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for smaller in partitions(rest):
            for idx in range(len(smaller)):
                yield smaller[:idx] + [[first] + smaller[idx]] + smaller[idx + 1:]
            yield [[first]] + smaller

    sign = {(a, b): s for a, b, s in G.edges()}
    for part in partitions(list(range(G.n))):
        label = {v: c for c, block in enumerate(part) for v in block}
        if all((label[a] == label[b]) == (s > 0) for (a, b), s in sign.items()):
            return len(part)
    return None


@pytest.fixture
def one_triad():
    # x01 = x02 = +1, x12 = -1
    return SignedNetwork(3, [1, 1, -1])
