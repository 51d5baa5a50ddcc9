"""Influence dynamics: one randomly selected pair updates its sign per step."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernel
from .game import Variant, dissonance, edge_stats, is_nash
from .network import (
    NetworkError,
    SignedNetwork,
    _check_nodes,
    clustering_partition,
    num_pairs,
    pair_list,
)

STEP_FACTOR = 50


def make_rng(seed) -> np.random.Generator:
    """PCG64 generator; ``seed`` may be an int, a sequence of ints or a SeedSequence."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


class EdgeSelector:
    """Time-invariant random choice of the pair that moves next.

    Pairs are drawn by inverse CDF over the cumulative weights in
    lexicographic pair order, one ``Generator.random()`` call per draw.
    Default weights are uniform.
    """

    def __init__(self, n: int, seed=None, weights: Sequence[float] | None = None,
                 rng: np.random.Generator | None = None):
        m = num_pairs(n)
        if weights is None:
            w = np.ones(m, dtype=np.float64)
        else:
            w = np.asarray(weights, dtype=np.float64)
            if w.shape != (m,):
                raise ValueError(f"expected {m} pair weights, got shape {w.shape}")
            if not np.all(np.isfinite(w)) or np.any(w <= 0):
                raise ValueError("every pair weight must be finite and > 0")
        w.setflags(write=False)
        self.n = n
        self.weights = w
        self.rng_seed = seed
        self.rng = rng if rng is not None else make_rng(seed)
        self._cum = np.cumsum(w)
        pairs = np.array(pair_list(n), dtype=np.int64)
        self._pi = np.ascontiguousarray(pairs[:, 0])
        self._pj = np.ascontiguousarray(pairs[:, 1])

    def draw(self) -> tuple[int, int]:
        e = int(_kernel.draw_pair(self.rng, self._cum))
        return int(self._pi[e]), int(self._pj[e])


@dataclass
class TrajectoryOutcome:
    absorbed: bool
    steps_taken: int
    flips: int
    final_network: SignedNetwork
    final_cluster_count: int | None
    # initial dissonance followed by the value after each flip
    dissonance_trace: list[int] = field(default_factory=list)


def influence_value(G: SignedNetwork, i: int, j: int, variant: Variant = Variant.CLUSTERING) -> int:
    """Sum over third agents of ``x_ik * x_kj``, skipping common enemies in the clustering game."""
    _check_nodes(G, i, j)
    M = G.matrix
    total = 0
    for k in range(G.n):
        if k == i or k == j:
            continue
        xik, xkj = int(M[i, k]), int(M[k, j])
        if variant is Variant.STRUCTURAL or xik == 1 or xkj == 1:
            total += xik * xkj
    return total


def influence_update(G: SignedNetwork, i: int, j: int, variant: Variant = Variant.CLUSTERING) -> int:
    v = influence_value(G, i, j, variant)
    if v == 0:
        return G.sign(i, j)
    return 1 if v > 0 else -1


def best_response(G: SignedNetwork, i: int, j: int, variant: Variant = Variant.CLUSTERING) -> int:
    """Utility-maximizing sign for the pair, keeping the current one on ties."""
    st = edge_stats(G, i, j)
    friends = st.p_count + (st.lam if variant is Variant.STRUCTURAL else 0)
    if friends > st.n_count:
        return 1
    if friends < st.n_count:
        return -1
    return G.sign(i, j)


def step(G: SignedNetwork, selector: EdgeSelector, variant: Variant = Variant.CLUSTERING
         ) -> tuple[SignedNetwork, tuple[int, int], bool]:
    i, j = selector.draw()
    new = influence_update(G, i, j, variant)
    if new == G.sign(i, j):
        return G, (i, j), False
    return G.with_sign(i, j, new), (i, j), True


def default_max_steps(G: SignedNetwork, variant: Variant = Variant.CLUSTERING,
                      factor: int = STEP_FACTOR) -> int:
    return factor * num_pairs(G.n) * (dissonance(G, variant) + 1)


def run(G0: SignedNetwork, selector: EdgeSelector, variant: Variant = Variant.CLUSTERING,
        max_steps: int | None = None) -> TrajectoryOutcome:
    """Iterate :func:`step` until the network is a Nash network or the budget runs out."""
    if selector.n != G0.n:
        raise NetworkError(f"selector built for n={selector.n}, network has n={G0.n}")
    c0 = dissonance(G0, variant)
    if max_steps is None:
        max_steps = default_max_steps(G0, variant)
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    M = np.array(G0.matrix, dtype=np.int8)
    trace = np.empty(c0 + 1, dtype=np.int64)
    trace[0] = c0
    absorbed, steps, flips = _kernel.run_kernel(
        M, selector._pi, selector._pj, selector._cum, selector.rng,
        variant is Variant.STRUCTURAL, max_steps, trace,
    )
    final = SignedNetwork.from_matrix(M)
    part = clustering_partition(final)
    return TrajectoryOutcome(
        absorbed=bool(absorbed),
        steps_taken=int(steps),
        flips=int(flips),
        final_network=final,
        final_cluster_count=None if part is None else part.k,
        dissonance_trace=trace[: flips + 1].tolist(),
    )


def run_stepwise(G0: SignedNetwork, selector: EdgeSelector, variant: Variant = Variant.CLUSTERING,
                 max_steps: int | None = None) -> TrajectoryOutcome:
    """Uncompiled reference of :func:`run` built from :func:`step` and full rescans.

    Consumes the selector's random stream identically, so both return the
    same outcome for equal seeds. Slow; meant for cross-checking.
    """
    if max_steps is None:
        max_steps = default_max_steps(G0, variant)
    G = G0
    trace = [dissonance(G0, variant)]
    steps = flips = 0
    while not is_nash(G, variant) and steps < max_steps:
        G, _, flipped = step(G, selector, variant)
        steps += 1
        if flipped:
            flips += 1
            trace.append(dissonance(G, variant))
    part = clustering_partition(G)
    return TrajectoryOutcome(
        absorbed=is_nash(G, variant),
        steps_taken=steps,
        flips=flips,
        final_network=G,
        final_cluster_count=None if part is None else part.k,
        dissonance_trace=trace,
    )
