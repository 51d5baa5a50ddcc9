"""Static game quantities: per-edge triad statistics, utilities, welfare, Nash tests.

All quantities are integer counts. ``Variant.STRUCTURAL`` is the
four-rule game: utility is balanced minus unbalanced triads and the
dissonance counts every unbalanced triad.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb

from .network import (
    SignedNetwork,
    TriadClass,
    _check_nodes,
    triad_census,
    triad_class_of_signs,
)


class Variant(enum.Enum):
    CLUSTERING = "clustering"
    STRUCTURAL = "structural"

    @classmethod
    def parse(cls, value: "str | Variant") -> "Variant":
        if isinstance(value, Variant):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown variant {value!r}; expected clustering or structural") from None


@dataclass(frozen=True)
class EdgeStats:
    """Counts over the ``n - 2`` triads through one edge.

    ``p_count``/``n_count``/``lam`` split the third agents by the signs
    they hold towards both endpoints: (+,+), mixed, and (-,-).
    """

    delta_b: int
    delta_u: int
    delta_n: int
    lam: int
    p_count: int
    n_count: int


def edge_stats(G: SignedNetwork, i: int, j: int) -> EdgeStats:
    _check_nodes(G, i, j)
    M = G.matrix
    sij = int(M[i, j])
    db = du = dn = lam = p = neg = 0
    for k in range(G.n):
        if k == i or k == j:
            continue
        sik, sjk = int(M[i, k]), int(M[j, k])
        cls = triad_class_of_signs(sij, sik, sjk)
        if cls is TriadClass.BALANCED:
            db += 1
        else:
            du += 1
            if cls is TriadClass.NEUTRAL:
                dn += 1
        if sik > 0 and sjk > 0:
            p += 1
        elif sik < 0 and sjk < 0:
            lam += 1
        else:
            neg += 1
    return EdgeStats(db, du, dn, lam, p, neg)


def utility_from_stats(stats: EdgeStats, sign: int, variant: Variant = Variant.CLUSTERING) -> int:
    if variant is Variant.STRUCTURAL:
        return stats.delta_b - stats.delta_u
    indicator = 1 if stats.delta_u > 0 else 0
    return stats.delta_b - stats.delta_u - stats.lam * sign * indicator


def utility(G: SignedNetwork, i: int, j: int, variant: Variant = Variant.CLUSTERING) -> int:
    return utility_from_stats(edge_stats(G, i, j), G.sign(i, j), variant)


def dissonance(G: SignedNetwork, variant: Variant = Variant.CLUSTERING) -> int:
    census = triad_census(G)
    if variant is Variant.STRUCTURAL:
        return census[TriadClass.UNBALANCED_NON_NEUTRAL] + census[TriadClass.NEUTRAL]
    return census[TriadClass.UNBALANCED_NON_NEUTRAL]


def utilities(G: SignedNetwork, variant: Variant = Variant.CLUSTERING) -> dict[tuple[int, int], int]:
    return {(i, j): utility(G, i, j, variant) for i, j, _ in G.edges()}


def is_nash(G: SignedNetwork, variant: Variant = Variant.CLUSTERING) -> bool:
    """Every player has non-negative utility (no profitable unilateral flip)."""
    return all(utility(G, i, j, variant) >= 0 for i, j, _ in G.edges())


def social_welfare(G: SignedNetwork, variant: Variant = Variant.CLUSTERING) -> int:
    return sum(utilities(G, variant).values())


def max_welfare(n: int) -> int:
    return comb(n, 2) * (n - 2)


def is_efficient(G: SignedNetwork, variant: Variant = Variant.CLUSTERING) -> bool:
    return social_welfare(G, variant) == max_welfare(G.n)
