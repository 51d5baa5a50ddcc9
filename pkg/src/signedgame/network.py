"""Complete signed appraisal networks, triads and clustering balance."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Mapping

import numpy as np


class NetworkError(ValueError):
    """Raised for invalid networks or malformed network documents."""


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(n: int, i: int, j: int) -> int:
    """Position of the unordered pair {i, j} in lexicographic pair order."""
    if i == j:
        raise NetworkError(f"self-loop {{{i},{j}}} is not an edge")
    if i > j:
        i, j = j, i
    if i < 0 or j >= n:
        raise NetworkError(f"pair {{{i},{j}}} out of range for n={n}")
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


def pair_list(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


class TriadClass(enum.Enum):
    BALANCED = "balanced"
    UNBALANCED_NON_NEUTRAL = "unbalanced-non-neutral"
    NEUTRAL = "neutral"


def triad_class_of_signs(a: int, b: int, c: int) -> TriadClass:
    if a * b * c > 0:
        return TriadClass.BALANCED
    if a < 0 and b < 0 and c < 0:
        return TriadClass.NEUTRAL
    return TriadClass.UNBALANCED_NON_NEUTRAL


class SignedNetwork:
    """Complete undirected signed graph on ``n`` nodes labelled ``0..n-1``.

    Signs are stored once per unordered pair in lexicographic pair order,
    so symmetry holds by construction. Instances are treated as immutable;
    use :meth:`with_sign` / :meth:`flipped` to derive new networks.
    """

    __slots__ = ("n", "_signs", "_matrix")

    def __init__(self, n: int, signs: Iterable[int]):
        arr = np.array(list(signs) if not isinstance(signs, np.ndarray) else signs, dtype=np.int8)
        if n < 3:
            raise NetworkError(f"need at least 3 nodes, got n={n}")
        if arr.ndim != 1 or arr.size != num_pairs(n):
            raise NetworkError(
                f"incomplete edge set: expected {num_pairs(n)} signs, got {arr.size}"
            )
        if not np.all((arr == 1) | (arr == -1)):
            raise NetworkError("every sign must be -1 or +1")
        arr.setflags(write=False)
        self.n = n
        self._signs = arr
        self._matrix = None

    @property
    def signs(self) -> np.ndarray:
        """Read-only sign vector in lexicographic pair order."""
        return self._signs

    @property
    def matrix(self) -> np.ndarray:
        """Symmetric ``n x n`` int8 sign matrix with a zero diagonal (read-only)."""
        if self._matrix is None:
            m = np.zeros((self.n, self.n), dtype=np.int8)
            iu = np.triu_indices(self.n, k=1)
            m[iu] = self._signs
            m.T[iu] = self._signs
            m.setflags(write=False)
            self._matrix = m
        return self._matrix

    def sign(self, i: int, j: int) -> int:
        return int(self._signs[pair_index(self.n, i, j)])

    def edges(self) -> Iterator[tuple[int, int, int]]:
        for (i, j), s in zip(pair_list(self.n), self._signs.tolist()):
            yield i, j, s

    def with_sign(self, i: int, j: int, s: int) -> "SignedNetwork":
        arr = self._signs.copy()
        arr[pair_index(self.n, i, j)] = s
        return SignedNetwork(self.n, arr)

    def flipped(self, i: int, j: int) -> "SignedNetwork":
        return self.with_sign(i, j, -self.sign(i, j))

    def to_code(self) -> int:
        """Bit-packed form: bit ``e`` is set iff pair ``e`` is positive."""
        code = 0
        for e, s in enumerate(self._signs.tolist()):
            if s > 0:
                code |= 1 << e
        return code

    @classmethod
    def from_code(cls, n: int, code: int) -> "SignedNetwork":
        m = num_pairs(n)
        if not 0 <= code < (1 << m):
            raise NetworkError(f"code {code} out of range for n={n}")
        return cls(n, [1 if (code >> e) & 1 else -1 for e in range(m)])

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "SignedNetwork":
        matrix = np.asarray(matrix)
        n = matrix.shape[0]
        if matrix.shape != (n, n) or not np.array_equal(matrix, matrix.T):
            raise NetworkError("sign matrix must be square and symmetric")
        return cls(n, matrix[np.triu_indices(n, k=1)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignedNetwork):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._signs, other._signs)

    def __hash__(self) -> int:
        return hash((self.n, self._signs.tobytes()))

    def __repr__(self) -> str:
        negs = [(i, j) for i, j, s in self.edges() if s < 0]
        return f"SignedNetwork(n={self.n}, negative={negs})"


def new_complete(n: int, signs: Mapping[tuple[int, int], int]) -> SignedNetwork:
    """Build a network from a ``{(i, j): sign}`` mapping covering every pair once."""
    if n < 3:
        raise NetworkError(f"need at least 3 nodes, got n={n}")
    arr = np.zeros(num_pairs(n), dtype=np.int8)
    seen = set()
    for (i, j), s in signs.items():
        idx = pair_index(n, i, j)
        if idx in seen:
            raise NetworkError(f"duplicate pair {{{i},{j}}}")
        seen.add(idx)
        if s not in (-1, 1):
            raise NetworkError(f"invalid sign {s!r} on pair {{{i},{j}}}")
        arr[idx] = s
    if len(seen) != arr.size:
        raise NetworkError(
            f"incomplete edge set: {arr.size - len(seen)} of {arr.size} pairs missing"
        )
    return SignedNetwork(n, arr)


def all_positive(n: int) -> SignedNetwork:
    return SignedNetwork(n, np.ones(num_pairs(n), dtype=np.int8))


def all_negative(n: int) -> SignedNetwork:
    return SignedNetwork(n, -np.ones(num_pairs(n), dtype=np.int8))


def from_clusters(assignment: Iterable[int]) -> SignedNetwork:
    """Clustering-balanced network induced by a node -> cluster assignment."""
    labels = list(assignment)
    n = len(labels)
    return SignedNetwork(n, [1 if labels[i] == labels[j] else -1 for i, j in pair_list(n)])


def _check_nodes(G: SignedNetwork, *nodes: int) -> None:
    if len(set(nodes)) != len(nodes):
        raise NetworkError(f"nodes must be distinct, got {nodes}")
    for v in nodes:
        if not 0 <= v < G.n:
            raise NetworkError(f"node {v} out of range for n={G.n}")


def classify_triad(G: SignedNetwork, i: int, j: int, k: int) -> TriadClass:
    _check_nodes(G, i, j, k)
    return triad_class_of_signs(G.sign(i, j), G.sign(j, k), G.sign(i, k))


def triads_containing(G: SignedNetwork, i: int, j: int) -> Iterator[tuple[int, int, int]]:
    """Yield the ``n - 2`` sorted triples that contain the pair ``{i, j}``."""
    _check_nodes(G, i, j)
    for k in range(G.n):
        if k != i and k != j:
            yield tuple(sorted((i, j, k)))


@lru_cache(maxsize=None)
def _triad_pair_indices(n: int) -> np.ndarray:
    """``(C(n,3), 3)`` positions of the pairs {i,j}, {j,k}, {i,k} of each triple."""
    return np.array(
        [(pair_index(n, i, j), pair_index(n, j, k), pair_index(n, i, k))
         for i, j, k in combinations(range(n), 3)],
        dtype=np.int64,
    ).reshape(-1, 3)


def triad_census(G: SignedNetwork) -> dict[TriadClass, int]:
    idx = _triad_pair_indices(G.n)
    s = G.signs
    a, b, c = s[idx[:, 0]], s[idx[:, 1]], s[idx[:, 2]]
    negative = (a * b * c) < 0
    neutral = int(np.count_nonzero((a < 0) & (b < 0) & (c < 0)))
    unbalanced = int(np.count_nonzero(negative))
    return {
        TriadClass.BALANCED: idx.shape[0] - unbalanced,
        TriadClass.UNBALANCED_NON_NEUTRAL: unbalanced - neutral,
        TriadClass.NEUTRAL: neutral,
    }


@dataclass(frozen=True)
class Partition:
    """Node -> cluster assignment; clusters are numbered by their smallest node."""

    assignment: tuple[int, ...]

    def __post_init__(self):
        labels = self.assignment
        if not labels:
            raise NetworkError("empty partition")
        # contiguous from 0 and first-appearance ordered
        nxt = 0
        for c in labels:
            if c > nxt or c < 0:
                raise NetworkError(f"cluster indices not canonical: {labels}")
            if c == nxt:
                nxt += 1

    @property
    def k(self) -> int:
        return max(self.assignment) + 1

    def clusters(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for v, c in enumerate(self.assignment):
            out[c].append(v)
        return out

    def sizes(self) -> tuple[int, ...]:
        """Cluster sizes in non-increasing order."""
        return tuple(sorted((len(c) for c in self.clusters()), reverse=True))


class _DisjointSet:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller label as root
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def clustering_partition(G: SignedNetwork) -> Partition | None:
    """Factions witnessing clustering balance, or ``None`` if there are none.

    Clusters are the connected components of the positive-edge subgraph;
    the result is kept only if every intra-cluster edge is positive and
    every inter-cluster edge negative.
    """
    ds = _DisjointSet(G.n)
    edges = list(G.edges())
    for i, j, s in edges:
        if s > 0:
            ds.union(i, j)
    roots = [ds.find(v) for v in range(G.n)]
    for i, j, s in edges:
        if (roots[i] == roots[j]) != (s > 0):
            return None
    relabel: dict[int, int] = {}
    for r in roots:
        relabel.setdefault(r, len(relabel))
    return Partition(tuple(relabel[r] for r in roots))


def has_clustering_balance_by_triads(G: SignedNetwork) -> bool:
    """Triad-census detector: no unbalanced non-neutral triad."""
    return triad_census(G)[TriadClass.UNBALANCED_NON_NEUTRAL] == 0


def is_structurally_balanced(G: SignedNetwork) -> bool:
    part = clustering_partition(G)
    return part is not None and part.k <= 2


def is_structurally_balanced_by_triads(G: SignedNetwork) -> bool:
    census = triad_census(G)
    return census[TriadClass.BALANCED] == sum(census.values())


# -- serialization ---------------------------------------------------------

def serialize(G: SignedNetwork) -> str:
    """Canonical JSON document: ``n`` plus every pair as ``[i, j, sign]``."""
    lines = [f"    [{i}, {j}, {s}]" for i, j, s in G.edges()]
    return '{\n  "n": %d,\n  "edges": [\n%s\n  ]\n}\n' % (G.n, ",\n".join(lines))


def network_from_document(doc: object) -> SignedNetwork:
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise NetworkError("network document needs fields 'n' and 'edges'")
    n, raw = doc["n"], doc["edges"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise NetworkError("'n' must be an integer")
    if not isinstance(raw, list):
        raise NetworkError("'edges' must be a list")
    triples = []
    for item in raw:
        if (
            not isinstance(item, list)
            or len(item) != 3
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in item)
        ):
            raise NetworkError(f"edge entries must be [i, j, s] integers, got {item!r}")
        triples.append(tuple(item))
    labels = sorted({v for i, j, _ in triples for v in (i, j)})
    if labels and labels[0] < 0:
        raise NetworkError("node labels must be >= 0")
    if len(labels) != n:
        raise NetworkError(f"document declares n={n} but uses {len(labels)} distinct labels")
    relabel = {v: idx for idx, v in enumerate(labels)}
    signs = {}
    for i, j, s in triples:
        key = tuple(sorted((relabel[i], relabel[j])))
        if key in signs:
            raise NetworkError(f"duplicate pair {{{i},{j}}}")
        signs[key] = s
    return new_complete(n, signs)


def deserialize(text: str) -> SignedNetwork:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkError(f"malformed network document: {exc}") from None
    return network_from_document(doc)
