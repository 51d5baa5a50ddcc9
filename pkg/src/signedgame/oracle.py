"""Exhaustive enumeration of every signed complete network on a few nodes.

Each network is a ``C(n,2)``-bit integer (bit ``e`` set means pair ``e``
is positive). Game quantities are recomputed here in batch with numpy from
triad sign products, independently of :mod:`signedgame.game`; balance is
detected with the positive-component partition of :mod:`signedgame.network`.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from . import game
from .game import Variant
from .network import (
    NetworkError,
    SignedNetwork,
    clustering_partition,
    num_pairs,
    pair_index,
)

log = logging.getLogger(__name__)

MAX_N = 6
OVERRIDE_MAX_N = 7
_BATCH = 4096

# 0-based pairs set negative in the all-positive 6-node network
COUNTEREXAMPLE_NEGATIVE_PAIRS = ((0, 1), (1, 2), (2, 4), (0, 4))


def paper_counterexample() -> SignedNetwork:
    signs = np.ones(num_pairs(6), dtype=np.int8)
    for i, j in COUNTEREXAMPLE_NEGATIVE_PAIRS:
        signs[pair_index(6, i, j)] = -1
    return SignedNetwork(6, signs)


def bell_number(n: int) -> int:
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[-1]


def integer_partitions(n: int) -> int:
    ways = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            ways[total] += ways[total - part]
    return ways[n]


def isomorphism_class_count(networks) -> int:
    """Number of relabelling classes among clustering-balanced networks.

    Two balanced complete networks are relabellings of each other exactly
    when their multisets of cluster sizes coincide.
    """
    shapes = set()
    for G in networks:
        part = clustering_partition(G)
        if part is None:
            raise NetworkError(f"not clustering-balanced: {G!r}")
        shapes.add(part.sizes())
    return len(shapes)


def _decode(n: int, codes: np.ndarray) -> np.ndarray:
    m = num_pairs(n)
    bits = (codes[:, None] >> np.arange(m, dtype=np.int64)) & 1
    return (2 * bits - 1).astype(np.int8)


def _batch_quantities(n: int, signs: np.ndarray, variant: Variant) -> dict[str, np.ndarray]:
    """Per-network booleans and totals for a ``(B, C(n,2))`` batch of sign vectors."""
    B = signs.shape[0]
    iu = np.triu_indices(n, k=1)
    M = np.zeros((B, n, n), dtype=np.int64)
    M[:, iu[0], iu[1]] = signs
    M[:, iu[1], iu[0]] = signs
    neg = (M < 0).astype(np.int64)
    # sum over third agents of x_ik x_kj; the zero diagonal drops k in {i, j}
    S2 = M @ M
    lam = neg @ neg.transpose(0, 2, 1)
    db = ((n - 2) + M * S2) // 2
    du = (n - 2) - db
    if variant is Variant.STRUCTURAL:
        u = db - du
        u_flip = du - db
        influence = S2
    else:
        u = db - du - lam * M * (du > 0)
        u_flip = du - db + lam * M * (db > 0)
        influence = S2 - lam
    u = u[:, iu[0], iu[1]]
    u_flip = u_flip[:, iu[0], iu[1]]
    influence = influence[:, iu[0], iu[1]]
    s = signs.astype(np.int64)

    utility_nash = np.all(u >= 0, axis=1)
    brd_nash = ~np.any((u != 0) & (u_flip > u), axis=1)
    strict_nash = ~np.any(u_flip > u, axis=1)
    fixed = np.all((influence == 0) | (np.sign(influence) == s), axis=1)

    tri = np.array([
        (pair_index(n, a, b), pair_index(n, b, c), pair_index(n, a, c))
        for a, b, c in combinations(range(n), 3)
    ])
    x, y, z = s[:, tri[:, 0]], s[:, tri[:, 1]], s[:, tri[:, 2]]
    unbalanced = x * y * z < 0
    neutral = (x < 0) & (y < 0) & (z < 0)
    return {
        "utility_nash": utility_nash,
        "brd_nash": brd_nash,
        "strict_nash": strict_nash,
        "fixed": fixed,
        "welfare": u.sum(axis=1),
        "c_clustering": (unbalanced & ~neutral).sum(axis=1),
        "c_structural": unbalanced.sum(axis=1),
    }


def _first(codes: np.ndarray, mask: np.ndarray) -> int | None:
    hits = codes[mask]
    return int(hits[0]) if hits.size else None


def _min_witness(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _scan(n: int, variant: Variant, start: int, stop: int, scalar_stride: int) -> dict:
    """Tally one contiguous code range. Results merge by :func:`_merge`."""
    t = {
        "total": 0, "nash": 0, "clustering_balanced": 0, "structurally_balanced": 0,
        "nash_not_balanced": 0, "strict_nash": 0, "fixed": 0,
        "max_welfare": None, "maximizers": 0, "maximizers_not_structural": 0,
        "maximizers_not_nash": 0, "shapes": set(),
        "mismatch": {}, "witness": {}, "scalar_checked": 0,
    }

    def mismatch(name, codes, mask):
        t["mismatch"][name] = t["mismatch"].get(name, 0) + int(mask.sum())
        t["witness"][name] = _min_witness(t["witness"].get(name), _first(codes, mask))

    for lo in range(start, stop, _BATCH):
        codes = np.arange(lo, min(stop, lo + _BATCH), dtype=np.int64)
        signs = _decode(n, codes)
        q = _batch_quantities(n, signs, variant)
        balanced = np.zeros(codes.size, dtype=bool)
        structural = np.zeros(codes.size, dtype=bool)
        for r, row in enumerate(signs):
            part = clustering_partition(SignedNetwork(n, row))
            if part is not None:
                balanced[r] = True
                structural[r] = part.k <= 2
                t["shapes"].add(part.sizes())
        nash = q["utility_nash"]
        target = structural if variant is Variant.STRUCTURAL else balanced

        t["total"] += codes.size
        t["nash"] += int(nash.sum())
        t["clustering_balanced"] += int(balanced.sum())
        t["structurally_balanced"] += int(structural.sum())
        t["nash_not_balanced"] += int((nash & ~target).sum())
        t["strict_nash"] += int(q["strict_nash"].sum())
        t["fixed"] += int(q["fixed"].sum())

        mismatch("component_vs_triad_clustering", codes, balanced != (q["c_clustering"] == 0))
        mismatch("component_vs_triad_structural", codes, structural != (q["c_structural"] == 0))
        mismatch("utility_vs_best_response_deviation", codes, nash != q["brd_nash"])
        mismatch("strict_deviation_vs_utility", codes, nash != q["strict_nash"])
        mismatch("balanced_not_nash", codes, target & ~nash)
        mismatch("nash_not_balanced", codes, nash & ~target)
        mismatch("fixed_point_vs_nash", codes, nash != q["fixed"])

        w = q["welfare"]
        wmax = int(w.max())
        if t["max_welfare"] is None or wmax > t["max_welfare"]:
            t["max_welfare"] = wmax
            t["maximizers"] = t["maximizers_not_structural"] = t["maximizers_not_nash"] = 0
        if wmax == t["max_welfare"]:
            top = w == wmax
            t["maximizers"] += int(top.sum())
            t["maximizers_not_structural"] += int((top & ~structural).sum())
            t["maximizers_not_nash"] += int((top & ~nash).sum())

        # cross-check the scalar game module on a deterministic subset
        bad = np.zeros(codes.size, dtype=bool)
        for r in range(0, codes.size):
            if (int(codes[r]) % scalar_stride) != 0:
                continue
            G = SignedNetwork(n, signs[r])
            t["scalar_checked"] += 1
            bad[r] = (
                game.is_nash(G, variant) != bool(nash[r])
                or game.social_welfare(G, variant) != int(w[r])
                or game.dissonance(G, Variant.CLUSTERING) != int(q["c_clustering"][r])
                or game.dissonance(G, Variant.STRUCTURAL) != int(q["c_structural"][r])
            )
        mismatch("scalar_vs_batch", codes, bad)
    return t


def _merge(parts: list[dict]) -> dict:
    out = parts[0]
    for p in parts[1:]:
        for key in ("total", "nash", "clustering_balanced", "structurally_balanced",
                    "nash_not_balanced", "strict_nash", "fixed", "scalar_checked"):
            out[key] += p[key]
        if p["max_welfare"] > out["max_welfare"]:
            for key in ("max_welfare", "maximizers", "maximizers_not_structural",
                        "maximizers_not_nash"):
                out[key] = p[key]
        elif p["max_welfare"] == out["max_welfare"]:
            for key in ("maximizers", "maximizers_not_structural", "maximizers_not_nash"):
                out[key] += p[key]
        out["shapes"] |= p["shapes"]
        for name, cnt in p["mismatch"].items():
            out["mismatch"][name] = out["mismatch"].get(name, 0) + cnt
            out["witness"][name] = _min_witness(out["witness"].get(name), p["witness"][name])
    return out


@dataclass
class EnumerationReport:
    n: int
    variant: str
    total_networks: int
    nash_count: int
    clustering_balanced_count: int
    structurally_balanced_count: int
    nash_not_balanced_count: int
    balanced_isomorphism_classes: int
    max_welfare: int
    welfare_maximizer_count: int
    welfare_maximizers_all_structural: bool
    welfare_maximizers_all_nash: bool
    fixed_point_count: int
    strict_deviation_nash_count: int
    scalar_crosschecked: int
    mismatches: dict[str, int] = field(default_factory=dict)
    witnesses: dict[str, int | None] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def _check_n(n: int, allow_n7: bool) -> None:
    hi = OVERRIDE_MAX_N if allow_n7 else MAX_N
    if not 3 <= n <= hi:
        hint = "" if allow_n7 or n != OVERRIDE_MAX_N else " (n=7 needs the override flag)"
        raise ValueError(f"n must be in 3..{hi}, got {n}{hint}")


def enumerate_all(n: int, variant: Variant = Variant.CLUSTERING, *, allow_n7: bool = False,
                  jobs: int = 1, scalar_stride: int | None = None) -> EnumerationReport:
    """Classify all ``2**C(n,2)`` networks on ``n`` nodes.

    ``scalar_stride`` sets how often the scalar game module is re-run as a
    cross-check (every code divisible by it); by default every network
    up to ``n = 5`` and every 64th beyond.
    """
    _check_n(n, allow_n7)
    total = 1 << num_pairs(n)
    if scalar_stride is None:
        scalar_stride = 1 if n <= 5 else 64
    n_chunks = max(1, min(jobs, total // _BATCH)) if jobs > 1 else 1
    bounds = [total * c // n_chunks for c in range(n_chunks + 1)]
    args = [(n, variant, bounds[c], bounds[c + 1], scalar_stride) for c in range(n_chunks)]
    if n_chunks == 1:
        parts = [_scan(*args[0])]
    else:
        with ProcessPoolExecutor(max_workers=n_chunks) as pool:
            parts = list(pool.map(_scan, *zip(*args)))
    t = _merge(parts)
    if n >= OVERRIDE_MAX_N:
        log.info("enumerated %d networks for n=%d", t["total"], n)
    return EnumerationReport(
        n=n,
        variant=variant.value,
        total_networks=t["total"],
        nash_count=t["nash"],
        clustering_balanced_count=t["clustering_balanced"],
        structurally_balanced_count=t["structurally_balanced"],
        nash_not_balanced_count=t["nash_not_balanced"],
        balanced_isomorphism_classes=len(t["shapes"]),
        max_welfare=t["max_welfare"],
        welfare_maximizer_count=t["maximizers"],
        welfare_maximizers_all_structural=t["maximizers_not_structural"] == 0,
        welfare_maximizers_all_nash=t["maximizers_not_nash"] == 0,
        fixed_point_count=t["fixed"],
        strict_deviation_nash_count=t["strict_nash"],
        scalar_crosschecked=t["scalar_checked"],
        mismatches=dict(sorted(t["mismatch"].items())),
        witnesses=dict(sorted(t["witness"].items())),
    )


@dataclass
class Check:
    n: int
    name: str
    passed: bool
    detail: str
    witness: int | None = None


@dataclass
class VerificationReport:
    variant: str
    n_max: int
    checks: list[Check]
    enumerations: list[EnumerationReport]
    notes: list[str]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "n_max": self.n_max,
            "passed": self.passed,
            "checks": [asdict(c) for c in self.checks],
            "enumerations": [e.to_dict() for e in self.enumerations],
            "notes": self.notes,
        }

    def to_text(self) -> str:
        lines = [f"verify variant={self.variant} n_max={self.n_max}"]
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            extra = "" if c.witness is None else f" [witness code {c.witness}]"
            lines.append(f"{mark}  n={c.n}  {c.name}: {c.detail}{extra}")
        lines.extend(f"note: {s}" for s in self.notes)
        lines.append("RESULT: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"


def _checks_for(rep: EnumerationReport, variant: Variant) -> tuple[list[Check], list[str]]:
    n = rep.n
    mm, wit = rep.mismatches, rep.witnesses
    checks: list[Check] = []
    notes: list[str] = []

    def add(name, ok, detail, key=None):
        checks.append(Check(n, name, bool(ok), detail, None if ok or key is None else wit.get(key)))

    bell = bell_number(n)
    add("bell-count", rep.clustering_balanced_count == bell,
        f"clustering-balanced {rep.clustering_balanced_count}, Bell({n}) = {bell}")
    add("dual-balance-detectors",
        mm["component_vs_triad_clustering"] == 0 and mm["component_vs_triad_structural"] == 0,
        "component partition agrees with the triad census on every network",
        "component_vs_triad_clustering")
    add("scalar-vs-batch", mm["scalar_vs_batch"] == 0,
        f"game module agrees with batch recomputation on {rep.scalar_crosschecked} networks",
        "scalar_vs_batch")
    add("nash-characterization", mm["utility_vs_best_response_deviation"] == 0,
        f"{rep.nash_count} networks with all utilities >= 0; identical set under "
        "best-response deviation testing", "utility_vs_best_response_deviation")
    if mm["strict_deviation_vs_utility"]:
        notes.append(
            f"n={n}: {mm['strict_deviation_vs_utility']} networks with all utilities >= 0 admit a "
            f"strictly improving flip from a zero-utility edge (first: code "
            f"{wit['strict_deviation_vs_utility']}); best response keeps zero-utility edges"
        )
    target = "structurally balanced" if variant is Variant.STRUCTURAL else "clustering-balanced"
    add("balanced-implies-nash", mm["balanced_not_nash"] == 0,
        f"every {target} network is Nash", "balanced_not_nash")
    if n <= 5:
        add("nash-equals-balanced", mm["nash_not_balanced"] == 0,
            f"Nash set ({rep.nash_count}) equals {target} set", "nash_not_balanced")
    elif variant is Variant.CLUSTERING:
        add("nash-exceeds-balanced", rep.nash_not_balanced_count >= 1,
            f"{rep.nash_not_balanced_count} Nash networks without clustering balance")
        if n == 6:
            G = paper_counterexample()
            ok = game.is_nash(G) and clustering_partition(G) is None
            checks.append(Check(n, "counterexample", ok,
                                "x01=x12=x24=x04=-1 network is Nash and not clustering-balanced"))
    else:
        notes.append(f"n={n}: {rep.nash_not_balanced_count} Nash networks without structural balance")
    best = comb(n, 2) * (n - 2)
    add("efficiency", rep.max_welfare == best and rep.welfare_maximizers_all_structural
        and rep.welfare_maximizers_all_nash,
        f"max welfare {rep.max_welfare} (expected {best}); {rep.welfare_maximizer_count} maximizers, "
        f"all structurally balanced and Nash")
    add("fixed-points", mm["fixed_point_vs_nash"] == 0,
        f"{rep.fixed_point_count} fixed points of the update rule = Nash set", "fixed_point_vs_nash")
    parts = integer_partitions(n)
    add("isomorphism-classes", rep.balanced_isomorphism_classes == parts,
        f"{rep.balanced_isomorphism_classes} cluster-size shapes, p({n}) = {parts}")
    return checks, notes


def verify_theorems(n_max: int, variant: Variant = Variant.CLUSTERING, *,
                    allow_n7: bool = False, jobs: int = 1) -> VerificationReport:
    _check_n(n_max, allow_n7)
    checks: list[Check] = []
    notes: list[str] = []
    reports = []
    for n in range(3, n_max + 1):
        rep = enumerate_all(n, variant, allow_n7=allow_n7, jobs=jobs)
        reports.append(rep)
        c, nt = _checks_for(rep, variant)
        checks.extend(c)
        notes.extend(nt)
    return VerificationReport(variant.value, n_max, checks, reports, notes)
