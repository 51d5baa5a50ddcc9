"""Compiled trajectory loop for the pairwise sign-update dynamics.

Per-edge counts of (+,+), mixed and (-,-) third agents are kept in
``n x n`` tables and patched in O(n) after every flip, together with the
set of edges whose utility is negative. The run stops as soon as that
set is empty.
"""
import numba
import numpy as np


@numba.njit(cache=True)
def draw_pair(rng, cum):
    # inverse CDF over canonical pair order
    m = cum.shape[0]
    target = rng.random() * cum[m - 1]
    lo, hi = 0, m
    while lo < hi:
        mid = (lo + hi) // 2
        if cum[mid] <= target:
            lo = mid + 1
        else:
            hi = mid
    if lo >= m:
        lo = m - 1
    return lo


@numba.njit(cache=True)
def _utility(s, p, neg, lam, structural):
    if structural:
        return s * (p + lam - neg)
    if s > 0:
        db = p + lam
        du = neg
    else:
        db = neg
        du = p + lam
    ind = 1 if du > 0 else 0
    return db - du - lam * s * ind


@numba.njit(cache=True)
def _dissonant(a, b, c, structural):
    if a * b * c > 0:
        return 0
    if structural:
        return 1
    if a < 0 and b < 0 and c < 0:
        return 0
    return 1


@numba.njit(cache=True)
def _add_pattern(P, N, L, i, k, a, b, delta):
    # third-agent pattern (a, b) seen by edge {i, k}
    if a > 0 and b > 0:
        P[i, k] += delta
        P[k, i] += delta
    elif a < 0 and b < 0:
        L[i, k] += delta
        L[k, i] += delta
    else:
        N[i, k] += delta
        N[k, i] += delta


@numba.njit(cache=True)
def run_kernel(M, pi, pj, cum, rng, structural, max_steps, trace):
    """Advance ``M`` in place until no edge has negative utility.

    Returns ``(absorbed, steps, flips)``. ``trace[0]`` must hold the initial
    dissonance; ``trace[t]`` receives the dissonance after flip ``t``.
    """
    n = M.shape[0]
    P = np.zeros((n, n), dtype=np.int64)
    N = np.zeros((n, n), dtype=np.int64)
    L = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            p = 0
            lam = 0
            for k in range(n):
                # the zero diagonal makes k = i or k = j contribute 0 to both
                prod = M[i, k] * M[j, k]
                if prod > 0:
                    if M[i, k] > 0:
                        p += 1
                    else:
                        lam += 1
            P[i, j] = P[j, i] = p
            L[i, j] = L[j, i] = lam
            N[i, j] = N[j, i] = n - 2 - p - lam
    unhappy = np.zeros((n, n), dtype=np.bool_)
    n_unhappy = 0
    for i in range(n):
        for j in range(i + 1, n):
            if _utility(M[i, j], P[i, j], N[i, j], L[i, j], structural) < 0:
                unhappy[i, j] = True
                n_unhappy += 1

    diss = trace[0]
    steps = 0
    flips = 0
    while n_unhappy > 0 and steps < max_steps:
        e = draw_pair(rng, cum)
        i = pi[e]
        j = pj[e]
        steps += 1
        s = M[i, j]
        val = P[i, j] - N[i, j]
        if structural:
            val += L[i, j]
        if val == 0 or (val > 0) == (s > 0):
            continue
        # flip {i, j}
        before = 0
        after = 0
        for k in range(n):
            if k == i or k == j:
                continue
            before += _dissonant(s, M[i, k], M[j, k], structural)
            after += _dissonant(-s, M[i, k], M[j, k], structural)
            a = i if i < k else k
            b = k if i < k else i
            if unhappy[a, b]:
                unhappy[a, b] = False
                n_unhappy -= 1
            a = j if j < k else k
            b = k if j < k else j
            if unhappy[a, b]:
                unhappy[a, b] = False
                n_unhappy -= 1
            _add_pattern(P, N, L, i, k, s, M[j, k], -1)
            _add_pattern(P, N, L, i, k, -s, M[j, k], 1)
            _add_pattern(P, N, L, j, k, s, M[i, k], -1)
            _add_pattern(P, N, L, j, k, -s, M[i, k], 1)
        M[i, j] = -s
        M[j, i] = -s
        if unhappy[i, j]:
            unhappy[i, j] = False
            n_unhappy -= 1
        if _utility(-s, P[i, j], N[i, j], L[i, j], structural) < 0:
            unhappy[i, j] = True
            n_unhappy += 1
        for k in range(n):
            if k == i or k == j:
                continue
            a = i if i < k else k
            b = k if i < k else i
            if _utility(M[a, b], P[a, b], N[a, b], L[a, b], structural) < 0:
                unhappy[a, b] = True
                n_unhappy += 1
            a = j if j < k else k
            b = k if j < k else j
            if _utility(M[a, b], P[a, b], N[a, b], L[a, b], structural) < 0:
                unhappy[a, b] = True
                n_unhappy += 1
        flips += 1
        diss += after - before
        if flips >= trace.shape[0]:
            raise RuntimeError("more flips than the initial dissonance allows")
        trace[flips] = diss
    return n_unhappy == 0, steps, flips
