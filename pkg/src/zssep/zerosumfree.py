"""Exact search for long zero-sum-free sequences.

D(G) - 1 is the maximal length of a zero-sum-free sequence over G, and a
maximal-length atom is any such sequence followed by minus its sum.  The
search state is the set X of nonempty subsequence sums, kept as a bitmask:

* g may be appended iff g != 0 and -g is not in X;
* the new state is X | {g} | (X + g);
* appending always adds the new total sum to X (it was not a subsequence
  sum before, otherwise the extended sequence would contain a zero sum), so
  at most |G| - 1 - |X| further terms fit.

Which extensions succeed depends only on X, so failed states are memoised
under a canonical representative of their orbit under a group of
automorphisms together with the depth at which they failed.

Groups with |G| <= 64 run in a numba kernel over uint64 masks; larger
groups fall back to the identical algorithm on Python ints.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numba import njit, types
from numba.typed import Dict

from .group import Group, automorphism_permutations, coordinate_permutations, d_star

log = logging.getLogger(__name__)

AUTOMORPHISM_LIMIT = 20_000


@dataclass(frozen=True)
class ZsfSearchResult:
    group: Group
    length: int
    witness: tuple[tuple[int, ...], ...]
    nodes: int


# -- numba kernel -------------------------------------------------------------

@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - np.uint64(1)
        c += 1
    return c


@njit(cache=True)
def _translate(X, g, low, shl, shr, full):
    for i in range(low.shape[1]):
        s = shl[g, i]
        if s != 0:
            m = low[g, i]
            X = ((X & m) << np.uint64(s)) | ((X & (~m & full)) >> np.uint64(shr[g, i]))
    return X


@njit(cache=True)
def _canon(X, perms, bits):
    n = 0
    for i in range(perms.shape[1]):
        if (X >> np.uint64(i)) & np.uint64(1):
            bits[n] = i
            n += 1
    best = X
    for a in range(perms.shape[0]):
        m = np.uint64(0)
        for j in range(n):
            m |= np.uint64(1) << np.uint64(perms[a, bits[j]])
        if m < best:
            best = m
    return best


@njit(cache=True)
def _exists(T, N, neg, low, shl, shr, full, perms, choice):
    """Is there a zero-sum-free sequence of length T?  Fills ``choice``."""
    memo = Dict.empty(key_type=types.uint64, value_type=types.int64)
    Xs = np.zeros(T + 2, dtype=np.uint64)
    keys = np.zeros(T + 2, dtype=np.uint64)
    nxt = np.zeros(T + 2, dtype=np.int64)
    bits = np.zeros(64, dtype=np.int64)
    one = np.uint64(1)
    d = 0
    nodes = 0
    entering = True
    while True:
        if entering:
            nodes += 1
            X = Xs[d]
            if d >= T:
                return True, nodes
            pruned = d + (N - 1 - _popcount(X)) < T
            if not pruned:
                k = _canon(X, perms, bits)
                pruned = k in memo and memo[k] <= d
            if pruned:
                d -= 1
                entering = False
                if d < 0:
                    return False, nodes
                continue
            keys[d] = k
            nxt[d] = 1
        X = Xs[d]
        g = nxt[d]
        advanced = False
        while g < N:
            if not ((X >> np.uint64(neg[g])) & one):
                nxt[d] = g + 1
                choice[d] = g
                Xs[d + 1] = X | (one << np.uint64(g)) | _translate(X, g, low, shl, shr, full)
                d += 1
                entering = True
                advanced = True
                break
            g += 1
        if advanced:
            continue
        k = keys[d]
        if k not in memo or memo[k] > d:
            memo[k] = d
        d -= 1
        entering = False
        if d < 0:
            return False, nodes


def _tables(G: Group):
    N, r = G.order, G.rank
    low = np.zeros((N, r), dtype=np.uint64)
    shl = np.zeros((N, r), dtype=np.int64)
    shr = np.zeros((N, r), dtype=np.int64)
    masks = G._rotation_masks
    for gi, g in enumerate(G.elements):
        for i, t in enumerate(g):
            if t:
                low[gi, i] = masks[i][t]
                shl[gi, i] = t * G.strides[i]
                shr[gi, i] = (G.invariant_factors[i] - t) * G.strides[i]
    neg = np.array([G.neg_index(i) for i in range(N)], dtype=np.int64)
    return neg, low, shl, shr, np.uint64(G.full_mask)


def symmetry_permutations(G: Group) -> list[tuple[int, ...]]:
    perms = automorphism_permutations(G, limit=AUTOMORPHISM_LIMIT)
    if perms is None:
        perms = coordinate_permutations(G)
    return perms


# -- pure Python twin ---------------------------------------------------------

def _exists_py(T: int, G: Group, perms, choice: list[int]) -> tuple[bool, int]:
    N = G.order
    neg = [G.neg_index(i) for i in range(N)]
    elems = G.elements

    def canon(X: int) -> int:
        idx = [i for i in range(N) if X >> i & 1]
        return min(sum(1 << p[i] for i in idx) for p in perms) if perms else X

    memo: dict[int, int] = {}
    nodes = 0

    def search(X: int, d: int) -> bool:
        nonlocal nodes
        nodes += 1
        if d >= T:
            return True
        if d + N - 1 - bin(X).count("1") < T:
            return False
        k = canon(X)
        if memo.get(k, T + 1) <= d:
            return False
        for g in range(1, N):
            if not X >> neg[g] & 1:
                choice[d] = g
                if search(X | 1 << g | G.translate_mask(X, elems[g]), d + 1):
                    return True
        if memo.get(k, T + 1) > d:
            memo[k] = d
        return False

    return search(0, 0), nodes


# -- driver -------------------------------------------------------------------

def zero_sum_free_of_length(G: Group, T: int, backend: str = "auto") -> tuple[tuple[int, ...], ...] | None:
    """A zero-sum-free sequence over G of length T (as element list), or None."""
    res, _ = _run(G, T, backend, symmetry_permutations(G))
    return res


def _run(G: Group, T: int, backend: str, perms):
    if backend == "auto":
        backend = "numba" if G.order <= 64 else "python"
    if backend == "numba":
        if G.order > 64:
            raise ValueError("the numba backend handles groups of order <= 64 only")
        neg, low, shl, shr, full = _tables(G)
        P = np.array(perms, dtype=np.int64).reshape(len(perms), G.order)
        choice = np.zeros(T + 2, dtype=np.int64)
        found, nodes = _exists(T, G.order, neg, low, shl, shr, full, P, choice)
        choice = [int(c) for c in choice]
    elif backend == "python":
        choice = [0] * (T + 2)
        found, nodes = _exists_py(T, G, perms, choice)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    if not found:
        return None, nodes
    return tuple(G.element_at(c) for c in choice[:T]), nodes


def max_zero_sum_free_length(G: Group, backend: str = "auto") -> ZsfSearchResult:
    """Maximal zero-sum-free length over G, with a witness sequence.

    Starts from D*(G) - 1, which is always attained, and steps upward until
    the search proves no longer sequence exists.
    """
    perms = symmetry_permutations(G)
    T = d_star(G) - 1
    witness, nodes = _run(G, T, backend, perms)
    if witness is None:
        raise AssertionError(f"no zero-sum-free sequence of length D*-1 over {G}")
    total = nodes
    while True:
        longer, nodes = _run(G, T + 1, backend, perms)
        total += nodes
        log.debug("%s: length %d %s after %d nodes", G, T + 1, "found" if longer else "refuted", nodes)
        if longer is None:
            return ZsfSearchResult(G, T, witness, total)
        T, witness = T + 1, longer
