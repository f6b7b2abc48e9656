"""Exact integer lattices in Hermite normal form.

A lattice in Z^k is stored by its HNF basis: basis vectors in echelon form
with strictly increasing pivot positions, positive pivots, and every entry
sitting above a pivot (same coordinate, earlier vector) reduced into
[0, pivot).  Each lattice has exactly one such basis, so equality is tuple
identity.  All arithmetic is on Python ints.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, TYPE_CHECKING

if TYPE_CHECKING:
    from .group import Group, GroupElement

Vector = tuple[int, ...]


class DimensionError(ValueError):
    pass


def hnf(vectors: Iterable[Sequence[int]], dim: int) -> tuple[Vector, ...]:
    """Canonical HNF basis of the integer span of ``vectors``."""
    rows = []
    for v in vectors:
        if len(v) != dim:
            raise DimensionError(f"vector {tuple(v)} does not have dimension {dim}")
        if any(v):
            rows.append([int(x) for x in v])
    basis: list[list[int]] = []
    pivots: list[int] = []
    col = 0
    while rows and col < dim:
        active = [r for r in rows if r[col]]
        if not active:
            col += 1
            continue
        rest = [r for r in rows if not r[col]]
        # Euclid on the column until a single row carries it
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            active = nxt
        piv = active[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        basis.append(piv)
        pivots.append(col)
        rows = rest
        col += 1
    # reduce entries above each pivot
    for i, (row, c) in enumerate(zip(basis, pivots)):
        p = row[c]
        for j in range(i):
            q = basis[j][c] // p
            if q:
                basis[j] = [a - q * b for a, b in zip(basis[j], row)]
    return tuple(tuple(r) for r in basis)


def _pivot(v: Sequence[int]) -> int:
    for i, x in enumerate(v):
        if x:
            return i
    raise ValueError("zero vector has no pivot")


@dataclass(frozen=True)
class IntLattice:
    dim: int
    basis: tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(_pivot(v) for v in self.basis)

    def is_full_rank(self) -> bool:
        return self.rank == self.dim

    def index(self) -> int:
        """Index in Z^dim (product of pivots); only for full-rank lattices."""
        if not self.is_full_rank():
            raise ValueError("index is infinite for a lattice of deficient rank")
        out = 1
        for v, c in zip(self.basis, self.pivots):
            out *= v[c]
        return out

    def __contains__(self, v) -> bool:
        return member(self, v)

    def to_json(self) -> dict:
        return {"dim": self.dim, "hnf": [list(v) for v in self.basis]}

    @classmethod
    def from_json(cls, data: dict) -> "IntLattice":
        return lattice_from_generators(data["hnf"], data["dim"])


def zero_lattice(dim: int) -> IntLattice:
    return IntLattice(dim, ())


def lattice_from_generators(vectors: Iterable[Sequence[int]], dim: int) -> IntLattice:
    return IntLattice(dim, hnf(vectors, dim))


def member(L: IntLattice, v: Sequence[int]) -> bool:
    if len(v) != L.dim:
        raise DimensionError(f"vector of length {len(v)} tested against lattice in Z^{L.dim}")
    w = [int(x) for x in v]
    start = 0
    for row in L.basis:
        c = _pivot(row)
        if any(w[start:c]):
            return False
        q, rem = divmod(w[c], row[c])
        if rem:
            return False
        if q:
            w = [a - q * b for a, b in zip(w, row)]
        start = c + 1
    return not any(w[start:])


def contains_lattice(L: IntLattice, M: IntLattice) -> bool:
    """True iff M is a sublattice of L."""
    return all(member(L, v) for v in M.basis)


def lattice_equal(L1: IntLattice, L2: IntLattice) -> bool:
    if L1.dim != L2.dim:
        raise DimensionError("lattices live in different dimensions")
    return L1.basis == L2.basis


def lattice_sum(*lattices: IntLattice) -> IntLattice:
    if not lattices:
        raise ValueError("lattice_sum needs at least one lattice")
    dim = lattices[0].dim
    if any(L.dim != dim for L in lattices):
        raise DimensionError("lattices live in different dimensions")
    return lattice_from_generators([v for L in lattices for v in L.basis], dim)


def embed(L: IntLattice, positions: Sequence[int], dim: int) -> IntLattice:
    """Push L into Z^dim, sending coordinate i to ``positions[i]`` (zero padding)."""
    if len(positions) != L.dim:
        raise DimensionError("position map does not match lattice dimension")
    vecs = []
    for v in L.basis:
        w = [0] * dim
        for x, p in zip(v, positions):
            w[p] = x
        vecs.append(w)
    return lattice_from_generators(vecs, dim)


def kernel_lattice(support, G: "Group | None" = None) -> IntLattice:
    """The lattice {m in Z^k : sum m_i g_i = 0 in G} for ``support = (g_1..g_k)``.

    ``support`` is either a :class:`SupportContext` or an element sequence
    accompanied by its group.

    Rows [coords(g_i) | e_i] and [n_j e_j | 0] span a lattice whose vectors
    with vanishing group part are exactly (0, m) for m in the kernel.  In an
    echelon basis those are spanned by the rows pivoting past the group part.
    """
    if G is None:
        G, support = support.group, support.support
    k = len(support)
    r = G.rank
    rows = []
    for i, g in enumerate(support):
        e = [0] * k
        e[i] = 1
        rows.append(list(g) + e)
    for j, n in enumerate(G.invariant_factors):
        row = [0] * (r + k)
        row[j] = n
        rows.append(row)
    H = hnf(rows, r + k)
    return IntLattice(k, tuple(v[r:] for v in H if _pivot(v) >= r))


def smith_diagonal(vectors: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero Smith-form diagonal of the matrix whose rows are ``vectors``.

    For a full-rank relation lattice K in Z^k the entries > 1 are the
    invariant factors of Z^k / K.
    """
    A = [list(v) for v in vectors]
    diag = []
    while True:
        A = [r for r in A if any(r)]
        if not A:
            break
        _, i0, j0 = min((abs(x), i, j) for i, r in enumerate(A) for j, x in enumerate(r) if x)
        _move_to_corner(A, i0, j0)
        while True:
            p = A[0][0]
            for i in range(1, len(A)):
                q = A[i][0] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[0])]
            for j in range(1, len(A[0])):
                q = A[0][j] // p
                if q:
                    for r in A:
                        r[j] -= q * r[0]
            rest = [(abs(A[i][0]), i, 0) for i in range(1, len(A)) if A[i][0]]
            rest += [(abs(A[0][j]), 0, j) for j in range(1, len(A[0])) if A[0][j]]
            if rest:
                _, i0, j0 = min(rest)
                _move_to_corner(A, i0, j0)
                continue
            bad = next((i for i in range(1, len(A)) if any(x % p for x in A[i][1:])), None)
            if bad is None:
                break
            A[0] = [a + b for a, b in zip(A[0], A[bad])]
        diag.append(abs(A[0][0]))
        A = [r[1:] for r in A[1:]]
    return sorted(diag)


def _move_to_corner(A: list[list[int]], i: int, j: int) -> None:
    A[0], A[i] = A[i], A[0]
    for r in A:
        r[0], r[j] = r[j], r[0]
