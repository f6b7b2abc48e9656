"""Sequences over a support set, subsequence sums, atoms and Davenport constants.

A sequence over G0 is stored as a multiplicity vector aligned with the sorted
support.  Sums of subsequences are tracked as bitmasks over the dense element
indexing of the group (see :meth:`Group.translate_mask`).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .group import Group, GroupElement, format_element


@dataclass(frozen=True)
class SupportContext:
    group: Group
    support: tuple[GroupElement, ...]

    def __post_init__(self):
        G = self.group
        elems = [G.element(g) for g in self.support]
        if not elems:
            raise ValueError("support must be nonempty")
        if len(set(elems)) != len(elems):
            raise ValueError(f"support elements must be distinct: {elems}")
        object.__setattr__(self, "support", tuple(sorted(elems)))

    def __len__(self):
        return len(self.support)

    def position(self, g: GroupElement) -> int:
        return self.support.index(g)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(self.group.order_of(g) for g in self.support)

    def sequence(self, mult: Sequence[int]) -> "ZsSequence":
        return ZsSequence(self, tuple(mult))


class ZsSequence:
    """A finite multiset over ``context.support``.

    Equality and hashing depend only on the group and the terms with positive
    multiplicity, so the same sequence found over different supports compares
    equal.
    """

    __slots__ = ("context", "mult", "_terms")

    def __init__(self, context: SupportContext, mult: Sequence[int]):
        mult = tuple(int(m) for m in mult)
        if len(mult) != len(context.support):
            raise ValueError("multiplicity vector does not match the support")
        if any(m < 0 for m in mult):
            raise ValueError("multiplicities must be nonnegative")
        self.context = context
        self.mult = mult
        self._terms = tuple((g, m) for g, m in zip(context.support, mult) if m)

    @classmethod
    def from_terms(cls, group: Group, terms: Iterable[tuple[GroupElement, int]]) -> "ZsSequence":
        merged: dict[GroupElement, int] = {}
        for g, m in terms:
            g = group.element(g)
            merged[g] = merged.get(g, 0) + m
        merged = {g: m for g, m in merged.items() if m}
        if not merged:
            raise ValueError("use an explicit support to build the empty sequence")
        ctx = SupportContext(group, tuple(merged))
        return cls(ctx, [merged[g] for g in ctx.support])

    @classmethod
    def from_elements(cls, group: Group, elems: Iterable[GroupElement]) -> "ZsSequence":
        return cls.from_terms(group, ((g, 1) for g in elems))

    @property
    def group(self) -> Group:
        return self.context.group

    @property
    def terms(self) -> tuple[tuple[GroupElement, int], ...]:
        return self._terms

    def __len__(self):
        return sum(self.mult)

    @property
    def length(self) -> int:
        return sum(self.mult)

    def supp(self) -> frozenset[GroupElement]:
        return frozenset(g for g, _ in self._terms)

    def multiplicity(self, g: GroupElement) -> int:
        for h, m in self._terms:
            if h == g:
                return m
        return 0

    def vector(self, support: Sequence[GroupElement]) -> tuple[int, ...]:
        """Exponent vector with respect to another support containing supp(S)."""
        pos = {g: i for i, g in enumerate(support)}
        v = [0] * len(support)
        for g, m in self._terms:
            if g not in pos:
                raise ValueError(f"{g} is not in the given support")
            v[pos[g]] = m
        return tuple(v)

    def divides(self, other: "ZsSequence") -> bool:
        return all(other.multiplicity(g) >= m for g, m in self._terms)

    def __mul__(self, other: "ZsSequence") -> "ZsSequence":
        if self.group != other.group:
            raise ValueError("sequences live over different groups")
        support = tuple(sorted(set(self.context.support) | set(other.context.support)))
        ctx = SupportContext(self.group, support)
        a = self.vector(ctx.support)
        b = other.vector(ctx.support)
        return ZsSequence(ctx, [x + y for x, y in zip(a, b)])

    def remove(self, g: GroupElement, count: int = 1) -> "ZsSequence":
        """The sequence g^{-count} S."""
        i = self.context.position(g)
        if self.mult[i] < count:
            raise ValueError(f"{g} does not divide the sequence {count} times")
        m = list(self.mult)
        m[i] -= count
        return ZsSequence(self.context, m)

    def __eq__(self, other):
        if not isinstance(other, ZsSequence):
            return NotImplemented
        return self.group == other.group and self._terms == other._terms

    def __hash__(self):
        return hash((self.group, self._terms))

    def sort_key(self):
        return (self.length, self._terms)

    def __repr__(self):
        return f"ZsSequence({self.group}, {self.render()})"

    def render(self) -> str:
        """Display as a monomial x1^{m1}...xk^{mk} over the context support."""
        parts = []
        for i, m in enumerate(self.mult, 1):
            if m == 1:
                parts.append(f"x{i}")
            elif m:
                parts.append(f"x{i}^{m}")
        return "".join(parts) or "1"

    def render_elements(self) -> str:
        return "*".join(f"{format_element(g)}^{m}" if m > 1 else format_element(g) for g, m in self._terms) or "1"

    def to_json(self) -> dict:
        return {"support": [list(g) for g in self.context.support], "mult": list(self.mult)}

    @classmethod
    def from_json(cls, group: Group, data: dict) -> "ZsSequence":
        ctx = SupportContext(group, tuple(tuple(g) for g in data["support"]))
        given = {group.element(g): m for g, m in zip(data["support"], data["mult"])}
        return cls(ctx, [given[g] for g in ctx.support])

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# -- sums -------------------------------------------------------------------

def sigma(S: ZsSequence) -> GroupElement:
    G = S.group
    return G.combine(S.mult, S.context.support)


def sum_mask(G: Group, terms: Iterable[tuple[GroupElement, int]], start: int = 0) -> int:
    """Bitmask of Sigma(S) for S given by (element, multiplicity) terms.

    ``start`` is the mask of an already-processed prefix.  Adding one copy of
    g maps the nonempty-sum set X to X | {g} | (X + g).
    """
    X = start
    for g, m in terms:
        bit = 1 << G.index(g)
        for _ in range(m):
            Y = X | bit | G.translate_mask(X, g)
            if Y == X:
                break
            X = Y
    return X


def subsequence_sum_set(S: ZsSequence) -> set[GroupElement]:
    G = S.group
    return G.elements_of_mask(sum_mask(G, S.terms))


def is_zero_sum_free(S: ZsSequence) -> bool:
    # index 0 is the zero element
    return not sum_mask(S.group, S.terms) & 1


def is_zero_sum(S: ZsSequence) -> bool:
    return sigma(S) == S.group.zero


def is_atom(S: ZsSequence) -> bool:
    if S.length == 0 or not is_zero_sum(S):
        return False
    return all(is_zero_sum_free(S.remove(g)) for g, _ in S.terms)


# -- atom enumeration -------------------------------------------------------

def enumerate_atoms(ctx: SupportContext, max_length: int | None = None) -> list[ZsSequence]:
    """All atoms over ``ctx.support``, sorted by (length, multiplicity vector).

    Depth-first over the support in canonical order.  Every proper
    subsequence of an atom is zero-sum free, so only zero-sum-free prefixes
    are extended; the first copy that creates a zero sum either completes an
    atom (with all later multiplicities zero) or kills the branch.  This also
    caps each multiplicity at the order of its element.  Atoms containing a
    zero element arise the same way: 0 itself is the atom 0^1.
    """
    G = ctx.group
    support = ctx.support
    k = len(support)
    idx = [G.index(g) for g in support]
    zero = G.zero
    out: list[tuple[int, ...]] = []
    mult = [0] * k
    limit = max_length

    def dfs(pos: int, X: int, s: GroupElement, length: int):
        if pos == k:
            return
        if limit is not None and length >= limit:
            return
        g = support[pos]
        bit = 1 << idx[pos]
        # multiplicity 0 at this position
        dfs(pos + 1, X, s, length)
        Y, t = X, s
        m = 0
        while True:
            m += 1
            if limit is not None and length + m > limit:
                break
            Y = Y | bit | G.translate_mask(Y, g)
            t = G.add(t, g)
            mult[pos] = m
            if Y & 1:
                # the prefix without this copy is zero-sum free, so a zero sum
                # here is automatically minimal: any zero-sum T using this
                # copy leaves a zero-sum complement inside the prefix
                if t == zero:
                    out.append(tuple(mult[: pos + 1]) + (0,) * (k - pos - 1))
                break
            dfs(pos + 1, Y, t, length + m)
        mult[pos] = 0

    dfs(0, 0, zero, 0)
    atoms = [ZsSequence(ctx, v) for v in out]
    atoms.sort(key=lambda A: (A.length, A.mult))
    return atoms


def full_support_atoms(ctx: SupportContext, max_length: int | None = None) -> list[ZsSequence]:
    return [A for A in enumerate_atoms(ctx, max_length) if all(A.mult)]


def davenport(ctx: SupportContext) -> int:
    """Maximal atom length over the support."""
    return max(A.length for A in enumerate_atoms(ctx))


def davenport_group(G: Group) -> int:
    """The Davenport constant D(G) via the exact zero-sum-free search."""
    from .zerosumfree import max_zero_sum_free_length

    return max_zero_sum_free_length(G).length + 1


def all_elements_context(G: Group) -> SupportContext:
    return SupportContext(G, G.elements)

