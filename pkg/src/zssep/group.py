"""Finite abelian groups in invariant-factor form.

Elements are plain tuples of residues, one per invariant factor, always
reduced.  Every group also has a dense indexing of its elements (mixed radix,
last coordinate fastest) so that canonical lexicographic order of coordinate
tuples coincides with index order; subsets of the group are encoded as Python
int bitmasks over that indexing wherever speed matters.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterable, Iterator, Sequence

GroupElement = tuple[int, ...]


class GroupSpecError(ValueError):
    """A group expression could not be parsed or describes the trivial group."""


@dataclass(frozen=True)
class Group:
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(n) for n in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        if not factors:
            raise GroupSpecError("trivial group is not allowed")
        for n in factors:
            if n < 2:
                raise GroupSpecError(f"invariant factor {n} must be >= 2")
        for a, b in zip(factors, factors[1:]):
            if b % a:
                raise GroupSpecError(f"invariant factors {factors} do not form a divisibility chain")

    def __str__(self):
        return "x".join(f"C{n}" for n in self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1]

    @cached_property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def zero(self) -> GroupElement:
        return (0,) * self.rank

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out = []
        s = 1
        for n in reversed(self.invariant_factors):
            out.append(s)
            s *= n
        return tuple(reversed(out))

    @cached_property
    def elements(self) -> tuple[GroupElement, ...]:
        return tuple(itertools.product(*(range(n) for n in self.invariant_factors)))

    def basis(self) -> list[GroupElement]:
        out = []
        for i in range(self.rank):
            e = [0] * self.rank
            e[i] = 1
            out.append(tuple(e))
        return out

    # -- arithmetic -----------------------------------------------------
    def element(self, coords: Iterable[int]) -> GroupElement:
        coords = tuple(coords)
        if len(coords) != self.rank:
            raise ValueError(f"element {coords} has wrong length for {self}")
        return tuple(c % n for c, n in zip(coords, self.invariant_factors))

    def add(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.invariant_factors))

    def neg(self, a: GroupElement) -> GroupElement:
        return tuple(-x % n for x, n in zip(a, self.invariant_factors))

    def scale(self, k: int, a: GroupElement) -> GroupElement:
        return tuple(k * x % n for x, n in zip(a, self.invariant_factors))

    def combine(self, coeffs: Sequence[int], elems: Sequence[GroupElement]) -> GroupElement:
        acc = [0] * self.rank
        for c, g in zip(coeffs, elems):
            if c:
                for i, x in enumerate(g):
                    acc[i] += c * x
        return self.element(acc)

    def contains(self, g: Sequence[int]) -> bool:
        return len(g) == self.rank and all(0 <= x < n for x, n in zip(g, self.invariant_factors))

    def order_of(self, g: GroupElement) -> int:
        return reduce(math.lcm, (n // math.gcd(n, x) for x, n in zip(g, self.invariant_factors)), 1)

    # -- dense indexing and bitmask translation -------------------------
    def index(self, g: GroupElement) -> int:
        return sum(x * s for x, s in zip(g, self.strides))

    def element_at(self, i: int) -> GroupElement:
        return tuple((i // s) % n for s, n in zip(self.strides, self.invariant_factors))

    @cached_property
    def _neg_index(self) -> tuple[int, ...]:
        return tuple(self.index(self.neg(g)) for g in self.elements)

    def neg_index(self, i: int) -> int:
        return self._neg_index[i]

    @cached_property
    def _rotation_masks(self) -> tuple[tuple[int, ...], ...]:
        # masks[i][t]: indices whose i-th coordinate is < n_i - t
        out = []
        for i, n in enumerate(self.invariant_factors):
            s = self.strides[i]
            row = []
            for t in range(n):
                m = 0
                for p in range(self.order):
                    if (p // s) % n < n - t:
                        m |= 1 << p
                row.append(m)
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def translate_mask(self, mask: int, g: GroupElement) -> int:
        """Return the bitmask of ``{x + g : x in mask}``."""
        full = self.full_mask
        for i, t in enumerate(g):
            if t:
                n = self.invariant_factors[i]
                s = self.strides[i]
                low = self._rotation_masks[i][t]
                mask = ((mask & low) << (t * s)) | ((mask & ~low & full) >> ((n - t) * s))
        return mask

    def mask_of(self, elems: Iterable[GroupElement]) -> int:
        m = 0
        for g in elems:
            m |= 1 << self.index(g)
        return m

    def elements_of_mask(self, mask: int) -> set[GroupElement]:
        out = set()
        while mask:
            low = mask & -mask
            out.add(self.element_at(low.bit_length() - 1))
            mask ^= low
        return out

    def to_json(self) -> list[int]:
        return list(self.invariant_factors)


# -- parsing ------------------------------------------------------------

_CYCLIC_RE = re.compile(r"^C(\d+)((?:x(?:C)?\d+)*)$")


def canonical_factors(factors: Iterable[int]) -> tuple[int, ...]:
    """Normalize any list of cyclic orders to an invariant-factor chain.

    Repeated pairwise (gcd, lcm) replacement preserves the group up to
    isomorphism; factors equal to 1 are dropped afterwards.
    """
    fs = [int(n) for n in factors]
    if any(n < 1 for n in fs):
        raise GroupSpecError(f"cyclic orders must be positive: {fs}")
    changed = True
    while changed:
        changed = False
        for i in range(len(fs)):
            for j in range(i + 1, len(fs)):
                a, b = fs[i], fs[j]
                if b % a:
                    fs[i], fs[j] = math.gcd(a, b), math.lcm(a, b)
                    changed = True
    fs = sorted(n for n in fs if n > 1)
    return tuple(fs)


def parse_group(spec: str) -> Group:
    """Parse ``C2xC4``, ``C2x4`` or ``2,4`` into a :class:`Group`.

    >>> parse_group("C4xC2")
    Group(invariant_factors=(2, 4))
    """
    text = spec.strip().replace(" ", "")
    if not text:
        raise GroupSpecError("empty group spec")
    m = _CYCLIC_RE.match(text)
    if m:
        factors = [int(m.group(1))] + [int(x) for x in re.findall(r"\d+", m.group(2))]
    elif re.fullmatch(r"\d+(,\d+)*", text):
        factors = [int(x) for x in text.split(",")]
    else:
        raise GroupSpecError(f"cannot parse group spec {spec!r}")
    normalized = canonical_factors(factors)
    if not normalized:
        raise GroupSpecError(f"{spec!r} is the trivial group")
    return Group(normalized)


def parse_element(text: str, G: Group) -> GroupElement:
    """Parse ``[a1,...,ar]`` into a reduced element of ``G``."""
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"element literal must be bracketed: {text!r}")
    parts = [p for p in body[1:-1].split(",") if p.strip()]
    return G.element(int(p) for p in parts)


def parse_elements(text: str, G: Group) -> list[GroupElement]:
    """Parse a list such as ``"[1,0],[0,1],[1,1]"``."""
    items = re.findall(r"\[[^\]]*\]", text)
    if not items or re.sub(r"\[[^\]]*\]|[,\s]", "", text):
        raise ValueError(f"cannot parse element list {text!r}")
    return [parse_element(s, G) for s in items]


def format_element(g: GroupElement) -> str:
    return "[" + ",".join(str(x) for x in g) + "]"


# -- element-level operations -------------------------------------------

def order_of(g: GroupElement, G: Group) -> int:
    return G.order_of(g)


def cyclic_subgroup(g: GroupElement, G: Group) -> frozenset[GroupElement]:
    out = [G.zero]
    x = g
    while x != G.zero:
        out.append(x)
        x = G.add(x, g)
    return frozenset(out)


def cyclic_intersection_trivial(g1: GroupElement, g2: GroupElement, G: Group) -> bool:
    """True iff the cyclic subgroups generated by ``g1`` and ``g2`` meet only in 0."""
    return cyclic_subgroup(g1, G) & cyclic_subgroup(g2, G) == {G.zero}


@dataclass(frozen=True)
class Subgroup:
    group: Group
    generators: frozenset[GroupElement]
    elements: frozenset[GroupElement] = field(repr=False)
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.elements


def closure(S: Iterable[GroupElement], G: Group) -> frozenset[GroupElement]:
    """Materialize the subgroup generated by ``S`` by breadth-first addition."""
    gens = [g for g in set(S) if g != G.zero]
    seen = {G.zero}
    frontier = [G.zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.add(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def subgroup_invariant_factors(S: Iterable[GroupElement], G: Group) -> tuple[int, ...]:
    """Invariant factors of <S>, read off the Smith form of its relation lattice."""
    from .lattice import kernel_lattice, smith_diagonal

    gens = sorted(set(S))
    if not gens:
        return ()
    K = kernel_lattice(gens, G)
    return tuple(d for d in smith_diagonal(K.basis) if d > 1)


def subgroup_generated(S: Iterable[GroupElement], G: Group) -> Subgroup:
    gens = frozenset(G.element(g) for g in S)
    elems = closure(gens, G)
    factors = subgroup_invariant_factors(gens, G)
    if math.prod(factors) != len(elems):
        raise AssertionError(f"Smith form {factors} disagrees with closure size {len(elems)}")
    return Subgroup(G, gens, elems, factors)


def subgroup_rank(S: Iterable[GroupElement], G: Group) -> int:
    return len(subgroup_invariant_factors(S, G))


def scaled_subgroup(G: Group, n: int) -> Subgroup:
    """The subgroup ``nG``, generated by ``n * e_i``."""
    if n < 1:
        raise ValueError("scale must be >= 1")
    return subgroup_generated([G.scale(n, e) for e in G.basis()], G)


def scaled_group_factors(G: Group, n: int) -> tuple[int, ...]:
    """Invariant factors of ``nG`` without materializing it."""
    return canonical_factors(m // math.gcd(m, n) for m in G.invariant_factors)


# -- number theory --------------------------------------------------------

def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def least_prime_divisor(n: int) -> int:
    if n < 2:
        raise ValueError(f"{n} has no prime divisor")
    return prime_factors(n)[0]


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("phi is defined for n >= 1")
    out = n
    for p in prime_factors(n):
        out -= out // p
    return out


def omega(n: int) -> int:
    if n < 1:
        raise ValueError("omega is defined for n >= 1")
    return len(prime_factors(n))


def coprime_split_count(d: int) -> int:
    """Number of factorizations d = d1*d2 with gcd(d1, d2) = 1 and d1 <= d2."""
    if d <= 1:
        raise ValueError("coprime_split_count requires d >= 2")
    return 2 ** (omega(d) - 1)


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def is_prime_power(n: int) -> bool:
    return n > 1 and len(prime_factors(n)) == 1


def d_star(factors: Sequence[int] | Group) -> int:
    if isinstance(factors, Group):
        factors = factors.invariant_factors
    return 1 + sum(n - 1 for n in factors)


# -- enumeration ----------------------------------------------------------

def subsets_up_to_size(G: Group, k: int) -> Iterator[tuple[GroupElement, ...]]:
    """All nonempty subsets of G with at most ``k`` elements.

    Size-major; within one size, lexicographic on the sorted coordinate
    tuples (``itertools.combinations`` over the canonical element order).
    """
    if k < 0 or k > G.order:
        raise ValueError(f"subset size bound {k} out of range for |G| = {G.order}")
    elems = G.elements
    for size in range(1, k + 1):
        yield from itertools.combinations(elems, size)


def count_subsets_up_to_size(n: int, k: int) -> int:
    return sum(math.comb(n, i) for i in range(1, k + 1))


def automorphism_permutations(G: Group, limit: int = 200_000) -> list[tuple[int, ...]] | None:
    """Index permutations induced by all automorphisms of G.

    Automorphisms are enumerated through the images of the standard basis;
    returns None when the candidate space exceeds ``limit``.
    """
    cands = []
    for n in G.invariant_factors:
        cands.append([g for g in G.elements if G.scale(n, g) == G.zero])
    if math.prod(len(c) for c in cands) > limit:
        return None
    elems = G.elements
    N = G.order
    perms = []
    for imgs in itertools.product(*cands):
        perm = tuple(G.index(G.combine(e, imgs)) for e in elems)
        if len(set(perm)) == N:
            perms.append(perm)
    return perms


def coordinate_permutations(G: Group) -> list[tuple[int, ...]]:
    """Automorphisms that permute coordinates with equal invariant factors."""
    blocks: dict[int, list[int]] = {}
    for i, n in enumerate(G.invariant_factors):
        blocks.setdefault(n, []).append(i)
    choices = [list(itertools.permutations(idx)) for idx in blocks.values()]
    order = list(blocks.values())
    out = []
    for combo in itertools.product(*choices):
        sigma = list(range(G.rank))
        for src, dst in zip(order, combo):
            for a, b in zip(src, dst):
                sigma[a] = b
        perm = []
        for g in G.elements:
            h = [0] * G.rank
            for i, x in enumerate(g):
                h[sigma[i]] = x
            perm.append(G.index(tuple(h)))
        out.append(tuple(perm))
    return out
