"""Separating atoms, the separating Noether number and Property (P).

Vocabulary used throughout:

* a *support* G0 is a sorted tuple of distinct group elements; sequences
  over it are multiplicity vectors indexed by that order;
* an atom A over G0 is *separating* when its vector lies outside the lattice
  spanned by all atoms over G0 of length < |A|;
* G0 has *Property (P)* when its kernel lattice is not spanned by the kernel
  lattices of its proper subsets.

A separating atom over G0 stays separating over supp(A) (fewer short atoms,
smaller lattice), so every maximal witness is recorded once, under the
support it actually uses.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from .census import DEFAULT_BUDGET, Subset, map_element, support_bound, sweep
from .group import (
    Group,
    GroupElement,
    cyclic_intersection_trivial,
    format_element,
    is_prime_power,
    subgroup_rank,
)
from .lattice import (
    IntLattice,
    embed,
    kernel_lattice,
    lattice_from_generators,
    lattice_sum,
    member,
    zero_lattice,
)
from .sequences import SupportContext, ZsSequence, enumerate_atoms, is_atom, is_zero_sum


class SubsetSizeError(ValueError):
    """A support is empty or larger than rank + 1."""


class NotZeroSumError(ValueError):
    """A candidate separating set contains a sequence whose sum is not 0."""


def normalize_subset(subset: Iterable[GroupElement], G: Group) -> Subset:
    elems = [G.element(g) for g in subset]
    G0 = tuple(sorted(set(elems)))
    if len(G0) != len(elems):
        raise ValueError(f"repeated elements in {format_subset(elems)}")
    if not G0 or len(G0) > support_bound(G):
        raise SubsetSizeError(f"support size must lie in [1, {support_bound(G)}], got {len(G0)}")
    return G0


def format_subset(G0: Iterable[GroupElement]) -> str:
    return "{" + ",".join(format_element(g) for g in G0) + "}"


# -- separating atoms -----------------------------------------------------------

@dataclass(frozen=True)
class SepAtomTable:
    context: SupportContext
    atoms: tuple[ZsSequence, ...]
    separating_flags: tuple[bool, ...]
    lattice_prefix: tuple[IntLattice, ...]

    def atoms_by_length(self) -> dict[int, list[ZsSequence]]:
        out: dict[int, list[ZsSequence]] = {}
        for A in self.atoms:
            out.setdefault(A.length, []).append(A)
        return out

    def separating(self) -> list[ZsSequence]:
        return [A for A, f in zip(self.atoms, self.separating_flags) if f]

    def full_support_separating(self) -> list[ZsSequence]:
        return [A for A in self.separating() if all(A.mult)]

    def max_separating_length(self) -> int:
        return max(A.length for A in self.separating())

    @property
    def davenport(self) -> int:
        return self.atoms[-1].length


def separating_atoms(ctx: SupportContext) -> SepAtomTable:
    """Classify every atom over the support, lengths in increasing order.

    ``lattice_prefix[l]`` is the lattice spanned by the atoms of length <= l;
    an atom of length l is separating iff it is outside ``lattice_prefix[l-1]``.
    Non-separating atoms are already inside, so only separating vectors are
    added when the prefix grows.
    """
    atoms = enumerate_atoms(ctx)
    k = len(ctx)
    L = zero_lattice(k)
    prefix = [L]
    flags = []
    i = 0
    for ell in range(1, atoms[-1].length + 1):
        fresh = []
        while i < len(atoms) and atoms[i].length == ell:
            sep = not member(L, atoms[i].mult)
            flags.append(sep)
            if sep:
                fresh.append(atoms[i].mult)
            i += 1
        if fresh:
            L = lattice_from_generators(list(L.basis) + fresh, k)
        prefix.append(L)
    return SepAtomTable(ctx, tuple(atoms), tuple(flags), tuple(prefix))


def beta_sep_over(ctx: SupportContext) -> int:
    return separating_atoms(ctx).max_separating_length()


def _full_support_separating(G: Group, subset: Subset) -> tuple[tuple[int, ...], ...]:
    table = separating_atoms(SupportContext(G, subset))
    return tuple(A.mult for A in table.full_support_separating())


def _transport(G: Group, subset: Subset, perm, mults) -> list[ZsSequence]:
    out = []
    for mult in mults:
        terms = [(map_element(G, perm, g), m) for g, m in zip(subset, mult)]
        out.append(ZsSequence.from_terms(G, terms))
    return out


def _separating_census(G: Group, jobs: int, symmetric: bool, budget: int | None) -> list[list[ZsSequence]]:
    """Full-support separating atoms of every census support (one list per support)."""
    entries = sweep(G, _full_support_separating, jobs=jobs, symmetric=symmetric, budget=budget)
    out = []
    for e in entries:
        for image, perm in e.orbit:
            out.append(_transport(G, e.subset, perm, e.result))
    return out


@dataclass(frozen=True)
class BetaSepResult:
    group: Group
    value: int
    witnesses: tuple[ZsSequence, ...]

    def to_json(self) -> dict:
        return {
            "group": str(self.group),
            "beta_sep": self.value,
            "witnesses": [atom_json(A) for A in self.witnesses],
        }


def atom_json(A: ZsSequence) -> dict:
    return {"support": [list(g) for g in A.context.support], "mult": list(A.mult), "length": A.length}


def _sorted_atoms(atoms: Iterable[ZsSequence]) -> list[ZsSequence]:
    return sorted(set(atoms), key=lambda A: (A.length, A.context.support, A.mult))


def beta_sep(
    G: Group, *, jobs: int = 1, symmetric: bool = False, budget: int | None = DEFAULT_BUDGET
) -> BetaSepResult:
    """Maximal separating-atom length over all supports of size <= rank + 1."""
    per_support = _separating_census(G, jobs, symmetric, budget)
    best = max(A.length for atoms in per_support for A in atoms)
    witnesses = [A for atoms in per_support for A in atoms if A.length == best]
    return BetaSepResult(G, best, tuple(_sorted_atoms(witnesses)))


def max_separating_atoms(G: Group, **kw) -> list[tuple[ZsSequence, Subset]]:
    """Every separating atom of length beta_sep(G), paired with its support."""
    res = beta_sep(G, **kw)
    return [(A, A.context.support) for A in res.witnesses]


def build_sreg(
    G: Group,
    *,
    jobs: int = 1,
    symmetric: bool = False,
    budget: int | None = DEFAULT_BUDGET,
    verify: bool = True,
) -> list[ZsSequence]:
    """Union of the separating atoms over all supports of size <= rank + 1."""
    per_support = _separating_census(G, jobs, symmetric, budget)
    sreg = _sorted_atoms(A for atoms in per_support for A in atoms)
    if verify:
        bad = [A for A in sreg if not is_atom(A)]
        if bad:
            raise AssertionError(f"non-atoms in S_reg of {G}: {[A.render_elements() for A in bad[:5]]}")
        if not is_separating_set(sreg, G):
            raise AssertionError(f"S_reg of {G} is not separating")
    return sreg


def sreg_on(support: Sequence[GroupElement], G: Group) -> list[ZsSequence]:
    """The part of S_reg whose supports lie inside ``support``."""
    G0 = normalize_subset(support, G)
    atoms = []
    for k in range(1, len(G0) + 1):
        for sub in itertools.combinations(G0, k):
            atoms += separating_atoms(SupportContext(G, sub)).full_support_separating()
    return _sorted_atoms(atoms)


# -- Property (P) ------------------------------------------------------------------

DIRECT = "direct-lattice"
SINGLETON = "singleton"
PAIR = "pair-cyclic-intersection"
MULTIPLE = "contains-multiple"
RANK_EXCESS = "rank-excess"
RANK_DROP = "rank-drop"
PGROUP = "p-group-rank"
FILTER_METHODS = (SINGLETON, PAIR, MULTIPLE, RANK_EXCESS, RANK_DROP, PGROUP)


@dataclass(frozen=True)
class PropertyPVerdict:
    subset: Subset
    holds: bool
    method: str
    witness: dict | None = None

    def to_json(self) -> dict:
        return {
            "subset": [list(g) for g in self.subset],
            "holds": self.holds,
            "method": self.method,
            "witness": self.witness,
        }


def has_property_p(subset: Iterable[GroupElement], G: Group) -> PropertyPVerdict:
    """Direct test: is the kernel lattice of G0 spanned by those of its facets?

    Kernels of smaller subsets embed into the kernels of the maximal proper
    subsets, so those suffice.  The witness is a kernel basis vector outside
    the span.
    """
    G0 = normalize_subset(subset, G)
    k = len(G0)
    K = kernel_lattice(G0, G)
    parts = []
    for i in range(k if k > 1 else 0):
        rest = G0[:i] + G0[i + 1 :]
        parts.append(embed(kernel_lattice(rest, G), [j for j in range(k) if j != i], k))
    L = lattice_sum(*parts) if parts else zero_lattice(k)
    for v in K.basis:
        if not member(L, v):
            return PropertyPVerdict(G0, True, DIRECT, {"vector": list(v)})
    return PropertyPVerdict(G0, False, DIRECT, None)


def property_p_fast_filter(subset: Iterable[GroupElement], G: Group) -> PropertyPVerdict | None:
    """Decide Property (P) by structural rules when one applies, else None.

    Rules in order: singletons always hold; a pair holds iff its cyclic
    subgroups meet nontrivially; three or more elements fail if some t*g
    (2 <= t <= ord g) is also in the set; the set fails if its size exceeds
    the rank it generates by 2, or exceeds by 2 the rank generated after
    dropping one element.  In a p-group with size = rank + 1 the set holds
    iff dropping any single element keeps the rank.
    """
    G0 = normalize_subset(subset, G)
    k = len(G0)
    if k == 1:
        return PropertyPVerdict(G0, True, SINGLETON)
    if k == 2:
        holds = not cyclic_intersection_trivial(G0[0], G0[1], G)
        return PropertyPVerdict(G0, holds, PAIR)
    members = set(G0)
    for g in G0:
        for t in range(2, G.order_of(g) + 1):
            tg = G.scale(t, g)
            if tg in members:
                return PropertyPVerdict(G0, False, MULTIPLE, {"g": list(g), "t": t})
    rank = subgroup_rank(G0, G)
    if k >= rank + 2:
        return PropertyPVerdict(G0, False, RANK_EXCESS, {"rank": rank})
    drops = [subgroup_rank(G0[:i] + G0[i + 1 :], G) for i in range(k)]
    for g, rg in zip(G0, drops):
        if k >= rg + 2:
            return PropertyPVerdict(G0, False, RANK_DROP, {"g": list(g), "rank": rg})
    exponent = reduce(math.lcm, (G.order_of(g) for g in G0), 1)
    if k == rank + 1 and is_prime_power(exponent):
        return PropertyPVerdict(G0, all(rg == rank for rg in drops), PGROUP, {"rank": rank})
    return None


def property_p(subset: Iterable[GroupElement], G: Group, fast_filters: bool = True) -> PropertyPVerdict:
    if fast_filters:
        verdict = property_p_fast_filter(subset, G)
        if verdict is not None:
            return verdict
    return has_property_p(subset, G)


def _verdict_fast(G: Group, subset: Subset) -> PropertyPVerdict:
    return property_p(subset, G, True)


def _verdict_direct(G: Group, subset: Subset) -> PropertyPVerdict:
    return has_property_p(subset, G)


def _transport_verdict(G: Group, v: PropertyPVerdict, image: Subset, perm) -> PropertyPVerdict:
    if perm is None:
        return v
    witness = v.witness
    if witness and "vector" in witness:
        pos = {map_element(G, perm, g): x for g, x in zip(v.subset, witness["vector"])}
        witness = {"vector": [pos[g] for g in image]}
    elif witness and "g" in witness:
        witness = dict(witness, g=list(map_element(G, perm, tuple(witness["g"]))))
    return PropertyPVerdict(image, v.holds, v.method, witness)


@dataclass(frozen=True)
class PropertyPCensus:
    group: Group
    verdicts: tuple[PropertyPVerdict, ...]

    @property
    def p_subsets(self) -> list[Subset]:
        return [v.subset for v in self.verdicts if v.holds]

    @property
    def total(self) -> int:
        return sum(v.holds for v in self.verdicts)

    @property
    def per_size(self) -> dict[int, int]:
        out = {i: 0 for i in range(1, support_bound(self.group) + 1)}
        for v in self.verdicts:
            if v.holds:
                out[len(v.subset)] += 1
        return out

    def method_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for v in self.verdicts:
            out[v.method] = out.get(v.method, 0) + 1
        return dict(sorted(out.items()))


def property_p_census(
    G: Group,
    *,
    fast_filters: bool = True,
    jobs: int = 1,
    symmetric: bool = False,
    budget: int | None = DEFAULT_BUDGET,
) -> PropertyPCensus:
    worker = _verdict_fast if fast_filters else _verdict_direct
    entries = sweep(G, worker, jobs=jobs, symmetric=symmetric, budget=budget)
    verdicts = [_transport_verdict(G, e.result, image, perm) for e in entries for image, perm in e.orbit]
    verdicts.sort(key=lambda v: (len(v.subset), v.subset))
    return PropertyPCensus(G, tuple(verdicts))


def min_sep_set_size(G: Group, **kw) -> tuple[int, dict[int, int]]:
    """Number of Property (P) supports of size <= rank + 1, with counts per size."""
    census = property_p_census(G, **kw)
    return census.total, census.per_size


# -- the minimal separating set -------------------------------------------------

@dataclass(frozen=True)
class DivisibilityFinding:
    subset: Subset
    minimal: int
    atom: ZsSequence

    def to_json(self) -> dict:
        return {"subset": [list(g) for g in self.subset], "minimal": self.minimal, "atom": atom_json(self.atom)}


def omega_atom(subset: Iterable[GroupElement], G: Group) -> tuple[ZsSequence, list[DivisibilityFinding]]:
    """The chosen full-support atom over a Property (P) support.

    g0 is the smallest element of the support.  Among atoms using every
    element, take those with the fewest copies of g0, then the
    lexicographically smallest multiplicity vector.  Also probes the claim
    that this minimal count divides the g0-count of every full-support
    atom; each violation is returned as a finding.
    """
    G0 = tuple(sorted(G.element(g) for g in subset))
    atoms = enumerate_atoms(SupportContext(G, G0))
    full = [A for A in atoms if all(A.mult)]
    if not full:
        raise AssertionError(f"no atom with full support over {format_subset(G0)} in {G}")
    best = min(full, key=lambda A: (A.mult[0], A.mult))
    m = best.mult[0]
    findings = [DivisibilityFinding(G0, m, A) for A in full if A.mult[0] % m]
    return best, findings


@dataclass(frozen=True)
class OmegaResult:
    group: Group
    atoms: tuple[ZsSequence, ...]
    findings: tuple[DivisibilityFinding, ...]


def build_omega(G: Group, census: PropertyPCensus | None = None, **kw) -> OmegaResult:
    if census is None:
        census = property_p_census(G, **kw)
    atoms, findings = [], []
    for G0 in census.p_subsets:
        A, f = omega_atom(G0, G)
        atoms.append(A)
        findings += f
    return OmegaResult(G, tuple(atoms), tuple(findings))


def build_min_sep_set(G: Group, **kw) -> list[ZsSequence]:
    return list(build_omega(G, **kw).atoms)


# -- separating-set checks -------------------------------------------------------

class _SupportIndex:
    """Sequences grouped by support, with cached kernel lattices."""

    def __init__(self, S: Iterable[ZsSequence], G: Group):
        self.G = G
        self.by_support: dict[frozenset, list[ZsSequence]] = {}
        for s in S:
            if s.group != G:
                raise ValueError(f"sequence over {s.group} passed for {G}")
            if not is_zero_sum(s):
                raise NotZeroSumError(f"{s.render_elements()} is not a zero-sum sequence")
            if s.length:
                self.by_support.setdefault(s.supp(), []).append(s)
        self._kernels: dict[Subset, IntLattice] = {}

    def kernel(self, G1: Subset) -> IntLattice:
        K = self._kernels.get(G1)
        if K is None:
            K = self._kernels[G1] = kernel_lattice(G1, self.G)
        return K

    def spans_kernel(self, G1: Subset, skip: ZsSequence | None = None) -> bool:
        vecs = []
        for k in range(1, len(G1) + 1):
            for sub in itertools.combinations(G1, k):
                for s in self.by_support.get(frozenset(sub), ()):
                    if s is not skip:
                        vecs.append(s.vector(G1))
        return lattice_from_generators(vecs, len(G1)).basis == self.kernel(G1).basis


def _universe(G: Group, within) -> Subset:
    if within is None:
        return G.elements
    return tuple(sorted({G.element(g) for g in within}))


def is_separating_set(S: Iterable[ZsSequence], G: Group, within: Iterable[GroupElement] | None = None) -> bool:
    """Does S span the kernel lattice of every support of size <= rank + 1?

    ``within`` restricts the check to supports inside a given element set.
    """
    index = _SupportIndex(S, G)
    U = _universe(G, within)
    bound = min(support_bound(G), len(U))
    for k in range(1, bound + 1):
        for G1 in itertools.combinations(U, k):
            if not index.spans_kernel(G1):
                return False
    return True


def first_redundant(S: Iterable[ZsSequence], G: Group, within: Iterable[GroupElement] | None = None):
    """An element of the separating set S whose removal keeps S separating, or None.

    Removing s only affects supports containing supp(s), so only those are
    rechecked.  S is assumed to be separating.
    """
    seqs = list(dict.fromkeys(S))
    index = _SupportIndex(seqs, G)
    U = _universe(G, within)
    bound = min(support_bound(G), len(U))
    for s in seqs:
        supp = tuple(sorted(s.supp()))
        others = [g for g in U if g not in s.supp()]
        needed = False
        for extra in range(0, bound - len(supp) + 1):
            for add in itertools.combinations(others, extra):
                if not index.spans_kernel(tuple(sorted(supp + add)), skip=s):
                    needed = True
                    break
            if needed:
                break
        if not needed:
            return s
    return None


def is_irredundant_separating_set(S: Iterable[ZsSequence], G: Group, within=None) -> bool:
    return first_redundant(S, G, within) is None


# -- inverse-structure and conjecture checks ---------------------------------------

@dataclass(frozen=True)
class InverseReport:
    group: Group
    beta_sep: int
    checked: int
    violations: tuple[dict, ...]

    @property
    def holds(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "group": str(self.group),
            "beta_sep": self.beta_sep,
            "checked": self.checked,
            "holds": self.holds,
            "violations": list(self.violations),
        }


def check_inverse_rank2(G: Group, result: BetaSepResult | None = None, **kw) -> InverseReport:
    """Structure of maximal separating atoms with at most three support elements.

    Expected: exactly three elements, none in the cyclic group of another,
    with orders {n2, n2, n1} (all n2 when n1 = n2).
    """
    if G.rank != 2:
        raise ValueError(f"check_inverse_rank2 needs a rank-2 group, got {G}")
    if result is None:
        result = beta_sep(G, **kw)
    n1, n2 = G.invariant_factors
    expected = sorted([n1, n2, n2])
    violations = []
    checked = 0
    for A in result.witnesses:
        supp = A.context.support
        if len(supp) > 3:
            continue
        checked += 1
        orders = sorted(G.order_of(g) for g in supp)
        problems = []
        if len(supp) != 3:
            problems.append(f"support has {len(supp)} elements")
        for g, h in itertools.permutations(supp, 2):
            if any(G.scale(t, h) == g for t in range(G.order_of(h))):
                problems.append(f"{format_element(g)} lies in <{format_element(h)}>")
        if len(supp) == 3 and orders != expected:
            problems.append(f"orders {orders}, expected {expected}")
        if problems:
            violations.append({"atom": atom_json(A), "orders": orders, "problems": problems})
    return InverseReport(G, result.value, checked, tuple(violations))


@dataclass(frozen=True)
class ConjectureReport:
    group: Group
    beta_sep: int
    expected_support: int
    checked: int
    counterexamples: tuple[dict, ...]

    @property
    def holds(self) -> bool:
        return not self.counterexamples

    def to_json(self) -> dict:
        return {
            "group": str(self.group),
            "beta_sep": self.beta_sep,
            "expected_support": self.expected_support,
            "checked": self.checked,
            "holds": self.holds,
            "counterexamples": list(self.counterexamples),
        }


def check_support_conjecture(G: Group, result: BetaSepResult | None = None, **kw) -> ConjectureReport:
    """Do all maximal separating atoms use exactly rank + 1 support elements?

    Post-hoc only: the census never prunes on this.  Every atom that does
    not is returned with its support, multiplicities and element orders.
    """
    if result is None:
        result = beta_sep(G, **kw)
    want = G.rank + 1
    bad = []
    for A in result.witnesses:
        supp = A.context.support
        if len(supp) != want:
            bad.append(
                {
                    "atom": atom_json(A),
                    "support_size": len(supp),
                    "orders": [G.order_of(g) for g in supp],
                    "rendered": A.render_elements(),
                }
            )
    return ConjectureReport(G, result.value, want, len(result.witnesses), tuple(bad))
