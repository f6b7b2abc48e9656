"""Two worked examples, checked end to end.

``non_transfer_fixture``: in C3+C3 over the support {e1, e1+e2, e2}, the
monoid generated by (3,0,0), (0,3,0), (0,0,3), (1,2,1) is separating, yet the
zero-sum vector (2,1,2) is not a nonnegative combination of the generators
although (2,4,2) = 2*(1,2,1) is.

``redundant_sreg_fixture``: in C4+C8 over {e1+e2, 3e1+e2}, the atoms are
x1^8, x2^8, x1^6x2^2, x1^4x2^4, x1^2x2^6; all five are separating, yet
the first four already span the kernel lattice, so the last one can be
dropped from S_reg.
"""
from __future__ import annotations

import itertools
from typing import Sequence

from .group import Group
from .lattice import kernel_lattice, lattice_equal, lattice_from_generators, member
from .separating import is_separating_set, separating_atoms, sreg_on
from .sequences import SupportContext, ZsSequence, enumerate_atoms, sigma


def nonnegative_decomposition(target: Sequence[int], generators: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """Coefficients c >= 0 with sum c_i * generators[i] = target, or None.

    Generators must be nonzero and nonnegative, so each coefficient is bounded
    by the target and the search is exhaustive.
    """
    caps = []
    for gen in generators:
        if not any(gen) or min(gen) < 0:
            raise ValueError("generators must be nonzero and nonnegative")
        caps.append(min(t // x for t, x in zip(target, gen) if x))
    for coeffs in itertools.product(*(range(c + 1) for c in caps)):
        total = [sum(c * gen[j] for c, gen in zip(coeffs, generators)) for j in range(len(target))]
        if total == list(target):
            return coeffs
    return None


def non_transfer_fixture() -> dict:
    G = Group((3, 3))
    support = ((1, 0), (1, 1), (0, 1))
    ctx = SupportContext(G, support)
    # exponent vectors below follow the listed order e1, e1+e2, e2
    order = [ctx.position(g) for g in support]

    def seq(vec):
        mult = [0] * 3
        for pos, m in zip(order, vec):
            mult[pos] = m
        return ZsSequence(ctx, mult)

    gens = [(3, 0, 0), (0, 3, 0), (0, 0, 3), (1, 2, 1)]
    H = [seq(v) for v in gens]
    zero = G.zero
    return {
        "group": str(G),
        "support": [list(g) for g in support],
        "generators_zero_sum": all(sigma(s) == zero for s in H),
        "separating_on_support": is_separating_set(H, G, within=support),
        "square_zero_sum": sigma(seq((2, 4, 2))) == zero,
        "square_decomposition": nonnegative_decomposition((2, 4, 2), gens),
        "quotient_zero_sum": sigma(seq((2, 1, 2))) == zero,
        "quotient_decomposition": nonnegative_decomposition((2, 1, 2), gens),
    }


def redundant_sreg_fixture() -> dict:
    G = Group((4, 8))
    support = ((1, 1), (3, 1))
    ctx = SupportContext(G, support)
    atoms = enumerate_atoms(ctx)
    table = separating_atoms(ctx)
    listed = [(8, 0), (0, 8), (6, 2), (4, 4), (2, 6)]
    first_four = lattice_from_generators(listed[:4], 2)
    sreg = sreg_on(support, G)
    last = ZsSequence(ctx, (2, 6))
    trimmed = [s for s in sreg if s != last]
    return {
        "group": str(G),
        "support": [list(g) for g in support],
        "atoms": sorted(A.mult for A in atoms),
        "atoms_match": sorted(A.mult for A in atoms) == sorted(listed),
        "all_separating": all(table.separating_flags),
        "first_four_contain_last": member(first_four, (2, 6)),
        "first_four_span_kernel": lattice_equal(first_four, kernel_lattice(ctx)),
        "sreg_on_support": [A.mult for A in sreg],
        "sreg_separating": is_separating_set(sreg, G, within=support),
        "trimmed_separating": is_separating_set(trimmed, G, within=support),
    }


def fixture_checks() -> dict[str, bool]:
    """Pass/fail flags for both fixtures."""
    a = non_transfer_fixture()
    b = redundant_sreg_fixture()
    return {
        "non_transfer.generators_zero_sum": a["generators_zero_sum"],
        "non_transfer.separating_on_support": a["separating_on_support"],
        "non_transfer.square_decomposes": a["square_zero_sum"] and a["square_decomposition"] is not None,
        "non_transfer.quotient_does_not_decompose": a["quotient_zero_sum"] and a["quotient_decomposition"] is None,
        "redundant_sreg.atoms_match": b["atoms_match"],
        "redundant_sreg.all_separating": b["all_separating"],
        "redundant_sreg.first_four_contain_last": b["first_four_contain_last"],
        "redundant_sreg.trimmed_separating": b["trimmed_separating"],
    }
