import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from groups import group_and_subset
from zssep.group import Group
from zssep.lattice import (
    DimensionError,
    IntLattice,
    contains_lattice,
    embed,
    hnf,
    kernel_lattice,
    lattice_equal,
    lattice_from_generators,
    lattice_sum,
    member,
    smith_diagonal,
    zero_lattice,
)
from zssep.sequences import SupportContext, enumerate_atoms

vectors3 = st.lists(st.lists(st.integers(-10, 10), min_size=3, max_size=3), min_size=1, max_size=5)


def test_examples():
    assert lattice_from_generators([], 2).basis == ()
    L = lattice_from_generators([(2, 0), (0, 2), (1, 1)], 2)
    assert L.index() == 2
    assert all(member(L, v) == ((v[0] + v[1]) % 2 == 0) for v in itertools.product(range(-4, 5), repeat=2))
    four = lattice_from_generators([(8, 0), (0, 8), (6, 2), (4, 4)], 2)
    assert member(four, (2, 6))
    assert not member(lattice_from_generators([(2, 0, 0), (0, 2, 0), (0, 0, 2)], 3), (1, 1, 1))
    assert member(L, (0, 0)) and member(zero_lattice(3), (0, 0, 0))
    assert not member(zero_lattice(3), (0, 1, 0))


def test_sum_examples():
    L = lattice_from_generators([(3, 1), (0, 5)], 2)
    assert lattice_equal(lattice_sum(L, zero_lattice(2)), L)
    parts = [lattice_from_generators([v], 2) for v in [(2, 0), (0, 2), (1, 1)]]
    assert lattice_sum(*parts).index() == 2
    assert lattice_equal(lattice_from_generators([(1, 0), (0, 1)], 2), lattice_from_generators([(1, 1), (0, 1)], 2))


def test_dimension_checks():
    with pytest.raises(DimensionError):
        lattice_from_generators([(1, 2)], 3)
    with pytest.raises(DimensionError):
        lattice_sum(zero_lattice(2), zero_lattice(3))


@given(vectors3, st.randoms(use_true_random=False))
def test_hnf_is_canonical(vecs, rnd):
    dim = 3
    base = hnf(vecs, dim)
    # permute, negate and apply unimodular row operations
    mixed = [list(v) for v in vecs]
    rnd.shuffle(mixed)
    mixed = [[-x for x in v] if rnd.random() < 0.5 else v for v in mixed]
    for _ in range(6):
        if len(mixed) < 2:
            break
        i, j = rnd.sample(range(len(mixed)), 2)
        c = rnd.randint(-3, 3)
        mixed[i] = [a + c * b for a, b in zip(mixed[i], mixed[j])]
    assert hnf(mixed, dim) == base


@given(vectors3)
def test_hnf_shape(vecs):
    B = hnf(vecs, 3)
    L = IntLattice(3, B)
    pivots = L.pivots
    assert list(pivots) == sorted(set(pivots))
    for i, (row, c) in enumerate(zip(B, pivots)):
        assert row[c] > 0
        assert all(B[j][c] in range(row[c]) for j in range(i))
    for v in vecs:
        assert member(L, v)


def test_membership_against_rational_oracle():
    rng = random.Random(20240601)
    for _ in range(1000):
        basis, target = oracles.random_lattice_instance(rng)
        L = lattice_from_generators(basis, 3)
        assert member(L, target) == oracles.lattice_member(basis, target), (basis, target)


@given(vectors3, vectors3, vectors3)
def test_sum_laws(a, b, c):
    A, B, C = (lattice_from_generators(x, 3) for x in (a, b, c))
    assert lattice_sum(A, B) == lattice_sum(B, A)
    assert lattice_sum(lattice_sum(A, B), C) == lattice_sum(A, lattice_sum(B, C))
    assert contains_lattice(lattice_sum(A, B), A)
    assert all(member(lattice_sum(A, B), v) for v in A.basis)


def test_embed():
    L = lattice_from_generators([(2, 1)], 2)
    E = embed(L, [0, 2], 3)
    assert E.basis == ((2, 0, 1),)


def test_kernel_examples():
    for n in range(2, 10):
        K = kernel_lattice(SupportContext(Group((n,)), ((1,),)))
        assert K.basis == ((n,),)
    C33 = Group((3, 3))
    # order e1, e2, e1+e2; the lattice is compared, the basis convention may differ
    K = kernel_lattice([(1, 0), (0, 1), (1, 1)], C33)
    assert lattice_equal(K, lattice_from_generators([(3, 0, 0), (0, 3, 0), (2, 2, 1)], 3))
    assert K.index() == 9


def test_kernel_of_example_support_is_generated_by_atoms():
    ctx = SupportContext(Group((4, 8)), ((1, 1), (3, 1)))
    atoms = lattice_from_generators([(8, 0), (0, 8), (6, 2), (4, 4), (2, 6)], 2)
    assert lattice_equal(kernel_lattice(ctx), atoms)


def _scan_box(G, support, K, radius):
    for v in itertools.product(range(-radius, radius + 1), repeat=len(support)):
        assert member(K, v) == oracles.kernel_member(G.invariant_factors, support, v), v


@given(group_and_subset(max_order=72, max_size=3))
def test_kernel_matches_residue_scan(case):
    G, subset = case
    K = kernel_lattice(list(subset), G)
    assert K.is_full_rank()
    assert K.index() == oracles.kernel_index(G.invariant_factors, subset)
    _scan_box(G, subset, K, radius=4 if len(subset) == 3 else 8)


@given(group_and_subset(max_order=16, max_size=3))
def test_atoms_generate_kernel(case):
    G, subset = case
    ctx = SupportContext(G, subset)
    atoms = lattice_from_generators([A.mult for A in enumerate_atoms(ctx)], len(subset))
    assert lattice_equal(atoms, kernel_lattice(ctx))


def test_smith_diagonal():
    assert smith_diagonal([(2, 0), (0, 3)]) == [1, 6]
    assert smith_diagonal([(2, 4), (6, 8)]) == [2, 4]


def test_json_roundtrip():
    L = lattice_from_generators([(3, 1, 0), (0, 4, 2)], 3)
    assert IntLattice.from_json(L.to_json()) == L
