import pytest

import oracles
from zssep.group import Group, d_star
from zssep.sequences import ZsSequence, davenport_group, is_zero_sum_free
from zssep.zerosumfree import max_zero_sum_free_length, zero_sum_free_of_length

KNOWN = {(6,): 6, (2, 4): 5, (3, 3): 5, (2, 2, 2): 4, (4, 8): 11, (2, 2, 2, 2): 5, (3, 6): 8}


@pytest.mark.parametrize("factors, D", sorted(KNOWN.items()), ids=str)
def test_davenport_values(factors, D):
    G = Group(factors)
    assert davenport_group(G) == D == d_star(G)


@pytest.mark.parametrize("factors", [(2,), (5,), (2, 2), (2, 4), (3, 3), (2, 2, 2), (6,)], ids=str)
def test_search_matches_multiset_scan(factors):
    assert max_zero_sum_free_length(Group(factors)).length == oracles.max_zero_sum_free_length(factors)


@pytest.mark.parametrize("factors", [(2, 4), (3, 3), (2, 6), (2, 2, 2)], ids=str)
def test_backends_agree(factors):
    G = Group(factors)
    a = max_zero_sum_free_length(G, backend="numba")
    b = max_zero_sum_free_length(G, backend="python")
    assert a.length == b.length


@pytest.mark.parametrize("factors", [(4, 8), (2, 2, 2, 2), (3, 6)], ids=str)
def test_witness_is_zero_sum_free(factors):
    G = Group(factors)
    res = max_zero_sum_free_length(G)
    assert len(res.witness) == res.length
    assert is_zero_sum_free(ZsSequence.from_elements(G, res.witness))
    assert zero_sum_free_of_length(G, res.length + 1) is None


def test_python_backend_handles_larger_groups():
    G = Group((72,))
    assert max_zero_sum_free_length(G).length == 71


def test_backend_validation():
    with pytest.raises(ValueError):
        zero_sum_free_of_length(Group((72,)), 3, backend="numba")
    with pytest.raises(ValueError):
        zero_sum_free_of_length(Group((4,)), 3, backend="fortran")
