import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from latinquot import (
    Line,
    Matrix2,
    Matrix3,
    PairSet,
    Partition,
    PreconditionError,
    enumerate_latin_squares,
    is_latin,
    is_partial_s_latin,
    is_permutation,
    latin_from_table,
    line_sum,
    line_sums,
    quotient,
    triple_quotient,
)

from conftest import EXAMPLE_M, cyclic_latin, random_latin


def test_line_sum_examples(example_matrix):
    I = Matrix2([[1, 0], [0, 1]])
    for axis in (1, 2):
        for fixed in (1, 2):
            assert line_sum(I, Line(axis, (fixed,))) == 1
    # row 1 of the example runs along the column index
    assert line_sum(example_matrix, Line(2, (1,))) == 0 + 3 + 3 + 1
    Z = Matrix3.zeros((3, 3, 3))
    assert all((line_sums(Z, t) == 0).all() for t in (1, 2, 3))


def test_quotient_examples(example_matrix, halves):
    assert quotient(example_matrix, 1, halves).tolist() == [[5, 5, 7, 1], [3, 4, 5, 1]]
    assert quotient(example_matrix, 2, halves).tolist() == [[3, 4], [7, 4], [2, 1], [5, 5]]
    a = quotient(quotient(example_matrix, 1, halves), 2, halves)
    b = quotient(quotient(example_matrix, 2, halves), 1, halves)
    assert a == b and a.tolist() == [[10, 8], [7, 6]]
    assert quotient(example_matrix, 1, Partition.singletons(4)) == example_matrix


def test_triple_quotient_examples():
    L2 = cyclic_latin(2)
    assert triple_quotient(L2, Partition.singletons(2)) == L2
    assert triple_quotient(L2, Partition.parse("1,2")).tolist() == [[[4]]]


def test_predicates():
    assert is_latin(cyclic_latin(3))
    assert not is_latin(Matrix3(np.ones((2, 2, 2), dtype=int).tolist()))
    assert is_latin(Matrix3([[[1]]]))
    assert is_partial_s_latin(Matrix3.zeros((3, 3, 3)), PairSet.empty(3))
    assert is_partial_s_latin(cyclic_latin(4), PairSet.full(4))
    broken = cyclic_latin(2).replace((1, 1, 1), 0)
    assert not is_partial_s_latin(broken, PairSet.full(2))
    assert is_partial_s_latin(broken, PairSet(2, frozenset({(1, 2), (2, 1), (2, 2)})))
    assert is_permutation(Matrix2(np.eye(3, dtype=int).tolist()))
    assert not is_permutation(Matrix2([[1, 1], [1, 1]]))
    assert is_permutation(Matrix2([[0, 1], [1, 0]]))


def test_latin_enumeration_counts():
    assert len(list(enumerate_latin_squares(3))) == 12
    assert len(list(enumerate_latin_squares(4))) == 576
    assert all(is_latin(latin_from_table(t)) for t in enumerate_latin_squares(3))


def test_random_latin_is_latin():
    rng = random.Random(1)
    for n in range(1, 9):
        assert is_latin(random_latin(n, rng))


def test_rejects_bad_input():
    with pytest.raises(PreconditionError):
        Matrix2([[1, -1]])
    with pytest.raises(PreconditionError):
        quotient(Matrix2(EXAMPLE_M), 1, Partition.parse("1,2|3"))
    with pytest.raises(PreconditionError):
        Partition.parse("1,2|2,3")
    with pytest.raises(PreconditionError):
        PairSet(2, frozenset({(3, 1)}))


def test_matrices_are_immutable(example_matrix):
    with pytest.raises(ValueError):
        example_matrix.array[0, 0] = 9


def test_partition_helpers():
    s = Partition.canonical([1, 2, 2])
    assert s.blocks == ((1,), (2, 3), (4, 5))
    assert s.block_of(4) == 3 and s.n == 5 and s.k == 3
    assert Partition.parse(str(s)) == s
    S = PairSet(2, frozenset({(1, 2)}))
    assert S.blow_up(Partition.canonical([1, 2])).pairs == {(1, 2), (1, 3)}


# ---- properties -----------------------------------------------------------

@st.composite
def matrix_and_partition(draw, ndim=None):
    ndim = ndim or draw(st.sampled_from([2, 3]))
    sizes = draw(st.lists(st.integers(1, 2), min_size=1, max_size=3))
    n = sum(sizes)
    perm = draw(st.permutations(range(1, n + 1)))
    blocks, start = [], 0
    for s in sizes:
        blocks.append(tuple(sorted(perm[start:start + s])))
        start += s
    sigma = Partition(tuple(blocks))
    vals = draw(st.lists(st.integers(0, 5), min_size=n ** ndim, max_size=n ** ndim))
    arr = np.array(vals, dtype=object).reshape((n,) * ndim)
    M = Matrix2(arr.tolist()) if ndim == 2 else Matrix3(arr.tolist())
    return M, sigma


@settings(max_examples=80, deadline=None)
@given(matrix_and_partition())
def test_quotients_commute_and_preserve_total(data):
    M, sigma = data
    axes = range(1, M.ndim + 1)
    for a in axes:
        Q = quotient(M, a, sigma)
        assert Q.total() == M.total()
        for b in axes:
            if a != b:
                assert quotient(Q, b, sigma) == quotient(quotient(M, b, sigma), a, sigma)


def brute_quotient(M, axis, sigma):
    # independent summation over explicit index tuples
    dims = list(M.dims)
    dims[axis - 1] = sigma.k
    out = np.zeros(dims, dtype=object)
    for idx in np.ndindex(*M.dims):
        tgt = list(idx)
        tgt[axis - 1] = sigma.block_of(idx[axis - 1] + 1) - 1
        out[tuple(tgt)] += M.array[idx]
    return out.tolist()


@settings(max_examples=60, deadline=None)
@given(matrix_and_partition())
def test_quotient_matches_brute_force(data):
    M, sigma = data
    for axis in range(1, M.ndim + 1):
        assert quotient(M, axis, sigma).tolist() == brute_quotient(M, axis, sigma)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32), st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_quotient_of_latin_has_product_line_sums(seed, sizes):
    n = sum(sizes)
    L = random_latin(n, random.Random(seed))
    sigma = Partition.canonical(sizes)
    M = triple_quotient(L, sigma)
    expect = np.array([[a * b for b in sizes] for a in sizes], dtype=object)
    for t in (1, 2, 3):
        assert (line_sums(M, t) == expect).all()
