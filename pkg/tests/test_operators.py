from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfkit.operators import (SparseOperator, decode, encode, integer_trace,
                               mixed_radix_strides, projector_product_trace)
from hopfkit.report import NonIntegerTrace
from hopfkit.scalars import FLOAT, RATIONAL

ALL_DIMS = (2, 3, 2)


def dense_local(op: SparseOperator) -> list[list[Fraction]]:
    n = op.local_dim
    out = [[Fraction(0)] * n for _ in range(n)]
    for r, c, v in op.entries():
        out[encode(r, op.dims)][encode(c, op.dims)] = Fraction(v)
    return out


def dense_global(op: SparseOperator, all_dims=ALL_DIMS) -> np.ndarray:
    """Reference embedding by explicit index bookkeeping (object array of Fractions)."""
    N = int(np.prod(all_dims))
    loc = dense_local(op)
    out = np.full((N, N), Fraction(0), dtype=object)
    for col in range(N):
        cd = decode(col, all_dims)
        lc = encode([cd[f] for f in op.support], op.dims)
        for lr in range(op.local_dim):
            v = loc[lr][lc]
            if v:
                rd = list(cd)
                for f, t in zip(op.support, decode(lr, op.dims)):
                    rd[f] = t
                out[encode(rd, all_dims), col] += v
    return out


@st.composite
def operators(draw, mode=RATIONAL):
    support = sorted(draw(st.sets(st.integers(0, len(ALL_DIMS) - 1), min_size=1, max_size=2)))
    dims = [ALL_DIMS[f] for f in support]
    n = int(np.prod(dims))
    columns = {}
    for col in range(n):
        out = {}
        for row in draw(st.lists(st.integers(0, n - 1), max_size=2, unique=True)):
            num = draw(st.integers(-3, 3))
            den = draw(st.integers(1, 3))
            out[decode(row, dims)] = Fraction(num, den)
        columns[decode(col, dims)] = out
    # hand the factors over in reverse order to exercise re-indexing
    rev = list(reversed(support))
    cols_rev = {tuple(reversed(k)): {tuple(reversed(r)): v for r, v in o.items()}
                for k, o in columns.items()}
    return SparseOperator.from_columns(rev, [ALL_DIMS[f] for f in rev], cols_rev, mode)


def test_codec_round_trip():
    dims = (3, 2, 4)
    assert list(mixed_radix_strides(dims)) == [8, 4, 1]
    for i in range(24):
        assert encode(decode(i, dims), dims) == i
    assert decode(5, dims) == (0, 1, 1)


def test_identity_and_scalar():
    I = SparseOperator.identity()
    A = SparseOperator.from_columns([1], [3], {(0,): {(1,): 1}, (1,): {(0,): 1}, (2,): {(2,): 2}})
    assert (I @ A).same_as(A) and (A @ I).same_as(A)
    assert SparseOperator.scalar(Fraction(1, 2)).scaled(2).same_as(I)


def test_support_must_ascend():
    with pytest.raises(ValueError):
        SparseOperator((1, 0), (2, 2), np.eye(4))


def test_entries_sorted_and_reduced():
    A = SparseOperator.from_columns([0], [2], {(0,): {(0,): Fraction(2, 4)}, (1,): {(0,): 1}})
    assert A.entries() == [((0,), (0,), Fraction(1, 2)), ((0,), (1,), Fraction(1))]
    assert A.denom == 2


def test_diagonal_and_zero():
    D = SparseOperator.from_columns([2], [2], {(0,): {(0,): 1}, (1,): {}})
    assert D.is_diagonal() and not D.is_zero()
    assert (D - D).is_zero()


@settings(max_examples=40, deadline=None)
@given(operators(), operators())
def test_algebra_matches_dense(a, b):
    A, B = dense_global(a), dense_global(b)
    assert np.array_equal(dense_global(a @ b), A.dot(B))
    assert np.array_equal(dense_global(a + b), A + B)
    assert np.array_equal(dense_global(a - b), A - B)
    assert np.array_equal(dense_global(a.scaled(Fraction(-2, 3))), A * Fraction(-2, 3))
    assert (a @ b - b @ a).same_as(a.commutator(b))


@settings(max_examples=40, deadline=None)
@given(operators())
def test_embed_preserves_operator(a):
    full = a.embed((0, 1, 2), ALL_DIMS)
    assert np.array_equal(dense_global(full), dense_global(a))
    dense = a.to_matrix(ALL_DIMS).toarray()
    assert np.allclose(dense, dense_global(a).astype(float))


@settings(max_examples=40, deadline=None)
@given(operators(), st.data())
def test_apply_matches_dense(a, data):
    N = int(np.prod(ALL_DIMS))
    vec = {i: Fraction(data.draw(st.integers(-2, 2))) for i in range(N)}
    vec = {k: v for k, v in vec.items() if v}
    got = a.apply(vec, ALL_DIMS)
    dense = dense_global(a).dot(np.array([vec.get(i, Fraction(0)) for i in range(N)], dtype=object))
    assert got == {i: v for i, v in enumerate(dense) if v != 0}


@settings(max_examples=40, deadline=None)
@given(st.lists(operators(), min_size=1, max_size=3), st.sampled_from([1, 5, 1 << 16]))
def test_streamed_trace_exact(ops, block):
    prod = np.identity(int(np.prod(ALL_DIMS)), dtype=object) * Fraction(1)
    for op in ops:
        prod = prod.dot(dense_global(op))
    expected = sum(prod[i, i] for i in range(len(prod)))
    got = projector_product_trace(ops, ALL_DIMS, RATIONAL, block=block, order=False)
    assert got == expected


@settings(max_examples=25, deadline=None)
@given(st.lists(operators(), min_size=1, max_size=3))
def test_streamed_trace_float(ops):
    fops = [SparseOperator(o.support, o.dims, o.num.astype(float) / float(o.denom), 1, FLOAT)
            for o in ops]
    prod = np.identity(int(np.prod(ALL_DIMS)))
    for op in fops:
        prod = prod @ op.to_matrix(ALL_DIMS).toarray()
    got = projector_product_trace(fops, ALL_DIMS, FLOAT, block=7, order=False)
    assert abs(got - np.trace(prod)) < 1e-9


def test_trace_of_large_entries_reconstructed_exactly():
    # 1-norms near 2^40 force several moduli; the exact trace is 2 * (2^40 + 1)^2
    big = 2**40 + 1
    A = SparseOperator.from_columns([0], [2], {(0,): {(0,): big}, (1,): {(1,): -big}})
    got = projector_product_trace([A, A], (2,), RATIONAL, order=False)
    assert got == 2 * big * big


def test_commuting_projectors_reorder():
    P = SparseOperator.from_columns([0], [2], {(0,): {(0,): 1}, (1,): {}})
    Q = SparseOperator.from_columns([0, 1], [2, 3], {
        (a, b): {(a, (b + 1) % 3): Fraction(1, 3), (a, b): Fraction(1, 3),
                 (a, (b + 2) % 3): Fraction(1, 3)} for a in range(2) for b in range(3)})
    t1 = projector_product_trace([P, Q], ALL_DIMS, RATIONAL, order=True)
    t2 = projector_product_trace([P, Q], ALL_DIMS, RATIONAL, order=False)
    assert t1 == t2 == 2  # rank 1 on factor 0, rank 1 on factor 1, free factor of dim 2
    assert integer_trace(t1, RATIONAL, 12) == 2


def test_integer_trace_checks():
    with pytest.raises(NonIntegerTrace):
        integer_trace(Fraction(3, 2), RATIONAL, 10)
    with pytest.raises(NonIntegerTrace):
        integer_trace(Fraction(11), RATIONAL, 10)
    assert integer_trace(3.0000001, FLOAT, 10) == 3
    with pytest.raises(NonIntegerTrace):
        integer_trace(3.01, FLOAT, 10)


def test_overflow_guard():
    big = 2**40
    A = SparseOperator.from_columns([0], [2], {(0,): {(0,): big, (1,): big}, (1,): {(1,): big}})
    with pytest.raises(OverflowError):
        A @ A
