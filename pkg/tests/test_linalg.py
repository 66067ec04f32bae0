import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modadequacy.catalog import all_cases
from modadequacy.fieldarith import FieldError, field_create
from modadequacy.linalg import (
    LinalgError,
    Matrix,
    SpanAccumulator,
    block_diagonal,
    echelon,
    is_semisimple_matrix,
    kronecker,
    minimal_polynomial,
    nullspace,
    rank,
    solve_left_combination,
    span_insert,
)

FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3)]


def slow_rank(F, rows):
    """Row reduction with scalar field calls only."""
    rows = [list(map(int, r)) for r in rows]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


@st.composite
def matrices(draw, square=False, max_dim=5):
    F = field_create(*draw(st.sampled_from(FIELDS)))
    n = draw(st.integers(1, max_dim))
    m = n if square else draw(st.integers(1, max_dim))
    vals = draw(st.lists(st.integers(0, F.q - 1), min_size=n * m, max_size=n * m))
    return Matrix(F, np.array(vals, dtype=np.int64).reshape(n, m))


def test_rank_examples():
    F = field_create(5)
    assert rank(Matrix.identity(F, 4)) == 4
    assert rank(Matrix.zeros(F, 3)) == 0
    assert rank(Matrix.from_rows(F, [[1, 2], [2, 4]])) == 1


def test_nullspace_examples():
    F2 = field_create(2)
    assert nullspace(Matrix.identity(F2, 3)) == []
    assert len(nullspace(Matrix.zeros(F2, 3))) == 3
    (v,) = nullspace(Matrix.from_rows(F2, [[1, 1]]))
    assert v.tolist() == [1, 1]


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rank_matches_scalar_oracle(m):
    r = rank(m)
    assert r == slow_rank(m.field, m.a.tolist())
    assert r == rank(m.T)
    assert 0 <= r <= min(m.shape)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_nullspace_dimension_and_kernel(m):
    basis = nullspace(m)
    assert len(basis) == m.cols - rank(m)
    for v in basis:
        assert not m.field.vmatmul(m.a, v[:, None]).any()


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_rank_of_product_bounded(data):
    a = data.draw(matrices())
    F = a.field
    k = data.draw(st.integers(1, 5))
    vals = data.draw(st.lists(st.integers(0, F.q - 1), min_size=a.cols * k, max_size=a.cols * k))
    b = Matrix(F, np.array(vals, dtype=np.int64).reshape(a.cols, k))
    assert rank(a @ b) <= min(rank(a), rank(b))


@settings(max_examples=60, deadline=None)
@given(matrices(square=True))
def test_inverse_or_singular(m):
    n = m.rows
    if rank(m) == n:
        inv = m.inverse()
        assert (m @ inv).is_identity() and (inv @ m).is_identity()
    else:
        with pytest.raises(LinalgError):
            m.inverse()


def test_echelon_is_reduced():
    F = field_create(7)
    rng = np.random.default_rng(3)
    a = rng.integers(0, 7, size=(6, 9))
    rows, piv = echelon(F, a)
    assert piv == sorted(piv)
    for i, c in enumerate(piv):
        col = rows[:, c]
        assert col[i] == 1 and np.count_nonzero(col) == 1


def test_minimal_polynomial_examples():
    F3, F5 = field_create(3), field_create(5)
    assert minimal_polynomial(Matrix.identity(F3, 3)) == [2, 1]  # x - 1
    assert minimal_polynomial(Matrix.from_rows(F3, [[1, 1], [0, 1]])) == [1, 1, 1]  # (x-1)^2 = x^2 + x + 1 mod 3
    assert minimal_polynomial(Matrix.from_rows(F5, [[1, 0], [0, 2]])) == [2, 2, 1]  # (x-1)(x-2)
    with pytest.raises(LinalgError):
        minimal_polynomial(Matrix(F3, [[1, 2]]))


def _eval(m, poly):
    F, n = m.field, m.rows
    acc = Matrix.zeros(F, n)
    for c in reversed(poly):
        acc = acc @ m + Matrix.identity(F, n).scale(c)
    return acc


@settings(max_examples=50, deadline=None)
@given(matrices(square=True, max_dim=4))
def test_minimal_polynomial_annihilates_and_is_least(m):
    mu = minimal_polynomial(m)
    assert mu[-1] == 1
    assert not _eval(m, mu).a.any()
    # no monic polynomial of smaller degree annihilates m: I, m, ..., m^(d-1) independent
    d = len(mu) - 1
    powers = [Matrix.identity(m.field, m.rows)]
    for _ in range(d - 1):
        powers.append(powers[-1] @ m)
    stack = np.array([p.a.reshape(-1) for p in powers[:d]])
    assert rank(Matrix(m.field, stack)) == d


def test_semisimple_examples():
    F3, F5 = field_create(3), field_create(5)
    assert is_semisimple_matrix(Matrix.identity(F3, 2))
    assert not is_semisimple_matrix(Matrix.from_rows(F3, [[1, 1], [0, 1]]))
    assert is_semisimple_matrix(Matrix.from_rows(F5, [[0, 1], [4, 0]]))
    with pytest.raises(LinalgError):
        is_semisimple_matrix(Matrix.zeros(F5, 2))


def test_semisimple_iff_p_regular_on_catalog():
    for case in all_cases():
        G, V, p = case.group, case.rep, case.rep.field.p
        for i in range(G.order):
            assert is_semisimple_matrix(V.image(i)) == (G.element_order(i) % p != 0), (case.name, i)


def test_kronecker_examples():
    F = field_create(7)
    a = Matrix.from_rows(F, [[1, 2], [3, 4]])
    assert kronecker(a, Matrix.identity(F, 1)) == a
    assert kronecker(Matrix.identity(F, 2), Matrix.identity(F, 3)).is_identity()
    assert kronecker(Matrix.from_rows(F, [[1, 0], [0, 2]]), Matrix.from_rows(F, [[3]])).trace() == 2
    with pytest.raises(FieldError):
        kronecker(a, Matrix.identity(field_create(5), 1))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_kronecker_trace_and_mixed_product(data):
    a = data.draw(matrices(square=True, max_dim=3))
    F = a.field
    n = data.draw(st.integers(1, 3))
    vals = data.draw(st.lists(st.integers(0, F.q - 1), min_size=n * n, max_size=n * n))
    b = Matrix(F, np.array(vals, dtype=np.int64).reshape(n, n))
    assert kronecker(a, b).trace() == F.mul(a.trace(), b.trace())
    assert kronecker(a, b) @ kronecker(a, b) == kronecker(a @ a, b @ b)


def test_block_diagonal():
    F = field_create(3)
    m = block_diagonal(Matrix.from_rows(F, [[1]]), Matrix.from_rows(F, [[2, 1], [0, 1]]))
    assert m.a.tolist() == [[1, 0, 0], [0, 2, 1], [0, 0, 1]]


def test_span_insert_examples():
    F = field_create(3)
    acc = SpanAccumulator(F, 4)
    assert not span_insert(acc, Matrix.zeros(F, 2))
    assert span_insert(acc, Matrix.identity(F, 2)) and acc.rank == 1
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2), dtype=np.int64)
            e[i, j] = 1
            span_insert(acc, Matrix(F, e))
    assert acc.rank == 4 and acc.full
    with pytest.raises(LinalgError):
        span_insert(SpanAccumulator(F, 4), Matrix.identity(F, 3))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_span_rank_independent_of_order(data):
    F = field_create(*data.draw(st.sampled_from(FIELDS)))
    n = data.draw(st.integers(1, 3))
    k = data.draw(st.integers(1, 12))
    mats = [
        Matrix(F, np.array(data.draw(st.lists(st.integers(0, F.q - 1), min_size=n * n, max_size=n * n))).reshape(n, n))
        for _ in range(k)
    ]
    acc = SpanAccumulator(F, n * n)
    for m in mats:
        acc.insert(m)
    shuffled = list(mats)
    random.Random(data.draw(st.integers(0, 1000))).shuffle(shuffled)
    acc2 = SpanAccumulator(F, n * n)
    for m in shuffled:
        acc2.insert(m)
    stacked = Matrix(F, np.array([m.a.reshape(-1) for m in mats]))
    assert acc.rank == acc2.rank == rank(stacked)
    assert np.array_equal(acc.basis, acc2.basis)
    # merge of two halves equals the whole
    left, right = SpanAccumulator(F, n * n), SpanAccumulator(F, n * n)
    for m in mats[: k // 2]:
        left.insert(m)
    for m in mats[k // 2 :]:
        right.insert(m)
    left.merge(right)
    assert left.rank == acc.rank


def test_solve_left_combination():
    F = field_create(5)
    basis = np.array([[1, 0, 2], [0, 1, 3]])
    c = solve_left_combination(F, basis, np.array([2, 3, (4 + 9) % 5]))
    assert c.tolist() == [2, 3]
    assert solve_left_combination(F, basis, np.array([0, 0, 1])) is None
