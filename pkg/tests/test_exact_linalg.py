import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posheaf.exact_linalg import (
    GF,
    QQ,
    ZZ,
    KindMismatchError,
    LinalgError,
    Matrix,
    ShapeError,
    compose,
    kernel_basis,
    rank,
    smith_normal_form,
)


def M(ring, rows):
    return Matrix.from_rows(ring, rows)


class TestRank:
    def test_identity(self):
        assert rank(Matrix.identity(QQ, 2)) == 2

    def test_empty(self):
        assert rank(Matrix.zeros(QQ, 0, 5)) == 0
        assert rank(Matrix.zeros(QQ, 5, 0)) == 0

    def test_dependent_rows(self):
        m = M(QQ, [[1, 2], [2, 4]])
        # determinant 1*4 - 2*2 = 0, so rank < 2
        assert m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0] == 0
        assert rank(m) == 1

    def test_gf(self):
        assert rank(M(GF(7), [[1, 2], [2, 4]])) == 1
        assert rank(M(GF(2), [[1, 1], [1, 0]])) == 2

    def test_rank_drop_mod_p(self):
        # invertible over Q, singular mod 5
        m = [[1, 2], [3, 11]]
        assert rank(M(QQ, m)) == 2
        assert rank(M(GF(5), m)) == 1

    def test_integer_matrix_rejected(self):
        with pytest.raises(KindMismatchError):
            rank(Matrix.identity(ZZ, 2))


class TestKernel:
    def test_single_relation(self):
        (v,) = kernel_basis(M(QQ, [[1, 1]]))
        assert v[0] == -v[1] != 0

    def test_identity_kernel_empty(self):
        assert kernel_basis(Matrix.identity(QQ, 3)) == []

    def test_substitute_back(self):
        m = M(QQ, [[1, 2], [2, 4]])
        basis = kernel_basis(m)
        assert len(basis) == 1
        assert all(x == 0 for x in m.apply(basis[0]))

    def test_zero_rows(self):
        basis = kernel_basis(Matrix.zeros(QQ, 0, 3))
        assert len(basis) == 3


class TestSmith:
    def test_diag_2_3(self):
        sf = smith_normal_form(M(ZZ, [[2, 0], [0, 3]]))
        assert sf.diagonal == (1, 6)

    def test_zero(self):
        sf = smith_normal_form(Matrix.zeros(ZZ, 3, 4))
        assert sf.rank == 0 and sf.diagonal == ()

    def test_identity(self):
        sf = smith_normal_form(Matrix.identity(ZZ, 4))
        assert sf.diagonal == (1, 1, 1, 1)

    def test_torsion(self):
        sf = smith_normal_form(M(ZZ, [[2, 0], [0, 4]]))
        assert sf.diagonal == (2, 4)
        assert sf.torsion == (2, 4)

    def test_requires_integers(self):
        with pytest.raises(KindMismatchError):
            smith_normal_form(Matrix.identity(QQ, 2))


class TestCompose:
    def test_identity_neutral(self):
        m = M(QQ, [[1, 2], [3, 4]])
        assert compose(Matrix.identity(QQ, 2), m) == m
        assert compose(m, Matrix.identity(QQ, 2)) == m

    def test_one_by_one(self):
        assert compose(M(QQ, [[2]]), M(QQ, [[3]])) == M(QQ, [[6]])

    def test_involution(self):
        swap = M(QQ, [[0, 1], [1, 0]])
        assert compose(swap, swap) == Matrix.identity(QQ, 2)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            compose(Matrix.zeros(QQ, 2, 3), Matrix.zeros(QQ, 2, 3))

    def test_kind_mismatch(self):
        with pytest.raises(KindMismatchError):
            compose(Matrix.identity(QQ, 2), Matrix.identity(GF(7), 2))

    def test_empty_shapes(self):
        out = compose(Matrix.zeros(QQ, 2, 0), Matrix.zeros(QQ, 0, 3))
        assert (out.rows, out.cols) == (2, 3)
        assert out.is_zero()


small_int_matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-6, 6), min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        )
    )
)


@given(small_int_matrices)
@settings(max_examples=60, deadline=None)
def test_rank_matches_smith_rank(rows):
    assert rank(M(QQ, rows)) == smith_normal_form(M(ZZ, rows)).rank


@given(small_int_matrices)
@settings(max_examples=60, deadline=None)
def test_kernel_vectors_in_kernel_and_independent(rows):
    m = M(QQ, rows)
    basis = kernel_basis(m)
    assert len(basis) == m.cols - rank(m)
    for v in basis:
        assert all(x == 0 for x in m.apply(v))
    if basis:
        assembled = Matrix(QQ, len(basis), m.cols, basis)
        assert rank(assembled) == len(basis)


def _random_unimodular(rng, n):
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            f = rng.choice([-2, -1, 1, 2])
            m[i] = [x + f * y for x, y in zip(m[i], m[j])]
    return Matrix.from_rows(ZZ, m)


def test_smith_invariant_under_unimodular_ops():
    rng = random.Random(99)
    for _ in range(25):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        m = M(ZZ, [[rng.randint(-5, 5) for _ in range(c)] for _ in range(r)])
        u = _random_unimodular(rng, r)
        v = _random_unimodular(rng, c)
        assert smith_normal_form(compose(compose(u, m), v)) == smith_normal_form(m)


def test_primality_checked():
    with pytest.raises(LinalgError):
        GF(6)
    with pytest.raises(LinalgError):
        GF(2**31 + 11)
    assert GF(2).p == 2


def test_rational_entries_stay_reduced():
    m = M(QQ, [["2/4", "-6/4"]])
    assert str(m[0, 0]) == "1/2"
    assert str(m[0, 1]) == "-3/2"


def test_large_sparse_rank_paths_agree():
    # force both the dense and the sparse/numpy code paths on one input
    rng = random.Random(5)
    rows = [[rng.choice([0, 0, 0, 1, -1, 2]) for _ in range(40)] for _ in range(40)]
    from posheaf import exact_linalg as xl

    mq = M(QQ, rows)
    m7 = M(GF(7), rows)
    dense_q, dense_7 = rank(mq), rank(m7)
    assert xl._rank_sparse_field(mq) == dense_q
    assert xl._rank_gf_numpy(m7) == dense_7
