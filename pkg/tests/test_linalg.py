import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from sympy import GF as SGF
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, settings, strategies as st

from tensordec.errors import DomainError
from tensordec.fields import GF, QQ, extension_field
from tensordec.linalg import (
    LinearSubspace,
    Matrix,
    determinant,
    intersect_row_spaces,
    inverse,
    kernel,
    left_kernel,
    minors,
    rank,
    rref,
    solve_linear,
)

P = 101


def _matrices(p=P, max_dim=7):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=m, max_size=m
            )
        )
    )


def _low_rank(rng, m, n, r, p):
    A = np.array([[rng.randrange(p) for _ in range(r)] for _ in range(m)], dtype=object)
    B = np.array([[rng.randrange(p) for _ in range(n)] for _ in range(r)], dtype=object)
    return ((A.dot(B)) % p).tolist()


@settings(max_examples=100, deadline=None)
@given(_matrices())
def test_rank_matches_sympy(rows):
    K = GF(P)
    M = Matrix(K, rows)
    dm = DomainMatrix([[SGF(P)(x) for x in r] for r in rows], (len(rows), len(rows[0])), SGF(P))
    expected = dm.rank()
    assert rank(M) == expected


def test_low_rank_products():
    rng = random.Random(4)
    K = GF(32003)
    for _ in range(30):
        m, n = rng.randint(2, 12), rng.randint(2, 12)
        r = rng.randint(1, min(m, n))
        rows = _low_rank(rng, m, n, r, 32003)
        assert rank(Matrix(K, rows)) <= r
    # generic products attain the bound
    hits = sum(rank(Matrix(K, _low_rank(rng, 8, 9, 5, 32003))) == 5 for _ in range(20))
    assert hits == 20


@settings(max_examples=100, deadline=None)
@given(_matrices())
def test_kernel_is_kernel(rows):
    K = GF(P)
    M = Matrix(K, rows)
    N = kernel(M)
    assert N.nrows == M.ncols - rank(M)
    for v in N.rows:
        assert all(K.dot(r, v) == 0 for r in rows)
    L = left_kernel(M)
    for u in L.rows:
        col = [K.sum(K.mul(u[i], rows[i][j]) for i in range(M.nrows)) for j in range(M.ncols)]
        assert all(c == 0 for c in col)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.randoms(use_true_random=False))
def test_determinant_and_inverse(n, rnd):
    K = GF(P)
    rows = [[rnd.randrange(P) for _ in range(n)] for _ in range(n)]
    det = determinant(Matrix(K, rows))
    assert det == int(sympy.Matrix(rows).det()) % P
    if det:
        Inv = inverse(Matrix(K, rows))
        prod = (np.array(rows, dtype=object).dot(np.array(Inv.rows, dtype=object))) % P
        assert prod.tolist() == np.eye(n, dtype=int).tolist()


def test_rational_rref_matches_sympy():
    rng = random.Random(1)
    for _ in range(30):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        rows = [[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)] for _ in range(m)]
        R = rref(Matrix(QQ, rows))
        S, piv = sympy.Matrix(rows).rref()
        assert R.rank == len(piv)
        assert tuple(R.pivots) == tuple(piv)
        for i in range(R.rank):
            assert [Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in S.row(i)] == list(R.R.rows[i])


def test_extension_rank():
    E = extension_field(7, 2)
    g = E.generator()
    rows = [[E.one, g], [g, E.mul(g, g)]]
    assert rank(Matrix(E, rows)) == 1
    rows[1][1] = E.one
    assert rank(Matrix(E, rows)) == 2


def test_solve_linear():
    K = GF(P)
    A = Matrix(K, [[1, 2, 3], [2, 4, 6]])
    sol = solve_linear(A, [1, 2])
    assert sol is not None and not sol.unique and sol.kernel.nrows == 2
    assert solve_linear(A, [1, 3]) is None


def test_intersect_row_spaces():
    K = GF(P)
    U = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]
    W = [[0, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]]
    I = intersect_row_spaces(K, U, W, 4)
    assert len(I) == 2
    assert all(LinearSubspace.span(K, U, 4).contains(v) and LinearSubspace.span(K, W, 4).contains(v) for v in I)


def test_minors_counts():
    rows = [[1, 2, 3], [4, 5, 6], [7, 8, 10]]
    out = minors(rows, 2)
    assert len(out) == 9
    assert minors(rows, 3) == [int(sympy.Matrix(rows).det())]


def test_linear_subspace():
    K = GF(P)
    H = LinearSubspace.span(K, [[1, 0, 0], [0, 1, 0], [1, 1, 0]], 3)
    assert H.dim == 1
    assert H.contains([3, 4, 0]) and not H.contains([0, 0, 1])
    with pytest.raises(DomainError):
        LinearSubspace(Matrix(K, [[1, 0], [2, 0]]))


def test_ragged_rejected():
    with pytest.raises(DomainError):
        Matrix(GF(P), [[1, 2], [3]])
