import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from tensordec.errors import DomainError, SmallCharacteristicError
from tensordec.fields import GF, QQ
from tensordec.flattenings import (
    FlatteningSpec,
    MixedTensor,
    catalecticant_matrix,
    derivative_combination,
    derivative_space,
    mixed_flattening,
    omega,
    omega_form,
    pairing_to_power,
    power_pairing,
)
from tensordec.generators import gen_polynomial_of_rank, gen_tensor_of_rank
from tensordec.linalg import Matrix, rank
from tensordec.poly import coeff_vector, expand_power_linear, monomial_basis, parse_poly

K = GF(32003)


def test_pure_power_rank_one():
    for d in range(2, 7):
        F = parse_poly(f"x0^{d}", K, 3)
        for s in range(1, d):
            assert rank(catalecticant_matrix(F, s)) == 1
            assert derivative_space(F, s).dim == 0


def test_binary_cubic():
    C = catalecticant_matrix(parse_poly("x0^3 + x1^3", K), 1)
    assert C.rows == [[3, 0, 0], [0, 0, 3]]
    assert rank(C) == 2


def test_plane_quintic_and_rem_hilb_dimension():
    rng = random.Random(3)
    t = {m: K.random(rng) for m in monomial_basis(3, 5)}
    from tensordec.poly import Poly

    assert derivative_space(Poly(K, 3, t), 1).dim == 2
    F, _, _ = gen_polynomial_of_rank(2, 5, 7, K, seed=7)
    assert derivative_space(F, 2).dim == 5


def test_small_characteristic_rejected():
    with pytest.raises(SmallCharacteristicError):
        catalecticant_matrix(parse_poly("x0^5 + x1^5", GF(5)), 2)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3), st.integers(2, 6), st.integers(1, 6), st.integers(0, 10**6))
def test_rank_bound_and_containment(n, d, h, seed):
    F, forms, _ = gen_polynomial_of_rank(n, d, h, K, seed=seed)
    s = seed % (d - 1) + 1
    C = catalecticant_matrix(F, s)
    assert rank(C) <= h
    span = [coeff_vector(expand_power_linear(L, d - s, K), d - s) for L in forms]
    assert rank(Matrix(K, span + C.rows)) == rank(Matrix(K, span))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3), st.integers(2, 6), st.integers(1, 5), st.integers(0, 10**6))
def test_derivative_combination_identity(n, d, h, seed):
    # sum_m xi_m d^m F = d!/(d-s)! sum_i <L_i^s, xi> L_i^{d-s}
    F, forms, lam = gen_polynomial_of_rank(n, d, h, K, seed=seed, unit_coefficients=True)
    rng = random.Random(seed)
    s = rng.randint(1, d - 1)
    xi = [K.random(rng) for _ in monomial_basis(n + 1, s)]
    lhs = derivative_combination(F, s, xi)
    rhs = lhs.zero_like()
    for L in forms:
        rhs = rhs + expand_power_linear(L, d - s, K).scale(power_pairing(L, s, xi, K))
    rhs = rhs.scale(K.from_int(math.perm(d, s)))
    assert lhs == rhs
    # the same combination is xi^T Cat_s(F)
    C = catalecticant_matrix(F, s)
    row = [K.sum(K.mul(x, C.rows[i][j]) for i, x in enumerate(xi)) for j in range(C.ncols)]
    assert row == coeff_vector(lhs, d - s) if not lhs.is_zero() else all(c == 0 for c in row)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 20), min_size=2, max_size=4), st.integers(1, 4))
def test_pairing_to_power(L, s):
    v = [power_pairing(L, s, [1 if m == mu else 0 for m in monomial_basis(len(L), s)], K) for mu in monomial_basis(len(L), s)]
    assert pairing_to_power(v, len(L), s, K) == expand_power_linear(L, s, K)


def test_omega_pure_power_and_rescaling():
    F = parse_poly("x0^4", K, 2)
    assert omega(F, parse_poly("x0^2", K, 2), parse_poly("x1^2", K, 2)) == 0
    F, _, _ = gen_polynomial_of_rank(2, 4, 5, K, seed=1)
    G, C = omega_form(F), catalecticant_matrix(F, 2)
    w = [K.div(K.from_int(math.prod(math.factorial(a) for a in mu)), K.from_int(2)) for mu in monomial_basis(3, 2)]
    for crow, grow in zip(C.rows, G.rows):
        assert [K.mul(c, x) for c, x in zip(crow, w)] == grow
    with pytest.raises(DomainError):
        omega_form(parse_poly("x0^3", K, 2))


def test_mixed_rank_one_and_transpose():
    rng = random.Random(5)
    dims, degrees = (2, 1, 3), (2, 1, 2)
    forms = [[K.random(rng) for _ in range(n + 1)] for n in dims]
    T = MixedTensor.rank_one(forms, degrees, K)
    for a in [(1, 0, 0), (1, 1, 0), (2, 0, 1), (0, 1, 2)]:
        spec = FlatteningSpec.from_a(a, degrees)
        M = mixed_flattening(T, spec)
        assert rank(M) == 1
    T2, _, _ = gen_tensor_of_rank(dims, degrees, 3, K, seed=2)
    for a in [(1, 0, 0), (1, 1, 1), (2, 1, 0)]:
        spec = FlatteningSpec.from_a(a, degrees)
        M, Mt = mixed_flattening(T2, spec), mixed_flattening(T2, spec.swap())
        assert rank(M) == rank(Mt)
    with pytest.raises(DomainError):
        FlatteningSpec.from_a((3, 0, 0), degrees)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_mixed_transpose_exact(seed):
    # entries are coefficients of partials, so the (A,B) and (B,A) flattenings
    # are transposes up to factorials: M_AB[al][be] * be! = M_BA[be][al] * al!
    from tensordec.flattenings import multi_basis

    dims, degrees = (1, 2), (2, 2)
    T, _, _ = gen_tensor_of_rank(dims, degrees, 2, K, seed=seed)
    spec = FlatteningSpec.from_a((2, 1), degrees)
    M, N = mixed_flattening(T, spec), mixed_flattening(T, spec.swap())
    rows, cols = multi_basis(dims, spec.a), multi_basis(dims, spec.b)

    def fact(key):
        return math.prod(math.factorial(x) for m in key for x in m)

    for i, al in enumerate(rows):
        for j, be in enumerate(cols):
            assert K.mul(M.rows[i][j], K.from_int(fact(be))) == K.mul(N.rows[j][i], K.from_int(fact(al)))


def test_one_factor_reduces_to_catalecticant():
    F, _, _ = gen_polynomial_of_rank(2, 4, 4, K, seed=9)
    T = MixedTensor.from_poly(F, (2,), (4,))
    for s in range(5):
        assert mixed_flattening(T, FlatteningSpec.from_a((s,), (4,))).rows == catalecticant_matrix(F, s).rows


def test_segre_rank_five_flattening():
    T, _, _ = gen_tensor_of_rank((3, 3, 3), (1, 1, 1), 5, K, seed=0)
    M = mixed_flattening(T, FlatteningSpec.from_a((1, 0, 0), (1, 1, 1)))
    assert (M.nrows, M.ncols) == (4, 16)
    assert rank(M) == 4


def test_mixed_tensor_validation_and_poly_roundtrip():
    T, _, _ = gen_tensor_of_rank((1, 2), (2, 1), 2, K, seed=4)
    assert MixedTensor.from_poly(T.to_poly(), T.dims, T.degrees) == T
    with pytest.raises(DomainError):
        MixedTensor((1,), (2,), K, {((1, 0),): 1})


def test_rational_catalecticant():
    F = parse_poly("x0^4 + 1/2*x0^2*x1^2", QQ)
    C = catalecticant_matrix(F, 2)
    assert C.rows == [[12, 0, 1], [0, 2, 0], [1, 0, 0]]
    assert rank(C) == 3
    assert rank(catalecticant_matrix(parse_poly("x0^4 + x1^4", QQ), 2)) == 2
