import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from tensordec.errors import DomainError, ParseError, SmallCharacteristicError
from tensordec.fields import GF, QQ
from tensordec.poly import (
    GREVLEX,
    LEX,
    MonomialOrder,
    Poly,
    coeff_vector,
    compositions,
    expand_power_linear,
    from_coeff_vector,
    monomial_basis,
    multinomial,
    parse_poly,
)

K = GF(32003)


def random_form(rng, n, d, F=K, density=0.7):
    t = {m: F.random(rng) for m in monomial_basis(n, d) if rng.random() < density}
    return Poly(F, n, t)


def to_sympy(P, xs):
    F = P.field
    expr = 0
    for e, c in P.terms.items():
        coef = sympy.Rational(c.numerator, c.denominator) if F is QQ else F.signed(c) if hasattr(F, "signed") else c
        term = coef
        for x, k in zip(xs, e):
            term *= x**k
        expr += term
    return sympy.expand(expr)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(0, 10**6))
def test_arithmetic_matches_sympy(n, seed):
    rng = random.Random(seed)
    xs = sympy.symbols(f"x0:{n}")
    A = random_form(rng, n, rng.randint(0, 3), QQ)
    B = random_form(rng, n, rng.randint(0, 3), QQ)
    assert sympy.expand(to_sympy(A * B, xs) - to_sympy(A, xs) * to_sympy(B, xs)) == 0
    assert sympy.expand(to_sympy(A + B, xs) - to_sympy(A, xs) - to_sympy(B, xs)) == 0
    assert sympy.expand(to_sympy(A**2, xs) - to_sympy(A, xs) ** 2) == 0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=4), st.integers(1, 6))
def test_power_of_linear_form(L, d):
    if all(c == 0 for c in L):
        with pytest.raises(DomainError):
            expand_power_linear(L, d, QQ)
        return
    xs = sympy.symbols(f"x0:{len(L)}")
    P = expand_power_linear([Fraction(c) for c in L], d, QQ)
    assert sympy.expand(to_sympy(P, xs) - sum(c * x for c, x in zip(L, xs)) ** d) == 0


def test_multinomial_and_basis_counts():
    from math import comb

    for n in range(1, 5):
        for d in range(0, 6):
            basis = monomial_basis(n, d)
            assert len(basis) == comb(n + d - 1, d)
            assert sum(multinomial(m) for m in basis) == n**d
    assert list(compositions(2, 2)) == [(2, 0), (1, 1), (0, 2)]


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.integers(0, 10**6))
def test_text_roundtrip(n, d, seed):
    rng = random.Random(seed)
    F = random_form(rng, n, d)
    if F.is_zero():
        return
    assert parse_poly(F.to_text(), K, n) == F


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.integers(0, 10**6))
def test_coeff_vector_roundtrip(n, d, seed):
    F = random_form(random.Random(seed), n, d)
    for order in (LEX, GREVLEX):
        assert from_coeff_vector(K, n, d, coeff_vector(F, d, order), order) == F


def test_parse_grammar():
    P = parse_poly("x0^2 - 3/2*x0*x1 + x2^2", QQ)
    assert P.nvars == 3
    assert P.coefficient((1, 1, 0)) == Fraction(-3, 2)
    for bad in ["x0^2+*x1", "", "x0^", "2x0", "x0 ++ x1", "y^2", "x0/0"]:
        with pytest.raises(ParseError):
            parse_poly(bad, QQ)


def test_small_characteristic_guard():
    F = parse_poly("x0^7 + x1^7", GF(7))
    with pytest.raises(SmallCharacteristicError):
        F.derivative(0)


def test_orders():
    # grevlex with x0 > x1 > x2: total degree first, then the last variable is cheapest
    assert GREVLEX.key((0, 0, 3)) > GREVLEX.key((1, 1, 0))
    assert GREVLEX.key((0, 2, 0)) > GREVLEX.key((1, 0, 1))
    assert GREVLEX.key((2, 0, 0)) > GREVLEX.key((1, 1, 0))
    assert LEX.key((1, 0, 0)) > LEX.key((0, 5, 5))
    blk = MonomialOrder("block", 1)
    assert blk.key((1, 0, 0)) > blk.key((0, 9, 9))


def test_mixed_fields_rejected():
    a = Poly.variable(GF(7), 2, 0)
    b = Poly.variable(GF(11), 2, 0)
    with pytest.raises(DomainError):
        _ = a + b
