from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from tensordec.errors import DomainError, ParseError
from tensordec.fields import (
    GF,
    QQ,
    ExtensionField,
    FieldElement,
    extension_field,
    field_from_spec,
    fp_is_irreducible,
    is_prime,
)


def test_is_prime_matches_sympy():
    for n in list(range(-3, 2000)) + [32003, 2**31 - 1, 2**61 - 1, 561, 1105]:
        assert is_prime(n) == sympy.isprime(n), n


def test_prime_field_rejects_composite():
    with pytest.raises(DomainError):
        GF(32001)


@given(st.integers(), st.integers(), st.integers())
def test_prime_field_axioms(a, b, c):
    K = GF(32003)
    a, b, c = K.from_int(a), K.from_int(b), K.from_int(c)
    assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))
    assert K.add(a, K.neg(a)) == K.zero
    if a:
        assert K.mul(a, K.inv(a)) == K.one


@given(st.fractions(max_denominator=50))
def test_from_fraction(q):
    K = GF(101)
    x = K.from_fraction(q)
    assert K.mul(x, K.from_int(q.denominator)) == K.from_int(q.numerator)


def test_from_fraction_zero_denominator():
    with pytest.raises(DomainError):
        GF(7).from_fraction(Fraction(1, 7))


def _sympy_mul(E, a, b):
    g = sympy.Symbol("g")
    m = sympy.Poly(list(reversed(E.modulus)), g, modulus=E.p)
    pa = sympy.Poly(list(reversed(a)), g, modulus=E.p)
    pb = sympy.Poly(list(reversed(b)), g, modulus=E.p)
    r = (pa * pb).rem(m)
    coeffs = [int(c) % E.p for c in reversed(r.all_coeffs())]
    return tuple(coeffs + [0] * (E.degree - len(coeffs)))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(3, 2), (5, 3), (7, 2), (2, 4)]), st.randoms(use_true_random=False))
def test_extension_multiplication_matches_sympy(pk, rnd):
    E = extension_field(*pk)
    a, b = E.random(rnd), E.random(rnd)
    assert E.mul(a, b) == _sympy_mul(E, a, b)
    if a != E.zero:
        assert E.mul(a, E.inv(a)) == E.one
        assert E.pow(a, E.order - 1) == E.one


def test_extension_field_deterministic_and_irreducible():
    E1, E2 = extension_field(32003, 2), extension_field(32003, 2)
    assert E1 is E2
    assert fp_is_irreducible(list(E1.modulus), 32003)
    x = sympy.Symbol("x")
    assert sympy.Poly(list(reversed(E1.modulus)), x, modulus=32003).is_irreducible


def test_reducible_modulus_rejected():
    with pytest.raises(DomainError):
        ExtensionField(7, [6, 0, 1])  # x^2 - 1


@given(st.randoms(use_true_random=False))
def test_extension_string_roundtrip(rnd):
    E = extension_field(7, 3)
    a = E.random(rnd)
    assert E.parse(E.to_str(a)) == a


def test_rational_field():
    a, b = QQ.from_int(3), QQ.parse("-2/5")
    assert QQ.mul(a, b) == Fraction(-6, 5)
    assert QQ.to_str(b) == "-2/5"
    assert QQ.characteristic == 0 and QQ.order is None


def test_field_element_wrapper():
    K = GF(11)
    x = K(3)
    assert isinstance(x, FieldElement)
    assert (x * 4).value == 1
    assert (x / x).value == 1
    with pytest.raises(DomainError):
        _ = x + GF(13)(1)


def test_field_from_spec():
    assert field_from_spec("32003") == GF(32003)
    assert field_from_spec("Q") is QQ
    E = field_from_spec("7^2")
    assert E.order == 49
    assert field_from_spec("7:[3,1,1]").modulus == (3, 1, 1)
    with pytest.raises(ParseError):
        field_from_spec("seven")
