import sympy
from hypothesis import given, settings, strategies as st

from tensordec import univariate as up
from tensordec.fields import GF, extension_field

P_SMALL = 13


def _expand(lc, facs, K):
    out = [lc]
    for g, m in facs:
        for _ in range(m):
            out = up.mul(out, g, K)
    return out


polys = st.lists(st.integers(0, P_SMALL - 1), min_size=2, max_size=12).filter(lambda c: c[-1] != 0)


@settings(max_examples=100, deadline=None)
@given(polys)
def test_factor_reconstructs(coeffs):
    K = GF(P_SMALL)
    lc, facs = up.factor(coeffs, K)
    assert _expand(lc, facs, K) == up.trim(coeffs, K)
    assert all(up.is_irreducible(g, K) for g, _ in facs)


@settings(max_examples=60, deadline=None)
@given(polys)
def test_factor_matches_sympy(coeffs):
    K = GF(P_SMALL)
    x = sympy.Symbol("x")
    sp = sympy.Poly(list(reversed(coeffs)), x, modulus=P_SMALL)
    _, sfacs = sp.factor_list()
    expected = sorted((f.degree(), m) for f, m in sfacs)
    _, facs = up.factor(coeffs, K)
    assert sorted((len(g) - 1, m) for g, m in facs) == expected


@settings(max_examples=60, deadline=None)
@given(polys)
def test_roots_brute_force(coeffs):
    K = GF(P_SMALL)
    got = {r for r, _ in up.roots(coeffs, K)}
    want = {a for a in range(P_SMALL) if up.evaluate(coeffs, a, K) == 0}
    assert got == want


def test_char_two_and_extension_roots():
    K = GF(2)
    f = [1, 1, 0, 1]  # x^3 + x + 1, irreducible over F_2
    assert up.is_irreducible(f, K)
    E = extension_field(2, 3)
    fE = [E.from_base(c) for c in f]
    assert len(up.roots(fE, E)) == 3


def test_squarefree_in_char_p():
    K = GF(5)
    f = up.from_roots([1, 1, 1, 1, 1, 2], K)  # (x-1)^5 (x-2)
    parts = dict((tuple(g), m) for g, m in up.squarefree_decomposition(f, K))
    assert parts[tuple(up.from_roots([1], K))] == 5
    assert parts[tuple(up.from_roots([2], K))] == 1
