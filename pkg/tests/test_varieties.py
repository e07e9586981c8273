import random

import pytest
from hypothesis import given, settings, strategies as st

from tensordec.errors import DomainError, NoKnownEquations
from tensordec.fields import GF
from tensordec.flattenings import MixedTensor, multi_basis
from tensordec.linalg import LinearSubspace
from tensordec.poly import coeff_vector, expand_power_linear
from tensordec.varieties import (
    intersect_linear_section,
    matrix_secant_degree,
    matrix_secant_equations,
    restrict_equations,
    secant_model,
    segre_veronese_equations,
    symmetric_secant_codim,
    symmetric_secant_degree,
    symmetric_secant_equations,
    veronese_equations,
)

K = GF(32003)


def rand_vec(rng, n):
    return [K.random(rng) for _ in range(n)]


def power_point(L, d):
    return coeff_vector(expand_power_linear(L, d, K), d)


def sum_points(points):
    return [K.sum(c) for c in zip(*points)]


def test_generator_counts():
    assert len(veronese_equations(1, 2).generators(K)) == 1
    assert len(veronese_equations(1, 3).generators(K)) == 3
    assert len(symmetric_secant_equations(1, 1).generators(K)) == 1
    assert len(symmetric_secant_equations(3, 2).generators(K)) == 10
    assert len(matrix_secant_equations(2, 2, 1).generators(K)) == 1
    assert len(matrix_secant_equations(4, 4, 2).generators(K)) == 16


def test_twisted_cubic_substitution():
    gens = veronese_equations(1, 3).generators(K)
    for t in range(1, 30):
        # coefficient coordinates of (x0 + t x1)^3 in lex order x0^3, x0^2 x1, x0 x1^2, x1^3
        pt = [1, 3 * t, 3 * t * t, t**3]
        assert all(g.evaluate([K.from_int(c) for c in pt]) == 0 for g in gens)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3), st.integers(2, 4), st.integers(0, 10**6))
def test_veronese_vanishing(n, d, seed):
    rng = random.Random(seed)
    gens = veronese_equations(n, d).generators(K)
    pt = power_point(rand_vec(rng, n + 1), d)
    assert all(g.evaluate(pt) == 0 for g in gens)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3), st.integers(0, 10**6))
def test_symmetric_secant_vanishing(n, seed):
    rng = random.Random(seed)
    r = seed % n + 1
    model = symmetric_secant_equations(n, r)
    gens = model.generators(K)
    pt = sum_points([power_point(rand_vec(rng, n + 1), 2) for _ in range(r)])
    assert all(g.evaluate(pt) == 0 for g in gens)
    # and a generic quadric is off the variety
    assert any(g.evaluate(rand_vec(rng, len(pt))) != 0 for g in gens)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 10**6))
def test_matrix_secant_vanishing(m, n, seed):
    rng = random.Random(seed)
    r = seed % (min(m, n) - 1) + 1
    gens = matrix_secant_equations(m, n, r).generators(K)
    M = [[K.zero] * n for _ in range(m)]
    for _ in range(r):
        u, v = rand_vec(rng, m), rand_vec(rng, n)
        M = [[K.add(M[i][j], K.mul(u[i], v[j])) for j in range(n)] for i in range(m)]
    pt = [M[i][j] for i in range(m) for j in range(n)]
    assert all(g.evaluate(pt) == 0 for g in gens)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_segre_veronese_vanishing(seed):
    rng = random.Random(seed)
    dims, degrees = (1, 2), (2, 1)
    model = segre_veronese_equations(dims, degrees)
    forms = [rand_vec(rng, n + 1) for n in dims]
    T = MixedTensor.rank_one(forms, degrees, K)
    pt = [T.entries.get(k, K.zero) for k in multi_basis(dims, degrees)]
    assert all(g.evaluate(pt) == 0 for g in model.generators(K))


def test_errors():
    with pytest.raises(DomainError):
        veronese_equations(2, 1)
    with pytest.raises(DomainError):
        symmetric_secant_equations(2, 3)
    with pytest.raises(DomainError):
        matrix_secant_equations(3, 3, 3)
    with pytest.raises(NoKnownEquations):
        secant_model((2,), (3,), 2)


def test_codim_and_degree_formulas():
    # rank <= r symmetric matrices: codimension C(n+2-r, 2)
    assert symmetric_secant_codim(2, 1) == 3
    assert symmetric_secant_degree(2, 1) == 4  # Veronese surface
    assert symmetric_secant_degree(2, 2) == 3  # cubic determinant
    assert symmetric_secant_degree(3, 2) == 10
    assert matrix_secant_degree(3, 3, 1) == 6  # Segre P2 x P2
    assert matrix_secant_degree(4, 4, 2) == 20


def _generic_subspace(rng, dim, N):
    return LinearSubspace.span(K, [rand_vec(rng, N) for _ in range(dim + 1)], N)


def test_veronese_surface_section_degree_four():
    model = veronese_equations(2, 2)
    for seed in range(3):
        H = _generic_subspace(random.Random(seed), 3, 6)
        res = intersect_linear_section(model, H, seed=seed)
        assert res.zero_dimensional and res.degree == 4
        E = res.field
        assert sum(res.multiplicities) == 4 and res.all_simple
        for amb in res.ambient_points:
            assert all(g.embed(E).evaluate(amb) == E.zero for g in model.generators(K))


def test_points_spanning_subspace_are_recovered():
    # H spanned by 3 points of the Veronese surface meets it in exactly those points
    rng = random.Random(11)
    model = veronese_equations(2, 2)
    pts = [power_point(rand_vec(rng, 3), 2) for _ in range(3)]
    H = LinearSubspace.span(K, pts, 6)
    res = intersect_linear_section(model, H, seed=1)
    assert res.degree == 3
    got = {tuple(p) for p in res.ambient_points}

    def proj(v):
        inv = K.inv(next(c for c in v if c))
        return tuple(K.mul(c, inv) for c in v)

    assert {proj(p) for p in pts} == {proj(p) for p in got}


def test_restriction_to_point_and_chart_independence():
    rng = random.Random(2)
    model = veronese_equations(2, 2)
    pt = power_point(rand_vec(rng, 3), 2)
    H = LinearSubspace.span(K, [pt], 6)
    assert all(f.is_zero() for f in restrict_equations(model, H)) or not restrict_equations(model, H)
    res = intersect_linear_section(model, H)
    assert res.degree == 1
    Hg = _generic_subspace(rng, 3, 6)
    degs = {intersect_linear_section(model, Hg, seed=s, solve=False).degree for s in range(4)}
    assert degs == {4}


def test_empty_and_positive_dimensional_sections():
    rng = random.Random(8)
    model = veronese_equations(2, 2)
    H = _generic_subspace(rng, 2, 6)  # a generic plane misses the surface
    res = intersect_linear_section(model, H)
    assert res.zero_dimensional and res.degree == 0 and res.points == []
    H = _generic_subspace(rng, 4, 6)  # a hyperplane section is a curve
    res = intersect_linear_section(model, H)
    assert not res.zero_dimensional and res.points == []
