"""Determinantal models of Veronese, Segre-Veronese and secant varieties,
and their intersection with linear subspaces.

A ``SecantModel`` stores matrices whose entries are linear forms in the
ambient coordinates, together with the minor size that cuts out the
variety.  Restriction to a subspace substitutes into the entries first and
takes minors afterwards, which is much cheaper than substituting into
expanded minors.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field

from .errors import DomainError, NoKnownEquations, UnluckyChart
from .flattenings import multi_basis
from .groebner import buchberger, solve_zero_dim
from .linalg import LinearSubspace, Matrix, minors, random_invertible
from .poly import Poly, monomial_basis, monomial_index

__all__ = [
    "SecantModel",
    "SectionResult",
    "veronese_equations",
    "symmetric_secant_equations",
    "matrix_secant_equations",
    "segre_veronese_equations",
    "restrict_equations",
    "restricted_system",
    "intersect_linear_section",
    "symmetric_secant_codim",
    "matrix_secant_codim",
    "symmetric_secant_degree",
    "matrix_secant_degree",
]


@dataclass
class SecantModel:
    """Equations of Sec_r of a rank-one variety as minors of matrices of
    linear forms.  ``matrices`` holds (entries, minor size, symmetric)
    with entries given as sparse {coordinate index: int coefficient}."""

    kind: str
    params: dict
    r: int
    ambient: list
    matrices: list
    _generators: list = dc_field(default=None, repr=False)

    @property
    def ambient_dim(self) -> int:
        return len(self.ambient)

    def generators(self, field):
        """Expanded minors as Polys in the ambient coordinates."""
        N = len(self.ambient)
        polys = []
        for entries, k, sym in self.matrices:
            mat = [[_linear_poly(field, N, e) for e in row] for row in entries]
            polys.extend(minors(mat, k, symmetric=sym))
        return _dedup(polys)


def _linear_poly(field, nvars, sparse):
    t = {}
    for i, c in sparse.items():
        e = [0] * nvars
        e[i] = 1
        v = field.from_int(c)
        if not field.is_zero(v):
            t[tuple(e)] = v
    return Poly(field, nvars, t, clean=True)


def _dedup(polys):
    """Drop zeros and polynomials equal up to a scalar."""
    seen = set()
    out = []
    for f in polys:
        if f.is_zero():
            continue
        K = f.field
        e0 = min(f.terms)
        inv = K.inv(f.terms[e0])
        key = frozenset((e, K.mul(c, inv)) for e, c in f.terms.items())
        if key in seen:
            continue
        seen.add(key)
        out.append(f)
    return out


def veronese_equations(n: int, d: int) -> SecantModel:
    """2-minors of Cat_1 of the generic degree-d form in n+1 variables."""
    if d < 2:
        raise DomainError("Veronese equations need degree at least 2")
    amb = list(monomial_basis(n + 1, d))
    idx = monomial_index(n + 1, d)
    cols = monomial_basis(n + 1, d - 1)
    entries = []
    for i in range(n + 1):
        row = []
        for mp in cols:
            e = list(mp)
            e[i] += 1
            row.append({idx[tuple(e)]: mp[i] + 1})
        entries.append(row)
    return SecantModel("veronese", {"n": n, "d": d}, 1, amb, [(entries, 2, False)])


def _sym_matrix(n, coord_index):
    """Hessian-convention symmetric matrix of a generic quadric."""
    entries = []
    for i in range(n + 1):
        row = []
        for j in range(n + 1):
            e = [0] * (n + 1)
            e[i] += 1
            e[j] += 1
            row.append({coord_index(tuple(e)): 2 if i == j else 1})
        entries.append(row)
    return entries


def symmetric_secant_equations(n: int, r: int) -> SecantModel:
    """(r+1)-minors of the generic (n+1)x(n+1) symmetric matrix; in
    coefficient coordinates M_ii = 2 y_{2e_i}, M_ij = y_{e_i+e_j}."""
    if r < 1:
        raise DomainError("secant index must be positive")
    if r > n:
        raise DomainError(f"Sec_{r} of V_2^{n} fills the space")
    amb = list(monomial_basis(n + 1, 2))
    idx = monomial_index(n + 1, 2)
    return SecantModel("symmetric", {"n": n}, r, amb, [(_sym_matrix(n, idx.__getitem__), r + 1, True)])


def matrix_secant_equations(m: int, n: int, r: int) -> SecantModel:
    """(r+1)-minors of the generic m x n matrix, coordinates row-major."""
    if r < 1:
        raise DomainError("secant index must be positive")
    if r >= min(m, n):
        raise DomainError(f"rank <= {r} matrices of size {m}x{n} fill the space")
    amb = [(i, j) for i in range(m) for j in range(n)]
    entries = [[{i * n + j: 1} for j in range(n)] for i in range(m)]
    return SecantModel("matrix", {"m": m, "n": n}, r, amb, [(entries, r + 1, False)])


def segre_veronese_equations(dims, degrees, r: int = 1) -> SecantModel:
    """Equations of Sec_r of the Segre-Veronese variety of multidegree
    ``degrees`` on P^{n_1} x ... x P^{n_p}, in the multi_basis coordinates.

    r = 1: 2-minors of all one-variable flattenings.  r >= 2 is supported
    for the two determinantal shapes: two slots of degree 1 (matrices) and
    a single slot of degree 2 (symmetric matrices)."""
    dims, degrees = tuple(dims), tuple(degrees)
    amb = multi_basis(dims, degrees)
    idx = {k: i for i, k in enumerate(amb)}
    active = [j for j, d in enumerate(degrees) if d > 0]
    if not active:
        raise DomainError("the rank-one variety of constants is a point")
    if r == 1:
        mats = []
        for j in active:
            sub = list(degrees)
            sub[j] -= 1
            cols = multi_basis(dims, sub)
            entries = []
            for k in range(dims[j] + 1):
                row = []
                for beta in cols:
                    mj = list(beta[j])
                    coef = mj[k] + 1
                    mj[k] += 1
                    key = beta[:j] + (tuple(mj),) + beta[j + 1 :]
                    row.append({idx[key]: coef})
                entries.append(row)
            if len(entries) >= 2 and len(entries[0]) >= 2:
                mats.append((entries, 2, False))
        if not mats:
            raise DomainError("rank-one variety fills the ambient space")
        return SecantModel("segre_veronese", {"dims": dims, "degrees": degrees}, 1, amb, mats)
    if len(active) == 2 and all(degrees[j] == 1 for j in active):
        j1, j2 = active
        m, n = dims[j1] + 1, dims[j2] + 1
        if r >= min(m, n):
            raise DomainError("secant variety fills the space")
        entries = []
        for a in range(m):
            row = []
            for b in range(n):
                key = tuple(
                    tuple(1 if t == a else 0 for t in range(dims[j1] + 1))
                    if j == j1
                    else tuple(1 if t == b else 0 for t in range(dims[j2] + 1))
                    if j == j2
                    else (0,) * (dims[j] + 1)
                    for j in range(len(dims))
                )
                row.append({idx[key]: 1})
            entries.append(row)
        return SecantModel("segre_matrix", {"dims": dims, "degrees": degrees}, r, amb, [(entries, r + 1, False)])
    if len(active) == 1 and degrees[active[0]] == 2:
        j = active[0]
        n = dims[j]
        if r > n:
            raise DomainError("secant variety fills the space")

        def coord(e):
            return idx[tuple(e if t == j else (0,) * (dims[t] + 1) for t in range(len(dims)))]

        return SecantModel("segre_symmetric", {"dims": dims, "degrees": degrees}, r, amb, [(_sym_matrix(n, coord), r + 1, True)])
    raise NoKnownEquations(f"no determinantal equations for Sec_{r} of multidegree {degrees}")


def secant_model(dims, degrees, r):
    """Model for Sec_r of the rank-one variety of (dims, degrees), or
    NoKnownEquations."""
    if len(dims) == 1:
        n, k = dims[0], degrees[0]
        if r == 1:
            return veronese_equations(n, k)
        if k == 2:
            return symmetric_secant_equations(n, r)
        raise NoKnownEquations(f"no known equations for Sec_{r}(V_{k}^{n}) with {k} >= 3")
    return segre_veronese_equations(dims, degrees, r)


# ---------------------------------------------------------------------------
# codimension and degree of the determinantal loci


def symmetric_secant_codim(n: int, r: int) -> int:
    """Codimension of rank <= r symmetric (n+1)x(n+1) matrices."""
    return math.comb(n + 2 - r, 2)


def matrix_secant_codim(m: int, n: int, r: int) -> int:
    return (m - r) * (n - r)


def symmetric_secant_degree(n: int, r: int) -> int:
    """Degree of rank <= r symmetric N x N matrices, N = n+1 (Harris-Tu)."""
    N = n + 1
    k = N - r
    num, den = 1, 1
    for a in range(k):
        num *= math.comb(N + a, k - a)
        den *= math.comb(2 * a + 1, a)
    return num // den


def matrix_secant_degree(m: int, n: int, r: int) -> int:
    """Degree of rank <= r matrices of size m x n (m >= n not required)."""
    if m < n:
        m, n = n, m
    num, den = 1, 1
    for i in range(n - r):
        num *= math.factorial(m + i) * math.factorial(i)
        den *= math.factorial(r + i) * math.factorial(m - r + i)
    return num // den


# ---------------------------------------------------------------------------
# restriction and intersection


def _restricted_entries(model, field, basis_rows, A=None):
    """Entries as Polys in the subspace coordinates xi (A is None) or in
    affine chart coordinates eta with xi = A (1, eta)^T."""
    nb = len(basis_rows)
    nv = nb if A is None else nb - 1
    mats = []
    for entries, k, sym in model.matrices:
        mat = []
        for row in entries:
            prow = []
            for sparse in row:
                w = [field.zero] * nb
                for i, c in sparse.items():
                    cc = field.from_int(c)
                    for t in range(nb):
                        b = basis_rows[t][i]
                        if not field.is_zero(b):
                            w[t] = field.add(w[t], field.mul(cc, b))
                if A is None:
                    prow.append(Poly.linear(field, w))
                else:
                    aff = [field.dot(w, [A.rows[t][j] for t in range(nb)]) for j in range(nb)]
                    prow.append(Poly.linear(field, aff[1:], constant=aff[0]))
            mat.append(prow)
        mats.append((mat, k, sym))
    return mats, nv


def _minor_system(mats):
    polys = []
    for mat, k, sym in mats:
        if k > min(len(mat), len(mat[0])):
            continue
        polys.extend(minors(mat, k, symmetric=sym))
    return _dedup(polys)


def restrict_equations(model: SecantModel, H: LinearSubspace):
    """Homogeneous system in dim(H)+1 variables xi: the generators
    evaluated at sum_t xi_t basis_t."""
    if H.ambient_dim != model.ambient_dim:
        raise DomainError(f"subspace lives in dimension {H.ambient_dim}, model in {model.ambient_dim}")
    mats, _ = _restricted_entries(model, H.field, H.basis.rows)
    return _minor_system(mats)


def restricted_system(model: SecantModel, H: LinearSubspace, A: Matrix):
    """Affine system in dim(H) variables on the chart xi = A (1, eta)."""
    if H.ambient_dim != model.ambient_dim:
        raise DomainError(f"subspace lives in dimension {H.ambient_dim}, model in {model.ambient_dim}")
    mats, nv = _restricted_entries(model, H.field, H.basis.rows, A)
    polys = _minor_system(mats)
    return polys, nv


@dataclass
class SectionResult:
    """Outcome of intersecting a model with a linear subspace."""

    zero_dimensional: bool
    degree: int | None
    points: list = dc_field(default_factory=list)
    ambient_points: list = dc_field(default_factory=list)
    multiplicities: list = dc_field(default_factory=list)
    point_degrees: list = dc_field(default_factory=list)
    field: object = None
    seed: int = 0
    distinct: int | None = None

    @property
    def all_simple(self) -> bool:
        return all(m == 1 for m in self.multiplicities)


def _normalize(v, F):
    for c in v:
        if not F.is_zero(c):
            inv = F.inv(c)
            return [F.mul(x, inv) for x in v]
    return list(v)


def section_groebner(model, H, A):
    polys, nv = restricted_system(model, H, A)
    K = H.field
    if not polys:
        polys = [Poly.zero(K, nv)]
    return buchberger(polys)


def intersect_linear_section(
    model: SecantModel,
    H: LinearSubspace,
    seed: int = 0,
    chart_retries: int = 5,
    solve: bool = True,
    cross_check: bool = True,
) -> SectionResult:
    """Intersect P(H) with the variety of ``model``.

    The system is dehomogenized on a seeded random affine chart; the degree
    is confirmed on a second independent chart.  Points come back as
    normalized xi-coordinates plus ambient coordinates."""
    K = H.field
    nb = H.basis.nrows
    if H.ambient_dim != model.ambient_dim:
        raise DomainError(f"subspace lives in dimension {H.ambient_dim}, model in {model.ambient_dim}")
    if nb == 1:
        polys = restrict_equations(model, H)
        on = all(f.evaluate([K.one]) == K.zero for f in polys)
        if not on:
            return SectionResult(True, 0, field=K, seed=seed)
        return SectionResult(True, 1, [[K.one]], [list(H.basis.rows[0])], [1], [1], K, seed, 1)
    rng = random.Random(seed)
    for _ in range(chart_retries + 1):
        A = random_invertible(K, nb, rng)
        G = section_groebner(model, H, A)
        qb = G.quotient_basis()
        if cross_check:
            A2 = random_invertible(K, nb, rng)
            qb2 = section_groebner(model, H, A2).quotient_basis()
            if qb.finite != qb2.finite or qb.count != qb2.count:
                continue
        break
    else:
        raise UnluckyChart("degree of the linear section disagrees between random charts")
    if not qb.finite:
        return SectionResult(False, None, field=K, seed=seed)
    deg = qb.count
    res = SectionResult(True, deg, field=K, seed=seed)
    if not solve or deg == 0:
        return res
    sols = solve_zero_dim(G, seed=seed)
    if not sols:
        return res
    E = sols[0].field
    embed = (lambda x: x) if E == K else E.from_base
    AE = [[embed(a) for a in row] for row in A.rows]
    BE = [[embed(b) for b in row] for row in H.basis.rows]
    for P in sols:
        eta = [E.one] + list(P.coordinates)
        xi = _normalize([E.dot(row, eta) for row in AE], E)
        amb = [E.zero] * H.ambient_dim
        for c, row in zip(xi, BE):
            if not E.is_zero(c):
                amb = [E.add(a, E.mul(c, b)) for a, b in zip(amb, row)]
        res.points.append(xi)
        res.ambient_points.append(amb)
        res.multiplicities.append(P.multiplicity)
        res.point_degrees.append(P.degree)
    res.field = E
    res.distinct = len(sols)
    return res
