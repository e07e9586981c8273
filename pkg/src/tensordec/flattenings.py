"""Catalecticant matrices, derivative spans, mixed flattenings, and the
Omega bilinear form of an even-degree form.

Conventions.  Coordinates on degree-k forms are plain coefficients in the
lex-descending monomial basis.  Row m of Cat_s(F) is the coefficient
vector of the partial derivative d^m F / dx^m, so

    Cat_s(F)[m, m'] = c_{m+m'} * (m+m')! / m'!        (multi-index factorials)

The (A,B) and (B,A) flattenings of a mixed tensor are transposes only up
to this rescaling:  flat_AB * diag(m'!) = (flat_BA * diag(m!))^T.

The Omega form uses the weighted basis B_mu = (m!/mu!) x^mu of degree-m
forms, in which L^m has coordinates (alpha^mu)_mu.  Its Gram matrix is
Cat_m(F) * diag(mu!/m!), symmetric, and for F = sum lam_i L_i^{2m} equals
((2m)!/m!) sum lam_i u_i u_i^T with u_i the B-coordinates of L_i^m.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from itertools import product

from .errors import DomainError, SmallCharacteristicError
from .linalg import LinearSubspace, Matrix, rank, row_basis, solve_linear
from .poly import Poly, coeff_vector, expand_power_linear, mfactorial, monomial_basis, multinomial

__all__ = [
    "SymTensor",
    "MixedTensor",
    "FlatteningSpec",
    "catalecticant_matrix",
    "derivative_space",
    "derivative_combination",
    "mixed_flattening",
    "omega_form",
    "omega",
    "weighted_coordinates",
    "power_pairing",
    "pairing_to_power",
]


def _check_char(field, d):
    p = field.characteristic
    if p and p <= d:
        raise SmallCharacteristicError(f"characteristic {p} must exceed the degree {d}")


@dataclass
class SymTensor:
    """Homogeneous form of degree d in n+1 variables."""

    poly: Poly
    d: int = None

    def __post_init__(self):
        deg = self.poly.homogeneous_degree()
        if self.d is None:
            if deg is None:
                raise DomainError("a symmetric tensor needs a nonzero homogeneous polynomial")
            self.d = deg
        elif not self.poly.is_homogeneous(self.d):
            raise DomainError(f"polynomial is not homogeneous of degree {self.d}")

    @property
    def n(self) -> int:
        return self.poly.nvars - 1

    @property
    def field(self):
        return self.poly.field


def as_symtensor(F) -> SymTensor:
    return F if isinstance(F, SymTensor) else SymTensor(F)


def _falling(top, bottom):
    """prod_i top_i! / bottom_i!  for componentwise top >= bottom."""
    out = 1
    for t, b in zip(top, bottom):
        for k in range(b + 1, t + 1):
            out *= k
    return out


def catalecticant_matrix(F, s: int) -> Matrix:
    """Cat_s(F): C(n+s,n) rows (derivatives), C(n+d-s,n) columns."""
    F = as_symtensor(F)
    P, d, nv = F.poly, F.d, F.poly.nvars
    if not 0 <= s <= d:
        raise DomainError(f"derivative order {s} outside [0, {d}]")
    K = P.field
    _check_char(K, d)
    rows_idx = monomial_basis(nv, s)
    cols_idx = monomial_basis(nv, d - s)
    z = K.zero
    rows = []
    for m in rows_idx:
        row = []
        for mp in cols_idx:
            e = tuple(a + b for a, b in zip(m, mp))
            c = P.terms.get(e)
            row.append(z if c is None else K.mul(c, K.from_int(_falling(e, mp))))
        rows.append(row)
    return Matrix(K, rows, len(cols_idx))


def derivative_space(F, s: int, tag: str = "H^s") -> LinearSubspace:
    """Projective span of the order-s partials.  When the partials are
    independent their coefficient vectors are the basis itself, so the
    basis coordinates are the xi_m of a combination sum xi_m d^m F."""
    F = as_symtensor(F)
    if F.poly.is_zero():
        raise DomainError("derivative space of the zero polynomial")
    M = catalecticant_matrix(F, s)
    if rank(M) == M.nrows:
        return LinearSubspace(M, tag)
    return LinearSubspace(row_basis(M), tag)


def derivative_combination(F, s: int, xi) -> Poly:
    """sum_m xi_m d^m F over degree-s multi-indices m (lex order)."""
    F = as_symtensor(F)
    P = F.poly
    K = P.field
    out = P.zero_like()
    for m, c in zip(monomial_basis(P.nvars, s), xi):
        if not K.is_zero(c):
            out = out + P.diff_multi(m).scale(c)
    return out


def power_pairing(L, s: int, xi, field):
    """<L^s, xi> = sum_m xi_m alpha^m (plain monomials, no multinomials)."""
    acc = field.zero
    for m, c in zip(monomial_basis(len(L), s), xi):
        if field.is_zero(c):
            continue
        t = c
        for a, k in zip(L, m):
            if k:
                t = field.mul(t, field.pow(a, k))
        acc = field.add(acc, t)
    return acc


def pairing_to_power(v, nvars: int, s: int, field) -> Poly:
    """Turn a vector proportional to (alpha^m)_m into the form
    sum_m multinomial(s; m) v_m x^m, which is then proportional to L^s."""
    t = {}
    for m, c in zip(monomial_basis(nvars, s), v):
        if not field.is_zero(c):
            t[m] = field.mul(c, field.from_int(multinomial(m)))
    return Poly(field, nvars, t, clean=True)


# ---------------------------------------------------------------------------
# Omega form


def weighted_coordinates(G: Poly, m: int):
    """Coordinates of a degree-m form in the basis B_mu = (m!/mu!) x^mu."""
    K = G.field
    fm = math.factorial(m)
    return [
        K.mul(c, K.div(K.from_int(mfactorial(mu)), K.from_int(fm)))
        for mu, c in zip(monomial_basis(G.nvars, m), coeff_vector(G, m))
    ]


def omega_form(F) -> Matrix:
    """Gram matrix of Omega_F in the weighted basis (size C(n+m, n))."""
    F = as_symtensor(F)
    if F.d % 2:
        raise DomainError("the Omega form needs an even degree")
    m = F.d // 2
    C = catalecticant_matrix(F, m)
    K = C.field
    fm = K.from_int(math.factorial(m))
    scale = [K.div(K.from_int(mfactorial(mu)), fm) for mu in monomial_basis(F.poly.nvars, m)]
    return Matrix(K, [[K.mul(x, w) for x, w in zip(row, scale)] for row in C.rows], C.ncols)


def omega(F, G1: Poly, G2: Poly):
    """Omega_F(G1, G2) = v1 . w2 where Gram v1 = w1 (weighted coordinates).

    This is the form dual to the Gram matrix on its image: for
    F = sum lam_i L_i^{2m} with independent L_i^m it gives
    Omega_F(L_i^m, L_j^m) = 0 for i != j.  G1 must lie in the image of
    the Gram matrix; the particular solution v1 from the row reduction is
    used so the value is deterministic."""
    F = as_symtensor(F)
    m = F.d // 2
    gram = omega_form(F)
    w1 = weighted_coordinates(G1, m)
    w2 = weighted_coordinates(G2, m)
    sol = solve_linear(gram, w1)
    if sol is None:
        raise DomainError("first argument is outside the image of the Omega Gram matrix")
    return gram.field.dot(sol.particular, w2)


# ---------------------------------------------------------------------------
# mixed tensors


@dataclass
class MixedTensor:
    """Element of Sym^{d_1} V_1 (x) ... (x) Sym^{d_p} V_p, dim V_j = n_j + 1.

    ``entries`` maps p-tuples of exponent tuples to raw coefficients: the
    plain coefficient of prod_j x_j^{m_j} in the multihomogeneous form."""

    dims: tuple
    degrees: tuple
    field: object
    entries: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.dims = tuple(self.dims)
        self.degrees = tuple(self.degrees)
        if len(self.dims) != len(self.degrees):
            raise DomainError("dims and degrees differ in length")
        clean = {}
        K = self.field
        for key, c in self.entries.items():
            key = tuple(tuple(m) for m in key)
            if len(key) != len(self.dims):
                raise DomainError("entry index has the wrong number of factors")
            for m, n, d in zip(key, self.dims, self.degrees):
                if len(m) != n + 1 or sum(m) != d or min(m) < 0:
                    raise DomainError(f"entry index {key} does not match dims/degrees")
            if not K.is_zero(c):
                clean[key] = c
        self.entries = clean

    @property
    def p(self) -> int:
        return len(self.dims)

    def nvars(self) -> int:
        return sum(n + 1 for n in self.dims)

    def to_poly(self) -> Poly:
        """Multihomogeneous Poly in the concatenated variable groups."""
        return Poly(self.field, self.nvars(), {sum(k, ()): c for k, c in self.entries.items()}, clean=True)

    @classmethod
    def from_poly(cls, P: Poly, dims, degrees):
        entries = {}
        offs = _offsets(dims)
        for e, c in P.terms.items():
            entries[tuple(tuple(e[o : o + n + 1]) for o, n in zip(offs, dims))] = c
        return cls(tuple(dims), tuple(degrees), P.field, entries)

    @classmethod
    def rank_one(cls, forms, degrees, field, scale=None):
        """prod_j L_j^{d_j} (times ``scale``) as a MixedTensor."""
        dims = tuple(len(L) - 1 for L in forms)
        parts = [expand_power_linear(L, d, field) if d > 0 else Poly.constant(field, len(L), 1) for L, d in zip(forms, degrees)]
        entries = {(): field.one if scale is None else scale}
        for part in parts:
            new = {}
            for key, c in entries.items():
                for e, v in part.terms.items():
                    new[key + (e,)] = field.mul(c, v)
            entries = new
        return cls(dims, tuple(degrees), field, entries)

    def __add__(self, other):
        if (other.dims, other.degrees, other.field) != (self.dims, self.degrees, self.field):
            raise DomainError("mixed tensors of different shape")
        K = self.field
        out = dict(self.entries)
        for k, c in other.entries.items():
            v = K.add(out.get(k, K.zero), c)
            if K.is_zero(v):
                out.pop(k, None)
            else:
                out[k] = v
        return MixedTensor(self.dims, self.degrees, K, out)

    def scale(self, c):
        K = self.field
        return MixedTensor(self.dims, self.degrees, K, {k: K.mul(v, c) for k, v in self.entries.items()})

    def embed(self, E):
        if E == self.field:
            return self
        return MixedTensor(self.dims, self.degrees, E, {k: E.from_base(v) for k, v in self.entries.items()})

    def __eq__(self, other):
        return (
            isinstance(other, MixedTensor)
            and (self.dims, self.degrees, self.field) == (other.dims, other.degrees, other.field)
            and self.entries == other.entries
        )

    def coordinate_keys(self):
        return multi_basis(self.dims, self.degrees)


def _offsets(dims):
    offs, o = [], 0
    for n in dims:
        offs.append(o)
        o += n + 1
    return offs


def multi_basis(dims, degrees):
    """Product of the lex monomial bases, first factor slowest."""
    return list(product(*[monomial_basis(n + 1, d) for n, d in zip(dims, degrees)]))


@dataclass(frozen=True)
class FlatteningSpec:
    """Split d_i = a_i + b_i of every factor degree."""

    a: tuple
    b: tuple

    @classmethod
    def from_a(cls, a, degrees):
        a = tuple(a)
        if len(a) != len(degrees):
            raise DomainError("flattening spec length does not match the tensor")
        b = tuple(d - x for d, x in zip(degrees, a))
        if min(a) < 0 or min(b) < 0:
            raise DomainError("flattening spec must satisfy 0 <= a_i <= d_i")
        return cls(a, b)

    def validate(self, dims, degrees):
        if len(self.a) != len(dims) or len(self.b) != len(dims):
            raise DomainError("flattening spec length does not match the tensor")
        if any(x + y != d for x, y, d in zip(self.a, self.b, degrees)) or min(self.a + self.b) < 0:
            raise DomainError("flattening spec is not a split of the degrees")

    def M_A(self, dims) -> int:
        return math.prod(math.comb(x + n, n) for x, n in zip(self.a, dims)) - 1

    def M_B(self, dims) -> int:
        return math.prod(math.comb(x + n, n) for x, n in zip(self.b, dims)) - 1

    def swap(self) -> "FlatteningSpec":
        return FlatteningSpec(self.b, self.a)


def mixed_flattening(T: MixedTensor, spec: FlatteningSpec) -> Matrix:
    """Matrix of the (A,B)-flattening: rows are the mixed partials of
    multidegree a, columns their coefficients in the multidegree-b basis."""
    spec.validate(T.dims, T.degrees)
    K = T.field
    _check_char(K, max(T.degrees))
    rows_idx = multi_basis(T.dims, spec.a)
    cols_idx = multi_basis(T.dims, spec.b)
    z = K.zero
    rows = []
    for alpha in rows_idx:
        row = []
        for beta in cols_idx:
            key = tuple(tuple(x + y for x, y in zip(a, b)) for a, b in zip(alpha, beta))
            c = T.entries.get(key)
            if c is None:
                row.append(z)
                continue
            w = 1
            for kj, bj in zip(key, beta):
                w *= _falling(kj, bj)
            row.append(K.mul(c, K.from_int(w)))
        rows.append(row)
    return Matrix(K, rows, len(cols_idx))
