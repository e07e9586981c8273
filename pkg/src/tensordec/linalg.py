"""Exact dense linear algebra over the fields of ``tensordec.fields``.

Prime fields with p < 2**31 are eliminated with vectorized numpy int64
arithmetic (every intermediate product stays below 2**62).  Rationals use
fraction-free Bareiss elimination on cleared-denominator integer rows,
followed by a normalizing back substitution.  Everything else goes through
the generic field operations.
"""
from __future__ import annotations

import math
from collections import namedtuple
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import DomainError
from .fields import FieldElement, PrimeField, RationalField

RREFResult = namedtuple("RREFResult", "R rank pivots kernel")

_NUMPY_PRIME_LIMIT = 1 << 31


class Matrix:
    """Dense matrix of raw values over one field."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field, rows, ncols=None):
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise DomainError("ragged matrix rows")
        self.field = field
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def from_entries(cls, field, rows, ncols=None):
        """Build from ints, Fractions or FieldElements, coercing into field.

        FieldElements of a different field raise DomainError."""
        return cls(field, [[field.coerce(x) for x in r] for r in rows], ncols)

    @classmethod
    def from_elements(cls, rows):
        """Build from FieldElements only; the common field is inferred."""
        field = None
        for r in rows:
            for x in r:
                if not isinstance(x, FieldElement):
                    raise DomainError("from_elements expects FieldElement entries")
                if field is None:
                    field = x.field
                elif x.field != field:
                    raise DomainError("entries lie in different fields")
        if field is None:
            raise DomainError("cannot infer the field of an empty matrix")
        return cls(field, [[x.value for x in r] for r in rows])

    @classmethod
    def identity(cls, field, n):
        return cls(field, [[field.one if i == j else field.zero for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, field, m, n):
        return cls(field, [[field.zero] * n for _ in range(m)], n)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def element(self, i, j) -> FieldElement:
        return FieldElement(self.field, self.rows[i][j])

    def row(self, i):
        return list(self.rows[i])

    def col(self, j):
        return [r[j] for r in self.rows]

    def transpose(self) -> "Matrix":
        return Matrix(self.field, [list(c) for c in zip(*self.rows)] if self.rows else [], self.nrows)

    T = property(transpose)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __repr__(self):
        body = "; ".join(" ".join(self.field.to_str(x) for x in r) for r in self.rows)
        return f"Matrix({self.field!r}, {self.nrows}x{self.ncols}: [{body}])"

    def __matmul__(self, other):
        F = self.field
        if isinstance(other, Matrix):
            if other.field != F:
                raise DomainError("matrices over different fields")
            if other.nrows != self.ncols:
                raise DomainError("shape mismatch")
            cols = other.transpose().rows
            return Matrix(F, [[F.dot(r, c) for c in cols] for r in self.rows], other.ncols)
        vec = list(other)
        if len(vec) != self.ncols:
            raise DomainError("shape mismatch")
        return [F.dot(r, vec) for r in self.rows]

    def stack(self, other: "Matrix") -> "Matrix":
        if other.field != self.field or other.ncols != self.ncols:
            raise DomainError("cannot stack matrices of different shape or field")
        return Matrix(self.field, self.rows + other.rows, self.ncols)

    def select_rows(self, idx) -> "Matrix":
        return Matrix(self.field, [self.rows[i] for i in idx], self.ncols)

    def rref(self) -> RREFResult:
        return rref(self)

    def rank(self) -> int:
        return rref(self).rank

    def kernel(self) -> "Matrix":
        return rref(self).kernel

    def to_elements(self):
        return [[FieldElement(self.field, x) for x in r] for r in self.rows]


# ---------------------------------------------------------------------------
# elimination back ends; each returns (nonzero rref rows, pivot columns)


def _rref_numpy(rows, ncols, p):
    A = np.array(rows, dtype=np.int64).reshape(len(rows), ncols) % p
    nrows = A.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = A[r, c:] * inv % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[np.ix_(hit, np.arange(c, ncols))] = (
                A[np.ix_(hit, np.arange(c, ncols))] - np.outer(col[hit], A[r, c:])
            ) % p
        pivots.append(c)
        r += 1
    return [[int(x) for x in row] for row in A[:r]], pivots


def _rref_generic(rows, ncols, F):
    A = [list(r) for r in rows]
    nrows = len(A)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if not F.is_zero(A[i][c])), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F.mul(x, inv) for x in A[r]]
        prow = A[r]
        for i in range(nrows):
            if i != r and not F.is_zero(A[i][c]):
                f = A[i][c]
                Ai = A[i]
                A[i] = [F.sub(Ai[j], F.mul(f, prow[j])) if j >= c else Ai[j] for j in range(ncols)]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _rref_rational(rows, ncols):
    # clear denominators row by row, then Bareiss on integers
    A = []
    for row in rows:
        den = 1
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
        A.append([int(x * den) for x in row])
    nrows = len(A)
    pivots = []
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        pv = A[r][c]
        for i in range(r + 1, nrows):
            a = A[i][c]
            Ai, Ar = A[i], A[r]
            A[i] = [(pv * Ai[j] - a * Ar[j]) // prev if j >= c else 0 for j in range(ncols)]
        prev = pv
        pivots.append(c)
        r += 1
    E = A[:r]
    # back substitution to reduced form with exact fractions
    R = [None] * r
    for k in range(r - 1, -1, -1):
        row = [Fraction(x) for x in E[k]]
        for k2 in range(k + 1, r):
            f = row[pivots[k2]]
            if f:
                row = [x - f * y for x, y in zip(row, R[k2])]
        inv = 1 / row[pivots[k]]
        R[k] = [x * inv for x in row]
    return R, pivots


def _eliminate(field, rows, ncols):
    if not rows or ncols == 0:
        return [], []
    if isinstance(field, PrimeField) and field.p < _NUMPY_PRIME_LIMIT:
        return _rref_numpy(rows, ncols, field.p)
    if isinstance(field, RationalField):
        return _rref_rational(rows, ncols)
    return _rref_generic(rows, ncols, field)


def _kernel_from_rref(field, R, pivots, ncols):
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for row, pc in zip(R, pivots):
            v[pc] = field.neg(row[f])
        basis.append(v)
    return Matrix(field, basis, ncols)


def rref(M: Matrix) -> RREFResult:
    """Reduced row echelon form, rank, pivot columns and a kernel basis.

    R has the full shape of M (zero rows at the bottom)."""
    if not isinstance(M, Matrix):
        raise DomainError("rref expects a Matrix")
    F = M.field
    R, pivots = _eliminate(F, M.rows, M.ncols)
    kernel = _kernel_from_rref(F, R, pivots, M.ncols)
    full = R + [[F.zero] * M.ncols for _ in range(M.nrows - len(R))]
    return RREFResult(Matrix(F, full, M.ncols), len(pivots), tuple(pivots), kernel)


def row_basis(M: Matrix) -> Matrix:
    """Nonzero rows of the RREF: a canonical basis of the row space."""
    R, _ = _eliminate(M.field, M.rows, M.ncols)
    return Matrix(M.field, R, M.ncols)


def rank(M: Matrix) -> int:
    return len(_eliminate(M.field, M.rows, M.ncols)[1])


def rank_of_rows(field, rows, ncols) -> int:
    return len(_eliminate(field, rows, ncols)[1])


def kernel(M: Matrix) -> Matrix:
    R, pivots = _eliminate(M.field, M.rows, M.ncols)
    return _kernel_from_rref(M.field, R, pivots, M.ncols)


def left_kernel(M: Matrix) -> Matrix:
    """Row vectors y with y M = 0."""
    return kernel(M.transpose())


class LinearSolution:
    """Particular solution plus kernel basis of a consistent system."""

    __slots__ = ("particular", "kernel")

    def __init__(self, particular, kernel):
        self.particular = particular
        self.kernel = kernel

    @property
    def unique(self) -> bool:
        return self.kernel.nrows == 0

    def __repr__(self):
        return f"LinearSolution(particular={self.particular}, kernel_dim={self.kernel.nrows})"


INCONSISTENT = None


def solve_linear(A: Matrix, b) -> "LinearSolution | None":
    """Solve A x = b exactly; returns None when the system is inconsistent."""
    F = A.field
    b = [F.coerce(x) for x in b]
    if len(b) != A.nrows:
        raise DomainError("right-hand side length does not match")
    aug = [r + [bi] for r, bi in zip(A.rows, b)]
    R, pivots = _eliminate(F, aug, A.ncols + 1)
    if pivots and pivots[-1] == A.ncols:
        return INCONSISTENT
    x = [F.zero] * A.ncols
    for row, pc in zip(R, pivots):
        x[pc] = row[A.ncols]
    ker = _kernel_from_rref(F, [r[: A.ncols] for r in R], pivots, A.ncols)
    return LinearSolution(x, ker)


def solve_unique(A: Matrix, b):
    """Unique solution or None (inconsistent or underdetermined)."""
    sol = solve_linear(A, b)
    if sol is None or not sol.unique:
        return None
    return sol.particular


def inverse(M: Matrix) -> Matrix:
    F = M.field
    n = M.nrows
    if M.ncols != n:
        raise DomainError("inverse of a non-square matrix")
    aug = [r + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(M.rows)]
    R, pivots = _eliminate(F, aug, 2 * n)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise ZeroDivisionError("singular matrix")
    return Matrix(F, [r[n:] for r in R[:n]], n)


def determinant(M: Matrix):
    F = M.field
    n = M.nrows
    A = [list(r) for r in M.rows]
    det = F.one
    for c in range(n):
        piv = next((i for i in range(c, n) if not F.is_zero(A[i][c])), None)
        if piv is None:
            return F.zero
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = F.neg(det)
        det = F.mul(det, A[c][c])
        inv = F.inv(A[c][c])
        for i in range(c + 1, n):
            f = F.mul(A[i][c], inv)
            if not F.is_zero(f):
                A[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[i], A[c])]
    return det


def intersect_row_spaces(field, U, W, ncols):
    """Basis of span(U) ∩ span(W) for row-vector lists U, W."""
    if not U or not W:
        return []
    # x U = y W  <=>  (x, -y) lies in the left kernel of [U; W]
    stacked = Matrix(field, list(U) + list(W), ncols)
    ker = left_kernel(stacked)
    out = []
    for k in ker.rows:
        coeffs = k[: len(U)]
        v = [field.zero] * ncols
        for c, u in zip(coeffs, U):
            if not field.is_zero(c):
                v = [field.add(a, field.mul(c, b)) for a, b in zip(v, u)]
        out.append(v)
    return row_basis(Matrix(field, out, ncols)).rows if out else []


def random_invertible(field, n, rng, max_tries=100) -> Matrix:
    for _ in range(max_tries):
        M = Matrix(field, [[field.random(rng) for _ in range(n)] for _ in range(n)], n)
        if rank(M) == n:
            return M
    raise DomainError("could not draw an invertible matrix (field too small?)")


# ---------------------------------------------------------------------------
# symbolic minors


def minors(M, k: int, symmetric: bool = False):
    """All k x k minors of a matrix with ring-valued entries (Poly or raw
    numbers supporting +, -, *), by Laplace expansion along the first row
    with memoized sub-minors.

    ``M`` is a list of rows.  With ``symmetric=True`` the matrix is assumed
    symmetric and only minors with row set <= column set are returned,
    since the (R, C) and (C, R) minors coincide.  Zero minors are kept so
    the count is predictable: C(nrows, k) * C(ncols, k) without the
    symmetric flag.
    """
    rows = [list(r) for r in M.rows] if isinstance(M, Matrix) else [list(r) for r in M]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    if k <= 0:
        raise DomainError("minor size must be positive")
    if k > min(nrows, ncols):
        raise DomainError(f"minor size {k} exceeds matrix dimensions {nrows}x{ncols}")
    cache = {}

    def minor(R, C):
        if len(R) == 1:
            return rows[R[0]][C[0]]
        key = (R, C)
        hit = cache.get(key)
        if hit is not None:
            return hit
        r0 = R[0]
        rest = R[1:]
        acc = None
        for j, c in enumerate(C):
            entry = rows[r0][c]
            if _is_zero_entry(entry):
                continue
            sub = minor(rest, C[:j] + C[j + 1 :])
            if _is_zero_entry(sub):
                continue
            term = entry * sub
            if acc is None:
                acc = term if j % 2 == 0 else -term
            elif j % 2 == 0:
                acc = acc + term
            else:
                acc = acc - term
        if acc is None:
            acc = _zero_like(rows[r0][C[0]])
        cache[key] = acc
        return acc

    out = []
    for R in combinations(range(nrows), k):
        for C in combinations(range(ncols), k):
            if symmetric and R > C:
                continue
            out.append(minor(R, C))
    return out


def _is_zero_entry(x) -> bool:
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


def _zero_like(x):
    if hasattr(x, "zero_like"):
        return x.zero_like()
    return 0 * x


class LinearSubspace:
    """Projective linear subspace P(span(rows of basis)) of P^{N}.

    The basis rows must be independent; ``dim`` is the projective
    dimension.  ``tag`` records where the subspace came from."""

    __slots__ = ("basis", "tag")

    def __init__(self, basis: Matrix, tag: str = ""):
        if rank(basis) != basis.nrows:
            raise DomainError("basis rows of a LinearSubspace must be independent")
        self.basis = basis
        self.tag = tag

    @classmethod
    def span(cls, field, vectors, ncols, tag=""):
        """Subspace spanned by possibly dependent vectors; keeps the given
        vectors when they are already independent."""
        M = Matrix(field, vectors, ncols)
        if rank(M) == M.nrows:
            return cls(M, tag)
        return cls(row_basis(M), tag)

    @property
    def field(self):
        return self.basis.field

    @property
    def ambient_dim(self) -> int:
        return self.basis.ncols

    @property
    def dim(self) -> int:
        return self.basis.nrows - 1

    def contains(self, v) -> bool:
        return rank(Matrix(self.field, self.basis.rows + [list(v)], self.ambient_dim)) == self.basis.nrows

    def point(self, xi):
        """Ambient coordinates of the point with coordinates xi in the basis."""
        F = self.field
        out = [F.zero] * self.ambient_dim
        for c, row in zip(xi, self.basis.rows):
            if not F.is_zero(c):
                out = [F.add(a, F.mul(c, b)) for a, b in zip(out, row)]
        return out

    def __repr__(self):
        return f"LinearSubspace(dim={self.dim}, ambient={self.ambient_dim}, tag={self.tag!r})"
