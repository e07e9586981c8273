"""Groebner bases, normal forms, FGLM and zero-dimensional solving.

Monomials are packed into single Python ints

    M = (order_key << S) | exponents

where ``exponents`` holds one 16-bit field per variable (top bit kept free
as a guard) and ``order_key`` packs the rows of the order's weight matrix.
Comparing packed ints compares monomials, multiplying monomials is integer
addition, and b | a is a single masked subtraction.

Pair handling follows Gebauer-Moeller; inputs are first interreduced by
linear algebra on their coefficient matrix.
"""
from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass

from . import univariate as up
from .errors import DegenerateCoordinates, DomainError, NonRationalPoints, PositiveDimensional
from .fields import PrimeField, RationalField, extension_field
from .linalg import Matrix, _eliminate, random_invertible
from .poly import GREVLEX, LEX, MonomialOrder, Poly

__all__ = [
    "GroebnerBasis",
    "QuotientBasis",
    "SolutionPoint",
    "buchberger",
    "normal_form",
    "quotient_basis",
    "fglm_to_lex",
    "solve_zero_dim",
    "univariate_factor",
    "eliminate",
    "count_distinct_points",
    "STRATEGIES",
]

_EBITS = 16
_EMAX = (1 << (_EBITS - 1)) - 1
_KBITS = 20

STRATEGIES = ("normal", "sugar", "fifo", "random")


class _Packer:
    """Packs exponent tuples for a fixed (nvars, order)."""

    def __init__(self, nvars: int, order: MonomialOrder):
        self.nvars = nvars
        self.order = order
        self.rows = order.weight_rows(nvars)
        self.S = _EBITS * nvars
        self.mask = (1 << self.S) - 1
        self.guard = sum(1 << (_EBITS * i + _EBITS - 1) for i in range(nvars))
        self.shifts = [_EBITS * i for i in range(nvars)]
        # per-variable packed unit monomials: pack(e_i)
        self.units = [self.pack(tuple(1 if j == i else 0 for j in range(nvars))) for i in range(nvars)]

    def pack(self, e) -> int:
        if any(a > _EMAX for a in e):
            raise DomainError("exponent too large for the packed representation")
        low = 0
        for a, sh in zip(e, self.shifts):
            low |= a << sh
        key = 0
        for row in self.rows:
            key = (key << _KBITS) | sum(w * a for w, a in zip(row, e) if w)
        return (key << self.S) | low

    def unpack(self, m: int):
        return tuple((m >> sh) & 0xFFFF for sh in self.shifts)

    def divides(self, b: int, a: int) -> bool:
        g = self.guard
        return ((a & self.mask) + g - (b & self.mask)) & g == g

    def lcm(self, a: int, b: int) -> int:
        ea, eb = self.unpack(a), self.unpack(b)
        return self.pack(tuple(x if x > y else y for x, y in zip(ea, eb)))

    def coprime(self, a: int, b: int) -> bool:
        ea, eb = self.unpack(a), self.unpack(b)
        return not any(x and y for x, y in zip(ea, eb))

    def deg(self, m: int) -> int:
        return sum(self.unpack(m))


def _to_internal(f: Poly, pk: _Packer):
    """Poly -> {packed monomial: coeff}."""
    return {pk.pack(e): c for e, c in f.terms.items()}


def _from_internal(terms, pk: _Packer, field, nvars) -> Poly:
    return Poly(field, nvars, {pk.unpack(m): c for m, c in terms}, clean=True)


class _Reducers:
    """Monic polynomials (lm, lm exponent bits, tail) with a divisor cache.

    Cache entries record either a reducer index or how many reducers were
    already checked, so new reducers are tested incrementally."""

    def __init__(self, pk: _Packer):
        self.pk = pk
        self.items = []
        self.cache = {}

    def add(self, lm: int, tail):
        self.items.append((lm, lm & self.pk.mask, tail))

    def find(self, m: int):
        items = self.items
        hit = self.cache.get(m)
        start = 0
        if hit is not None:
            if hit[0] >= 0:
                return items[hit[0]]
            start = hit[1]
        em = m & self.pk.mask
        g = self.pk.guard
        for idx in range(start, len(items)):
            if (em + g - items[idx][1]) & g == g:
                self.cache[m] = (idx, 0)
                return items[idx]
        self.cache[m] = (-1, len(items))
        return None


def _reduce(f: dict, red: _Reducers, F, full: bool = True):
    """Normal form of the internal polynomial f (consumed).  Returns a
    list of (monomial, coeff) in descending order."""
    heap = [-m for m in f]
    heapq.heapify(heap)
    out = []
    pop, push = heapq.heappop, heapq.heappush
    if isinstance(F, PrimeField):
        p = F.p
        while heap:
            m = -pop(heap)
            c = f.pop(m) % p
            if not c:
                continue
            r = red.find(m)
            if r is None:
                out.append((m, c))
                if not full:
                    rest = sorted(((mm, cc % p) for mm, cc in f.items() if cc % p), reverse=True)
                    return out + rest
                continue
            q = m - r[0]
            for tm, tc in r[2]:
                nm = tm + q
                old = f.get(nm)
                if old is None:
                    f[nm] = -c * tc
                    push(heap, -nm)
                else:
                    f[nm] = (old - c * tc) % p
        return out
    while heap:
        m = -pop(heap)
        c = f.pop(m)
        if F.is_zero(c):
            continue
        r = red.find(m)
        if r is None:
            out.append((m, c))
            if not full:
                rest = sorted(((mm, cc) for mm, cc in f.items() if not F.is_zero(cc)), reverse=True)
                return out + rest
            continue
        q = m - r[0]
        for tm, tc in r[2]:
            nm = tm + q
            old = f.get(nm)
            prod = F.mul(c, tc)
            if old is None:
                f[nm] = F.neg(prod)
                push(heap, -nm)
            else:
                f[nm] = F.sub(old, prod)
    return out


def _make_monic(terms, F):
    """terms descending (m, c) list -> (lm, tail) with unit leading coeff."""
    lm, lc = terms[0]
    if F.is_zero(F.sub(lc, F.one)):
        return lm, terms[1:]
    inv = F.inv(lc)
    return lm, [(m, F.mul(c, inv)) for m, c in terms[1:]]


def _linear_interreduce(polys, pk: _Packer, F):
    """Gauss-Jordan on the coefficient matrix (columns = monomials in
    descending order); returns monic polys with distinct leading terms."""
    mons = sorted({m for f in polys for m in f}, reverse=True)
    if not mons:
        return []
    col = {m: i for i, m in enumerate(mons)}
    z = F.zero
    rows = []
    for f in polys:
        r = [z] * len(mons)
        for m, c in f.items():
            r[col[m]] = c
        rows.append(r)
    R, _ = _eliminate(F, rows, len(mons))
    out = []
    for r in R:
        terms = [(mons[j], c) for j, c in enumerate(r) if not F.is_zero(c)]
        out.append(_make_monic(terms, F))
    return out


@dataclass
class QuotientBasis:
    monomials: list | None
    finite: bool

    @property
    def count(self):
        return len(self.monomials) if self.finite else None

    def __len__(self):
        if not self.finite:
            raise PositiveDimensional("quotient is infinite dimensional")
        return len(self.monomials)


class GroebnerBasis:
    """Reduced Groebner basis; generators are monic Polys sorted by
    increasing leading monomial."""

    def __init__(self, field, nvars, order, lead_tail, pk=None):
        self.field = field
        self.nvars = nvars
        self.order = order
        self.reduced = True
        self._pk = pk or _Packer(nvars, order)
        self._lt = sorted(lead_tail, key=lambda t: t[0])
        self.generators = [
            _from_internal([(lm, field.one)] + list(tail), self._pk, field, nvars) for lm, tail in self._lt
        ]
        self._reducers = None
        self._quotient = None
        self._mult = {}

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and self.order == other.order
            and self.nvars == other.nvars
            and self.field == other.field
            and self.generators == other.generators
        )

    def __repr__(self):
        return f"GroebnerBasis({len(self.generators)} generators, {self.order!r})"

    @property
    def leading_monomials(self):
        return [self._pk.unpack(lm) for lm, _ in self._lt]

    @property
    def is_unit(self) -> bool:
        return len(self._lt) == 1 and self._lt[0][0] == 0

    def reducers(self) -> _Reducers:
        if self._reducers is None:
            red = _Reducers(self._pk)
            for lm, tail in self._lt:
                red.add(lm, tail)
            self._reducers = red
        return self._reducers

    def normal_form(self, f: Poly) -> Poly:
        if f.nvars != self.nvars or f.field != self.field:
            raise DomainError("polynomial not in the ring of the basis")
        out = _reduce(_to_internal(f, self._pk), self.reducers(), self.field)
        return _from_internal(out, self._pk, self.field, self.nvars)

    def contains(self, f: Poly) -> bool:
        return self.normal_form(f).is_zero()

    def quotient_basis(self) -> QuotientBasis:
        if self._quotient is None:
            self._quotient = quotient_basis(self)
        return self._quotient

    @property
    def degree(self):
        return self.quotient_basis().count

    @property
    def zero_dimensional(self) -> bool:
        return self.quotient_basis().finite

    # quotient-ring linear algebra ----------------------------------------

    def _std_index(self):
        qb = self.quotient_basis()
        if not qb.finite:
            raise PositiveDimensional("ideal is not zero-dimensional")
        return {self._pk.pack(m): i for i, m in enumerate(qb.monomials)}

    def _nf_vector_packed(self, terms: dict, index):
        F = self.field
        v = [F.zero] * len(index)
        for m, c in _reduce(terms, self.reducers(), F):
            v[index[m]] = c
        return v

    def multiplication_matrix(self, var: int):
        """Columns: coordinates of NF(x_var * b) for standard monomials b.
        Returned as list of columns."""
        if var not in self._mult:
            index = self._std_index()
            unit = self._pk.units[var]
            cols = [None] * len(index)
            for m, i in index.items():
                cols[i] = self._nf_vector_packed({m + unit: self.field.one}, index)
            self._mult[var] = cols
        return self._mult[var]


# ---------------------------------------------------------------------------
# Buchberger


def buchberger(gens, order: MonomialOrder = GREVLEX, strategy: str = "normal", seed: int = 0) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``."""
    gens = list(gens)
    if not gens:
        raise DomainError("need at least one generator to fix the ring")
    F, nvars = gens[0].field, gens[0].nvars
    for g in gens:
        if g.field != F or g.nvars != nvars:
            raise DomainError("generators lie in different rings")
    if strategy not in STRATEGIES:
        raise DomainError(f"unknown strategy {strategy!r}")
    pk = _Packer(nvars, order)
    inputs = [_to_internal(g, pk) for g in gens if not g.is_zero()]
    start = _linear_interreduce(inputs, pk, F)
    if any(lm == 0 for lm, _ in start):
        return GroebnerBasis(F, nvars, order, [(0, [])], pk)
    return _buchberger_core(start, pk, F, nvars, order, strategy, seed)


def _buchberger_core(start, pk, F, nvars, order, strategy, seed):
    rng = random.Random(seed)
    lms, tails, sug = [], [], []
    red = _Reducers(pk)
    active = []
    pairs = []
    counter = [0]

    def pair_key(L, s):
        counter[0] += 1
        if strategy == "normal":
            return (L, s, counter[0])
        if strategy == "sugar":
            return (s, L, counter[0])
        if strategy == "fifo":
            return (counter[0],)
        return (rng.random(), counter[0])

    def pair_sugar(i, j, L):
        dL = pk.deg(L)
        return max(sug[i] + dL - pk.deg(lms[i]), sug[j] + dL - pk.deg(lms[j]))

    def update(h):
        nonlocal pairs, active
        lm_h = lms[h]
        C = [(g, pk.lcm(lm_h, lms[g])) for g in active]
        D = []
        for idx, (g1, L1) in enumerate(C):
            if pk.coprime(lm_h, lms[g1]):
                D.append((g1, L1, True))
                continue
            dominated = False
            for g2, L2 in C[idx + 1 :]:
                if pk.divides(L2, L1):
                    dominated = True
                    break
            if not dominated:
                for g2, L2, _ in D:
                    if pk.divides(L2, L1):
                        dominated = True
                        break
            if not dominated:
                D.append((g1, L1, False))
        kept = []
        for entry in pairs:
            L, i, j = entry[-3], entry[-2], entry[-1]
            if pk.divides(lm_h, L) and pk.lcm(lms[i], lm_h) != L and pk.lcm(lms[j], lm_h) != L:
                continue
            kept.append(entry)
        for g1, L1, cop in D:
            if not cop:
                kept.append(pair_key(L1, pair_sugar(g1, h, L1)) + (L1, g1, h))
        heapq.heapify(kept)
        pairs = kept
        active = [g for g in active if not pk.divides(lm_h, lms[g])] + [h]

    def add_poly(lm, tail, s):
        lms.append(lm)
        tails.append(tail)
        sug.append(s)
        red.add(lm, tail)
        update(len(lms) - 1)

    for lm, tail in sorted(start, key=lambda t: t[0]):
        s = max(pk.deg(lm), max((pk.deg(m) for m, _ in tail), default=0))
        # a later input can have a leading monomial divisible by an earlier one
        r = _reduce(dict([(lm, F.one)] + list(tail)), red, F)
        if not r:
            continue
        lm, tail = _make_monic(r, F)
        if lm == 0:
            return GroebnerBasis(F, nvars, order, [(0, [])], pk)
        add_poly(lm, tail, s)

    while pairs:
        entry = heapq.heappop(pairs)
        L, i, j = entry[-3], entry[-2], entry[-1]
        s = pair_sugar(i, j, L)
        u, v = L - lms[i], L - lms[j]
        f = {}
        if isinstance(F, PrimeField):
            p = F.p
            for m, c in tails[i]:
                f[m + u] = c
            for m, c in tails[j]:
                k = m + v
                f[k] = (f.get(k, 0) - c) % p
        else:
            for m, c in tails[i]:
                f[m + u] = c
            for m, c in tails[j]:
                k = m + v
                f[k] = F.sub(f.get(k, F.zero), c)
        r = _reduce(f, red, F)
        if not r:
            continue
        lm, tail = _make_monic(r, F)
        if lm == 0:
            return GroebnerBasis(F, nvars, order, [(0, [])], pk)
        add_poly(lm, tail, s)

    # interreduce tails modulo the final active set
    final = _Reducers(pk)
    for g in active:
        final.add(lms[g], tails[g])
    out = []
    for g in active:
        tail = _reduce(dict(tails[g]), final, F) if tails[g] else []
        out.append((lms[g], tail))
    return GroebnerBasis(F, nvars, order, out, pk)


def normal_form(f: Poly, G: GroebnerBasis) -> Poly:
    return G.normal_form(f)


def quotient_basis(G: GroebnerBasis) -> QuotientBasis:
    n = G.nvars
    lms = G.leading_monomials
    if any(sum(m) == 0 for m in lms):
        return QuotientBasis([], True)
    for i in range(n):
        if not any(m[i] > 0 and sum(m) == m[i] for m in lms):
            return QuotientBasis(None, False)

    def reducible(e):
        return any(all(a >= b for a, b in zip(e, m)) for m in lms)

    seen = {(0,) * n}
    stack = [(0,) * n]
    std = []
    while stack:
        e = stack.pop()
        if reducible(e):
            continue
        std.append(e)
        for i in range(n):
            ne = e[:i] + (e[i] + 1,) + e[i + 1 :]
            if ne not in seen:
                seen.add(ne)
                stack.append(ne)
    pk = G._pk
    std.sort(key=pk.pack)
    return QuotientBasis(std, True)


# ---------------------------------------------------------------------------
# FGLM


def fglm_to_lex(G: GroebnerBasis, target: MonomialOrder = LEX) -> GroebnerBasis:
    """Change of order for a zero-dimensional ideal; returns the reduced
    GB for ``target``."""
    if G.order == target:
        return G
    qb = G.quotient_basis()
    if not qb.finite:
        raise PositiveDimensional("FGLM needs a zero-dimensional ideal")
    F = G.field
    n = G.nvars
    if G.is_unit:
        return GroebnerBasis(F, n, target, [(0, [])])
    D = len(qb.monomials)
    mult = [G.multiplication_matrix(i) for i in range(n)]
    tpk = _Packer(n, target)

    def apply(i, v):
        cols = mult[i]
        out = [F.zero] * D
        for j, c in enumerate(v):
            if not F.is_zero(c):
                col = cols[j]
                for k in range(D):
                    if not F.is_zero(col[k]):
                        out[k] = F.add(out[k], F.mul(c, col[k]))
        return out

    # echelon rows: (pivot, row, combination over new standard monomials)
    ech = []
    new_std = []
    lex_lt = []
    lex_lms = []
    index = G._std_index()
    one_vec = G._nf_vector_packed({0: F.one}, index)
    cand = [(0, one_vec)]
    seen = {0}
    while cand:
        m, v = heapq.heappop(cand)
        if any(tpk.divides(l, m) for l in lex_lms):
            continue
        # reduce v against the echelon rows
        w = list(v)
        comb = [F.zero] * len(new_std)
        for piv, row, rc in ech:
            c = w[piv]
            if not F.is_zero(c):
                w = [F.sub(a, F.mul(c, b)) for a, b in zip(w, row)]
                for k, x in enumerate(rc):
                    if not F.is_zero(x):
                        comb[k] = F.sub(comb[k], F.mul(c, x))
        piv = next((k for k, x in enumerate(w) if not F.is_zero(x)), None)
        if piv is None:
            # v + sum comb_k * vec(b_k) = 0  ->  m + sum comb_k b_k in I
            tail = sorted(((new_std[k], c) for k, c in enumerate(comb) if not F.is_zero(c)), reverse=True)
            lex_lt.append((m, tail))
            lex_lms.append(m)
            continue
        inv = F.inv(w[piv])
        row = [F.mul(x, inv) for x in w]
        rc = [F.mul(x, inv) for x in comb] + [inv]
        ech.append((piv, row, rc))
        new_std.append(m)
        for i in range(n):
            nm = m + tpk.units[i]
            if nm not in seen:
                seen.add(nm)
                heapq.heappush(cand, (nm, apply(i, v)))
    return GroebnerBasis(F, n, target, lex_lt, tpk)


# ---------------------------------------------------------------------------
# solving


@dataclass
class SolutionPoint:
    """A point over ``field`` (``degree`` = extension degree of its field
    of definition over the prime field)."""

    coordinates: tuple
    multiplicity: int = 1
    field: object = None
    degree: int = 1


def univariate_factor(f: Poly, seed: int = 0):
    """Monic irreducible factors with multiplicities of a univariate Poly."""
    if f.nvars != 1:
        raise DomainError("univariate_factor expects a polynomial in one variable")
    if f.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    F = f.field
    if f.degree() < 1:
        raise DomainError("need a polynomial of positive degree")
    dense = _dense(f)
    _, facs = up.factor(dense, F, seed)
    return [(Poly(F, 1, {(i,): c for i, c in enumerate(g) if not F.is_zero(c)}, clean=True), m) for g, m in facs]


def _dense(f: Poly):
    F = f.field
    d = f.degree()
    out = [F.zero] * (d + 1)
    for (k,), c in f.terms.items():
        out[k] = c
    return out


def _shape(L: GroebnerBasis):
    """(eliminant dense, [dense x_i polys]) when in shape position."""
    n = L.nvars
    if len(L.generators) != n:
        return None
    F = L.field
    last = n - 1
    elim = None
    back = [None] * (n - 1)
    for g in L.generators:
        lm = g.leading_term(L.order)[0]
        if any(lm[:last]):
            i = next(k for k in range(last) if lm[k])
            if lm[i] != 1 or sum(lm) != 1:
                return None
            h = [F.zero] * (L.degree)
            for e, c in g.terms.items():
                if e == lm:
                    continue
                if any(e[:last]):
                    return None
                h[e[last]] = F.neg(c)
            back[i] = up.trim(h, F)
        else:
            d = lm[last]
            elim = [F.zero] * (d + 1)
            for e, c in g.terms.items():
                elim[e[last]] = c
    if elim is None or any(b is None for b in back):
        return None
    if len(elim) - 1 != L.degree:
        return None
    return elim, back


def _linear_change(f: Poly, A: Matrix) -> Poly:
    """f(A y) as a polynomial in y."""
    F = f.field
    images = [Poly.linear(F, A.rows[i]) for i in range(f.nvars)]
    return f.substitute(images)


def _embed_dense(a, E, F):
    if E == F:
        return a
    return [E.from_base(c) for c in a]


def _roots_finite(elim, F, seed):
    """[(root, multiplicity, degree, field)] over minimal common extension."""
    _, facs = up.factor(elim, F, seed)
    if not facs:
        return [], F
    K = 1
    for g, _m in facs:
        K = K * (len(g) - 1) // math.gcd(K, len(g) - 1)
    if K == 1:
        E = F
    else:
        if not isinstance(F, PrimeField):
            raise DomainError("points outside the field; nested extensions are not supported")
        E = extension_field(F.p, K)
    rng = random.Random(seed + 1)
    out = []
    for g, mult in facs:
        k = len(g) - 1
        if k == 1:
            r = F.neg(g[0])
            out.append((E.from_base(r) if E != F else r, mult, 1))
            continue
        gE = _embed_dense(g, E, F)
        for lin in up.equal_degree(gE, 1, E, rng):
            out.append((E.neg(lin[0]), mult, k))
    return out, E


def _roots_rational(elim):
    """Rational roots of a univariate polynomial with Fraction coefficients."""
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(elim) if c)
    _, factors = sympy.factor_list(sympy.Poly(expr, x, domain="QQ"))
    out = []
    for fac, mult in factors:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            from fractions import Fraction

            out.append((Fraction(int(r.p), int(r.q)), int(mult)))
    return out


def solve_zero_dim(G: GroebnerBasis, seed: int = 0, retries: int = 5):
    """All points of a zero-dimensional ideal, over the smallest common
    extension of the prime field (or over Q when every point is rational)."""
    F = G.field
    n = G.nvars
    qb = G.quotient_basis()
    if not qb.finite:
        raise PositiveDimensional("ideal is not zero-dimensional")
    D = len(qb.monomials)
    if D == 0:
        return []
    if n == 0:
        return [SolutionPoint((), 1, F, 1)]
    rng = random.Random(seed)
    for attempt in range(retries + 1):
        if attempt == 0:
            A, Gt = None, G
        else:
            A = random_invertible(F, n, rng)
            Gt = buchberger([_linear_change(g, A) for g in G.generators], G.order)
        L = fglm_to_lex(Gt, LEX) if n > 1 else Gt
        shape = _shape(L)
        if shape is not None:
            break
    else:
        raise DegenerateCoordinates(f"no shape position after {retries} random coordinate changes")
    elim, back = shape
    if isinstance(F, RationalField):
        roots = _roots_rational(elim)
        if sum(m for _, m in roots) != D:
            raise NonRationalPoints("some solution points are not rational")
        roots = [(r, m, 1) for r, m in roots]
        E = F
    elif F.order is not None:
        roots, E = _roots_finite(elim, F, seed)
    else:
        raise DomainError("unsupported field")
    points = []
    backE = [_embed_dense(b, E, F) for b in back]
    for r, mult, k in roots:
        y = [up.evaluate(b, r, E) for b in backE] + [r]
        if A is not None:
            AE = [[E.from_base(a) if E != F else a for a in row] for row in A.rows]
            x = [E.dot(row, y) for row in AE]
        else:
            x = y
        points.append(SolutionPoint(tuple(x), mult, E, k))
    points.sort(key=lambda P: (P.degree, [repr(c) for c in P.coordinates]))
    return points


def count_distinct_points(G: GroebnerBasis, seed: int = 0, tries: int = 3):
    """Number of distinct points over the closure of a zero-dim ideal, via
    the squarefree part of the minimal polynomial of a random linear form
    acting on the quotient.  Returns the maximum seen over ``tries`` forms
    (a non-separating form can only undercount)."""
    F = G.field
    qb = G.quotient_basis()
    if not qb.finite:
        raise PositiveDimensional("ideal is not zero-dimensional")
    D = len(qb.monomials)
    if D <= 1 or G.nvars == 0:
        return D
    rng = random.Random(seed)
    mult = [G.multiplication_matrix(i) for i in range(G.nvars)]
    index = G._std_index()
    best = 0
    for _ in range(tries):
        ell = [F.random(rng) for _ in range(G.nvars)]
        cols = []
        for j in range(D):
            col = [F.zero] * D
            for i, a in enumerate(ell):
                if not F.is_zero(a):
                    src = mult[i][j]
                    col = [F.add(x, F.mul(a, y)) for x, y in zip(col, src)]
            cols.append(col)
        mp = _krylov_minpoly(cols, G._nf_vector_packed({0: F.one}, index), F)
        if F.order is not None:
            sqf = up.squarefree_decomposition(mp, F)
            distinct = sum((len(g) - 1) for g, _ in sqf)
        else:
            distinct = _q_squarefree_degree(mp)
        best = max(best, distinct)
        if best == D:
            break
    return best


def _krylov_minpoly(cols, v0, F):
    D = len(v0)
    ech = []
    vecs = []
    v = v0
    for k in range(D + 1):
        w = list(v)
        comb = [F.zero] * k
        for piv, row, rc in ech:
            c = w[piv]
            if not F.is_zero(c):
                w = [F.sub(a, F.mul(c, b)) for a, b in zip(w, row)]
                for t, x in enumerate(rc):
                    if not F.is_zero(x):
                        comb[t] = F.sub(comb[t], F.mul(c, x))
        piv = next((t for t, x in enumerate(w) if not F.is_zero(x)), None)
        if piv is None:
            return comb + [F.one]
        inv = F.inv(w[piv])
        ech.append((piv, [F.mul(x, inv) for x in w], [F.mul(x, inv) for x in comb] + [inv]))
        vecs.append(v)
        nv = [F.zero] * D
        for j, c in enumerate(v):
            if not F.is_zero(c):
                col = cols[j]
                nv = [F.add(a, F.mul(c, b)) for a, b in zip(nv, col)]
        v = nv
    raise AssertionError("Krylov sequence did not terminate")


def _q_squarefree_degree(mp):
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(mp) if c)
    P = sympy.Poly(expr, x, domain="QQ")
    g = sympy.gcd(P, P.diff(x))
    return P.degree() - g.degree()


def eliminate(gens, keep, weights=None) -> GroebnerBasis:
    """Groebner basis (grevlex in the kept variables, in the given order)
    of the elimination ideal I ∩ K[x_keep].

    With ``weights`` (one positive weight per original variable) for which
    every generator is weighted homogeneous, a weighted elimination order
    is used; this keeps Buchberger degree-by-degree."""
    gens = list(gens)
    F, n = gens[0].field, gens[0].nvars
    keep = list(keep)
    drop = [i for i in range(n) if i not in keep]
    perm = drop + keep  # new variable j is old variable perm[j]
    images = [None] * n
    for j, old in enumerate(perm):
        images[old] = Poly.variable(F, n, j)
    moved = [g.substitute(images) if not g.is_zero() else g for g in gens]
    if weights is None:
        order = MonomialOrder("block", len(drop))
    else:
        order = MonomialOrder("welim", len(drop), tuple(weights[old] for old in perm))
    G = buchberger(moved, order)
    k = len(drop)
    out = []
    for lm, tail in G._lt:
        e = G._pk.unpack(lm)
        if any(e[:k]):
            continue
        out.append([(G._pk.unpack(lm), F.one)] + [(G._pk.unpack(m), c) for m, c in tail])
    kpk = _Packer(len(keep), GREVLEX)
    lt = []
    for terms in out:
        packed = sorted(((kpk.pack(e[k:]), c) for e, c in terms), reverse=True)
        lt.append((packed[0][0], packed[1:]))
    return GroebnerBasis(F, len(keep), GREVLEX, lt, kpk)
