"""Sparse multivariate polynomials, monomial orders and coefficient spaces.

A ``Poly`` maps exponent tuples to nonzero raw coefficients of one field.
Monomial bases of homogeneous pieces use plain monomials x^m; the
weighted basis needed by the Omega form lives in ``flattenings``.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from operator import add as _add

from .errors import DomainError, ParseError, SmallCharacteristicError
from .fields import FieldElement, PrimeField

__all__ = [
    "MonomialOrder",
    "GREVLEX",
    "LEX",
    "Poly",
    "monomial_basis",
    "coeff_vector",
    "from_coeff_vector",
    "expand_power_linear",
    "partial_derivative",
    "multinomial",
    "parse_poly",
    "compositions",
]


class MonomialOrder:
    """grevlex, lex, or a block order (grevlex on the first ``block``
    variables, then grevlex on the rest) used for elimination.

    ``welim`` first compares a positive weighted degree, then the degree in
    the first block, then grevlex within each block.  It eliminates the
    first block from ideals that are homogeneous for ``weights``."""

    __slots__ = ("kind", "block", "weights")

    def __init__(self, kind: str = "grevlex", block: int | None = None, weights=None):
        if kind not in ("grevlex", "lex", "block", "welim"):
            raise DomainError(f"unknown monomial order {kind!r}")
        if kind in ("block", "welim") and (block is None or block < 0):
            raise DomainError("block order needs the size of the first block")
        if kind == "welim" and (weights is None or min(weights) <= 0):
            raise DomainError("weighted elimination order needs positive weights")
        self.kind = kind
        self.block = block if kind in ("block", "welim") else None
        self.weights = tuple(weights) if kind == "welim" else None

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.block, self.weights) == (
            other.kind,
            other.block,
            other.weights,
        )

    def __hash__(self):
        return hash((self.kind, self.block, self.weights))

    def __repr__(self):
        if self.kind == "block":
            return f"MonomialOrder('block', {self.block})"
        if self.kind == "welim":
            return f"MonomialOrder('welim', {self.block}, {self.weights})"
        return f"MonomialOrder({self.kind!r})"

    def weight_rows(self, nvars: int):
        """Integer rows W such that comparing (W e) lexicographically
        realizes the order."""
        return _weight_rows(self.kind, self.block, nvars, self.weights)

    def key(self, exps):
        rows = self.weight_rows(len(exps))
        return tuple(sum(w * e for w, e in zip(row, exps)) for row in rows)


@lru_cache(maxsize=None)
def _weight_rows(kind, block, nvars, weights=None):
    def grevlex_rows(offset, size):
        rows = []
        for length in range(size, 0, -1):
            row = [0] * nvars
            for i in range(offset, offset + length):
                row[i] = 1
            rows.append(tuple(row))
        return rows

    if kind == "lex":
        return tuple(tuple(1 if i == j else 0 for j in range(nvars)) for i in range(nvars))
    if kind == "grevlex":
        return tuple(grevlex_rows(0, nvars))
    k = min(block, nvars)
    if kind == "welim":
        if len(weights) != nvars:
            raise DomainError("one weight per variable is required")
        head = [tuple(weights), tuple(1 if i < k else 0 for i in range(nvars))]
        return tuple(head + grevlex_rows(0, k) + grevlex_rows(k, nvars - k))
    return tuple(grevlex_rows(0, k) + grevlex_rows(k, nvars - k))


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def compositions(nvars: int, d: int):
    """All exponent tuples of length nvars and total degree d, lex descending."""
    if nvars == 0:
        return [()] if d == 0 else []
    if nvars == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in compositions(nvars - 1, d - first):
            out.append((first,) + rest)
    return out


@lru_cache(maxsize=None)
def _basis(nvars, d, order):
    mons = compositions(nvars, d)
    if order != LEX:
        mons = sorted(mons, key=order.key, reverse=True)
    return tuple(mons)


def monomial_basis(nvars: int, d: int, order: MonomialOrder = LEX):
    """All C(nvars-1+d, d) monomials of degree d, largest first."""
    if d < 0:
        raise DomainError("negative degree")
    return _basis(nvars, d, order)


@lru_cache(maxsize=None)
def _index(nvars, d, order):
    return {m: i for i, m in enumerate(_basis(nvars, d, order))}


def monomial_index(nvars: int, d: int, order: MonomialOrder = LEX):
    return _index(nvars, d, order)


@lru_cache(maxsize=4096)
def multinomial(exps) -> int:
    out = math.factorial(sum(exps))
    for e in exps:
        out //= math.factorial(e)
    return out


def mfactorial(exps) -> int:
    out = 1
    for e in exps:
        out *= math.factorial(e)
    return out


class Poly:
    """Sparse polynomial: ``terms`` maps exponent tuples to raw values."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field, nvars: int, terms=None, clean: bool = False):
        self.field = field
        self.nvars = nvars
        if terms is None:
            self.terms = {}
        elif clean:
            self.terms = terms
        else:
            F = field
            t = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise DomainError("exponent length does not match nvars")
                c = F.coerce(c)
                if not F.is_zero(c):
                    t[e] = c
            self.terms = t

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, field, nvars):
        return cls(field, nvars, {}, clean=True)

    @classmethod
    def constant(cls, field, nvars, c):
        c = field.coerce(c)
        return cls(field, nvars, {} if field.is_zero(c) else {(0,) * nvars: c}, clean=True)

    @classmethod
    def variable(cls, field, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(field, nvars, {tuple(e): field.one}, clean=True)

    @classmethod
    def monomial(cls, field, nvars, exps, c=1):
        return cls(field, nvars, {tuple(exps): c})

    @classmethod
    def linear(cls, field, coeffs, constant=None):
        """sum_i coeffs[i] x_i (+ constant), coefficients raw."""
        nvars = len(coeffs)
        t = {}
        for i, c in enumerate(coeffs):
            if not field.is_zero(c):
                e = [0] * nvars
                e[i] = 1
                t[tuple(e)] = c
        if constant is not None and not field.is_zero(constant):
            t[(0,) * nvars] = constant
        return cls(field, nvars, t, clean=True)

    @classmethod
    def gens(cls, field, nvars):
        return [cls.variable(field, nvars, i) for i in range(nvars)]

    # basic queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def zero_like(self) -> "Poly":
        return Poly(self.field, self.nvars, {}, clean=True)

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def copy(self) -> "Poly":
        return Poly(self.field, self.nvars, dict(self.terms), clean=True)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return d is None or degs.pop() == d

    def homogeneous_degree(self):
        degs = {sum(e) for e in self.terms}
        if len(degs) != 1:
            return None
        return degs.pop()

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), self.field.zero)

    def sorted_terms(self, order: MonomialOrder = LEX):
        return sorted(self.terms.items(), key=lambda kv: order.key(kv[0]), reverse=True)

    def leading_term(self, order: MonomialOrder = GREVLEX):
        if not self.terms:
            raise DomainError("zero polynomial has no leading term")
        e = max(self.terms, key=order.key)
        return e, self.terms[e]

    def variables_used(self):
        used = set()
        for e in self.terms:
            used.update(i for i, a in enumerate(e) if a)
        return sorted(used)

    # arithmetic ---------------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Poly):
            raise DomainError(f"cannot combine Poly with {type(other).__name__}")
        if other.nvars != self.nvars:
            raise DomainError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
        if other.field != self.field:
            raise DomainError("polynomials over different fields")

    def _lift(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.constant(self.field, self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        F = self.field
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e)
            if v is None:
                t[e] = c
            else:
                v = F.add(v, c)
                if F.is_zero(v):
                    del t[e]
                else:
                    t[e] = v
        return Poly(F, self.nvars, t, clean=True)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Poly(F, self.nvars, {e: F.neg(c) for e, c in self.terms.items()}, clean=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "Poly":
        F = self.field
        c = F.coerce(c) if not _is_raw(c, F) else c
        if F.is_zero(c):
            return self.zero_like()
        return Poly(F, self.nvars, {e: F.mul(v, c) for e, v in self.terms.items()}, clean=True)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(self.field.coerce(other))
        self._check(other)
        F = self.field
        if not self.terms or not other.terms:
            return self.zero_like()
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        res = {}
        if isinstance(F, PrimeField):
            p = F.p
            for e2, c2 in b.items():
                for e1, c1 in a.items():
                    e = tuple(map(_add, e1, e2))
                    res[e] = res.get(e, 0) + c1 * c2
            t = {}
            for e, c in res.items():
                c %= p
                if c:
                    t[e] = c
            return Poly(F, self.nvars, t, clean=True)
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple(map(_add, e1, e2))
                v = res.get(e)
                prod = F.mul(c1, c2)
                res[e] = prod if v is None else F.add(v, prod)
        return Poly(F, self.nvars, {e: c for e, c in res.items() if not F.is_zero(c)}, clean=True)

    def __rmul__(self, other):
        return self.scale(self.field.coerce(other))

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative power of a polynomial")
        result = Poly.constant(self.field, self.nvars, self.field.one)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.field == other.field and self.terms == other.terms
        if isinstance(other, (int, Fraction, FieldElement)):
            return self == Poly.constant(self.field, self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def monic(self, order: MonomialOrder = GREVLEX) -> "Poly":
        _, c = self.leading_term(order)
        return self.scale(self.field.inv(c))

    # calculus and substitution ---------------------------------------------

    def derivative(self, var: int, order: int = 1, check: bool = True) -> "Poly":
        if order < 0:
            raise DomainError("negative derivative order")
        F = self.field
        if check and F.characteristic and order > 0 and F.characteristic <= max(self.degree(), 0):
            raise SmallCharacteristicError(
                f"characteristic {F.characteristic} does not exceed degree {self.degree()}"
            )
        if order == 0:
            return self.copy()
        t = {}
        for e, c in self.terms.items():
            k = e[var]
            if k < order:
                continue
            ff = math.perm(k, order)
            v = F.mul(c, F.from_int(ff))
            if F.is_zero(v):
                continue
            ne = list(e)
            ne[var] = k - order
            t[tuple(ne)] = v
        return Poly(F, self.nvars, t, clean=True)

    def diff_multi(self, exps, check: bool = True) -> "Poly":
        """Mixed partial derivative d^m / dx^m for the multi-index m."""
        out = self
        for i, k in enumerate(exps):
            if k:
                out = out.derivative(i, k, check=check)
        return out

    def evaluate(self, point):
        """Evaluate at raw coordinates (same field, or anything the
        field's add/mul accept such as extension-field tuples)."""
        F = self.field
        acc = F.zero
        powers = [dict() for _ in range(self.nvars)]
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    cache = powers[i]
                    pk = cache.get(k)
                    if pk is None:
                        pk = F.pow(point[i], k)
                        cache[k] = pk
                    term = F.mul(term, pk)
            acc = F.add(acc, term)
        return acc

    def substitute(self, images) -> "Poly":
        """Compose with x_i -> images[i]; images are Polys of one ring."""
        if len(images) != self.nvars:
            raise DomainError("need one image per variable")
        ring = images[0]
        out = ring.zero_like()
        cache = [dict() for _ in range(self.nvars)]

        def power(i, k):
            hit = cache[i].get(k)
            if hit is None:
                hit = images[i] ** k
                cache[i][k] = hit
            return hit

        F = ring.field
        for e, c in self.sorted_terms(LEX):
            term = Poly.constant(F, ring.nvars, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def map_coeffs(self, fn, field=None) -> "Poly":
        field = field or self.field
        t = {}
        for e, c in self.terms.items():
            v = fn(c)
            if not field.is_zero(v):
                t[e] = v
        return Poly(field, self.nvars, t, clean=True)

    def embed(self, field) -> "Poly":
        """Same polynomial over an extension of its field."""
        if field == self.field:
            return self
        return self.map_coeffs(field.from_base if hasattr(field, "from_base") else field.coerce, field)

    # text ---------------------------------------------------------------------

    def to_text(self, order: MonomialOrder = LEX) -> str:
        F = self.field
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms(order):
            factors = [f"x{i}" if k == 1 else f"x{i}^{k}" for i, k in enumerate(e) if k]
            cs = F.to_str(c)
            if "+" in cs[1:] or "-" in cs[1:]:
                cs = f"({cs})"
            if factors and cs == "1":
                parts.append("*".join(factors))
            else:
                parts.append("*".join([cs] + factors))
        text = "+".join(parts)
        return text.replace("+-", "-")

    def __repr__(self):
        return f"Poly({self.field!r}, {self.nvars}, {self.to_text()})"

    __str__ = to_text


def _is_raw(c, F) -> bool:
    if isinstance(c, FieldElement):
        return False
    if isinstance(F, PrimeField):
        return isinstance(c, int) and 0 <= c < F.p
    return isinstance(c, (Fraction, tuple))


# ---------------------------------------------------------------------------
# coefficient spaces


def coeff_vector(f: Poly, d: int, order: MonomialOrder = LEX):
    if not f.is_homogeneous(d):
        raise DomainError(f"polynomial is not homogeneous of degree {d}")
    z = f.field.zero
    return [f.terms.get(m, z) for m in monomial_basis(f.nvars, d, order)]


def from_coeff_vector(field, nvars: int, d: int, vec, order: MonomialOrder = LEX) -> Poly:
    basis = monomial_basis(nvars, d, order)
    if len(vec) != len(basis):
        raise DomainError("coefficient vector has the wrong length")
    t = {m: c for m, c in zip(basis, vec) if not field.is_zero(c)}
    return Poly(field, nvars, t, clean=True)


def expand_power_linear(L, d: int, field) -> Poly:
    """L^d for the linear form with raw coefficient vector L."""
    if d < 1:
        raise DomainError("power must be positive")
    L = [field.coerce(c) for c in L]
    if all(field.is_zero(c) for c in L):
        raise DomainError("zero linear form")
    nvars = len(L)
    t = {}
    for m in monomial_basis(nvars, d):
        c = field.from_int(multinomial(m))
        for a, k in zip(L, m):
            if k:
                c = field.mul(c, field.pow(a, k))
        if not field.is_zero(c):
            t[m] = c
    return Poly(field, nvars, t, clean=True)


def partial_derivative(f: Poly, var: int, order: int = 1) -> Poly:
    return f.derivative(var, order)


# ---------------------------------------------------------------------------
# text grammar:  c*x0^e0*x1^e1 terms joined by + / -

_FACTOR = re.compile(r"^(?:x(\d+)(?:\^(\d+))?|(\d+)(?:/(\d+))?)$")
_GEN = re.compile(r"^g(?:\^\d+)?$")


def _split_terms(s, text):
    """Split at top-level signs; parenthesized field elements stay whole."""
    pieces, depth, start = [], 0, 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {text!r}")
        elif ch in "+-" and depth == 0 and i > 0:
            pieces.append((s[start], s[start + 1:i]))
            start = i
    if depth:
        raise ParseError(f"unbalanced parentheses in {text!r}")
    pieces.append((s[start], s[start + 1:]))
    return pieces


def parse_poly(text: str, field, nvars: int | None = None) -> Poly:
    """Parse the polynomial text grammar into a Poly over ``field``.

    Over F_{p^k} a coefficient may also be a power of the generator g or a
    parenthesized element such as (3*g+1)."""
    if not isinstance(text, str):
        raise ParseError("polynomial text must be a string")
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ParseError("empty polynomial text")
    if s[0] not in "+-":
        s = "+" + s
    ext = getattr(field, "degree", 1) > 1
    terms = []
    maxvar = -1
    for sign, body in _split_terms(s, text):
        if not body:
            raise ParseError(f"empty term in {text!r}")
        coeff = Fraction(1)
        elems = []
        exps = {}
        for fac in body.split("*") if "(" not in body else _split_factors(body, text):
            if ext and (_GEN.match(fac) or (fac.startswith("(") and fac.endswith(")"))):
                elems.append(field.parse(fac.strip("()")))
                continue
            m = _FACTOR.match(fac)
            if not m:
                raise ParseError(f"bad factor {fac!r} in {text!r}")
            if m.group(1) is not None:
                i = int(m.group(1))
                k = int(m.group(2)) if m.group(2) is not None else 1
                exps[i] = exps.get(i, 0) + k
                maxvar = max(maxvar, i)
            else:
                den = int(m.group(4)) if m.group(4) is not None else 1
                if den == 0:
                    raise ParseError(f"zero denominator in {text!r}")
                coeff *= Fraction(int(m.group(3)), den)
        if sign == "-":
            coeff = -coeff
        terms.append((exps, coeff, elems))
    if nvars is None:
        nvars = maxvar + 1
    elif maxvar >= nvars:
        raise ParseError(f"variable x{maxvar} out of range for {nvars} variables")
    F = field
    out = {}
    for exps, coeff, elems in terms:
        e = tuple(exps.get(i, 0) for i in range(nvars))
        try:
            c = F.from_fraction(coeff)
        except DomainError as exc:
            raise ParseError(str(exc)) from exc
        for a in elems:
            c = F.mul(c, a)
        out[e] = F.add(out.get(e, F.zero), c)
    return Poly(F, nvars, {e: c for e, c in out.items() if not F.is_zero(c)}, clean=True)


def _split_factors(body, text):
    out, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "*" and depth == 0:
            out.append(body[start:i])
            start = i + 1
    out.append(body[start:])
    return out
