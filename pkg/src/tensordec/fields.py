"""Exact scalar fields: prime fields F_p, extensions F_{p^k}, and Q.

Field objects operate on raw values so that hot loops avoid wrapper
allocation.  Raw values are
    F_p       int in [0, p)
    F_{p^k}   tuple of k ints in [0, p), low degree first
    Q         fractions.Fraction
``FieldElement`` wraps a raw value together with its field and gives
operator overloading for interactive use.
"""
from __future__ import annotations

import random
import re
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, ParseError

__all__ = [
    "PrimeField",
    "RationalField",
    "ExtensionField",
    "FieldElement",
    "QQ",
    "GF",
    "extension_field",
    "field_from_spec",
    "is_prime",
]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24, probabilistic beyond."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class _Field:
    """Shared conveniences; subclasses implement the raw operations."""

    is_finite = True

    def __call__(self, x) -> "FieldElement":
        return FieldElement(self, self.coerce(x))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def random_nonzero(self, rng: random.Random):
        while True:
            a = self.random(rng)
            if not self.is_zero(a):
                return a

    def sum(self, values):
        acc = self.zero
        for v in values:
            acc = self.add(acc, v)
        return acc

    def dot(self, u, v):
        acc = self.zero
        for a, b in zip(u, v):
            acc = self.add(acc, self.mul(a, b))
        return acc


class PrimeField(_Field):
    """F_p with canonical residues in [0, p)."""

    degree = 1

    def __init__(self, p: int):
        p = int(p)
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.order = p
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    @property
    def spec(self) -> str:
        return str(self.p)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def pow(self, a, e: int):
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def is_zero(self, a) -> bool:
        return a == 0

    def from_int(self, n: int):
        return n % self.p

    def from_fraction(self, q: Fraction):
        if q.denominator % self.p == 0:
            raise DomainError(f"denominator of {q} vanishes mod {self.p}")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def coerce(self, x):
        if isinstance(x, FieldElement):
            if x.field == self:
                return x.value
            raise DomainError(f"element of {x.field!r} used in {self!r}")
        if isinstance(x, bool):
            return int(x)
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        raise DomainError(f"cannot coerce {x!r} into {self!r}")

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def elements(self):
        return range(self.p)

    def to_str(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        try:
            return self.from_fraction(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad coefficient {text!r}") from exc

    def signed(self, a) -> int:
        """Symmetric representative in (-p/2, p/2]."""
        return a - self.p if a > self.p // 2 else a


class RationalField(_Field):
    """Q with reduced Fractions (denominator positive)."""

    characteristic = 0
    degree = 1
    order = None
    is_finite = False

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    @property
    def spec(self) -> str:
        return "Q"

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in QQ")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return a / b

    def pow(self, a, e: int):
        return a**e

    def is_zero(self, a) -> bool:
        return a == 0

    def from_int(self, n: int):
        return Fraction(n)

    def from_fraction(self, q: Fraction):
        return Fraction(q)

    def coerce(self, x):
        if isinstance(x, FieldElement):
            if x.field == self:
                return x.value
            raise DomainError(f"element of {x.field!r} used in QQ")
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise DomainError(f"cannot coerce {x!r} into QQ")

    def random(self, rng: random.Random, bound: int = 9):
        num = rng.randint(-bound, bound)
        den = rng.randint(1, bound)
        return Fraction(num, den)

    def to_str(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad coefficient {text!r}") from exc


# ---------------------------------------------------------------------------
# dense F_p polynomial helpers for the extension arithmetic (low degree first)


def _fp_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [c % p for c in out]


def _fp_mod(a, m, p):
    """a mod m for monic m."""
    a = list(a)
    k = len(m) - 1
    for i in range(len(a) - 1, k - 1, -1):
        c = a[i] % p
        if c:
            for j in range(k):
                a[i - k + j] = (a[i - k + j] - c * m[j]) % p
        a[i] = 0
    return _fp_trim([c % p for c in a[:k]])


def _fp_divmod(a, b, p):
    a = _fp_trim(a)
    b = _fp_trim(b)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    a = list(a)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        q[shift] = c
        for j, y in enumerate(b):
            a[shift + j] = (a[shift + j] - c * y) % p
        a = _fp_trim(a)
    return _fp_trim(q), a


def _fp_inverse_mod(a, m, p):
    """Inverse of a modulo m via extended Euclid; m irreducible."""
    r0, r1 = _fp_trim(m), _fp_trim(a)
    s0, s1 = [], [1]
    while r1:
        q, r = _fp_divmod(r0, r1, p)
        r0, r1 = r1, r
        qs = _fp_mul(q, s1, p)
        n = max(len(s0), len(qs))
        s0, s1 = s1, _fp_trim(
            [((s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0)) % p for i in range(n)]
        )
    if len(r0) != 1:
        raise ZeroDivisionError("element not invertible (modulus reducible?)")
    c = pow(r0[0], -1, p)
    return [x * c % p for x in s0]


def _fp_powmod(a, e, m, p):
    result = [1]
    base = _fp_mod(a, m, p)
    while e:
        if e & 1:
            result = _fp_mod(_fp_mul(result, base, p), m, p)
        base = _fp_mod(_fp_mul(base, base, p), m, p)
        e >>= 1
    return result


def _fp_gcd(a, b, p):
    a, b = _fp_trim(a), _fp_trim(b)
    while b:
        a, b = b, _fp_divmod(a, b, p)[1]
    if a:
        c = pow(a[-1], -1, p)
        a = [x * c % p for x in a]
    return a


def _prime_factors(n):
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def fp_is_irreducible(f, p) -> bool:
    """Rabin's test for a monic f over F_p."""
    f = _fp_trim(f)
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]

    def frob_power(j):
        # x^(p^j) mod f
        r = x
        for _ in range(j):
            r = _fp_powmod(r, p, f, p)
        return r

    if _fp_trim(_fp_sub(frob_power(k), x, p)):
        return False
    for q in _prime_factors(k):
        g = _fp_gcd(f, _fp_sub(frob_power(k // q), x, p), p)
        if len(g) != 1:
            return False
    return True


def _fp_sub(a, b, p):
    n = max(len(a), len(b))
    return _fp_trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


class ExtensionField(_Field):
    """F_{p^k} = F_p[g]/(m(g)) for a monic irreducible m of degree k."""

    def __init__(self, p: int, modulus):
        self.base = PrimeField(p)
        self.p = p
        modulus = tuple(int(c) % p for c in modulus)
        if modulus[-1] != 1:
            raise DomainError("modulus must be monic")
        self.modulus = modulus
        self.degree = len(modulus) - 1
        if self.degree < 1:
            raise DomainError("modulus must have positive degree")
        if not fp_is_irreducible(list(modulus), p):
            raise DomainError(f"modulus {modulus} is reducible over F_{p}")
        self.characteristic = p
        self.order = p**self.degree
        k = self.degree
        self.zero = (0,) * k
        self.one = (1,) + (0,) * (k - 1)

    def __repr__(self):
        return f"GF({self.p}^{self.degree})"

    def __eq__(self, other):
        return isinstance(other, ExtensionField) and other.p == self.p and other.modulus == self.modulus

    def __hash__(self):
        return hash(("GFk", self.p, self.modulus))

    @property
    def spec(self) -> str:
        return f"{self.p}^{self.degree}"

    def _pad(self, a):
        a = list(a)[: self.degree]
        return tuple(a + [0] * (self.degree - len(a)))

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        p, k, m = self.p, self.degree, self.modulus
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(k):
                    prod[i - k + j] -= c * m[j]
        return tuple(c % p for c in prod[:k])

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self._pad(_fp_inverse_mod(list(a), list(self.modulus), self.p))

    def is_zero(self, a) -> bool:
        return not any(a)

    def from_int(self, n: int):
        return (n % self.p,) + (0,) * (self.degree - 1)

    def from_base(self, a):
        return (a % self.p,) + (0,) * (self.degree - 1)

    def from_fraction(self, q: Fraction):
        return self.from_base(self.base.from_fraction(q))

    def generator(self):
        return self._pad([0, 1])

    def coerce(self, x):
        if isinstance(x, FieldElement):
            if x.field == self:
                return x.value
            if x.field == self.base:
                return self.from_base(x.value)
            raise DomainError(f"element of {x.field!r} used in {self!r}")
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        if isinstance(x, (tuple, list)) and len(x) <= self.degree:
            return self._pad([int(c) % self.p for c in x])
        raise DomainError(f"cannot coerce {x!r} into {self!r}")

    def random(self, rng: random.Random):
        return tuple(rng.randrange(self.p) for _ in range(self.degree))

    def in_base(self, a) -> bool:
        return not any(a[1:])

    def to_str(self, a) -> str:
        terms = []
        for j in range(self.degree - 1, -1, -1):
            c = a[j]
            if not c:
                continue
            if j == 0:
                terms.append(str(c))
            else:
                mono = "g" if j == 1 else f"g^{j}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(terms) if terms else "0"

    _TERM = re.compile(r"^(?:(\d+)\*?)?(g(?:\^(\d+))?)?$")

    def parse(self, text: str):
        text = text.replace(" ", "")
        if not text:
            raise ParseError("empty coefficient")
        coeffs = [0] * self.degree
        for sign, body in re.findall(r"([+-]?)([^+-]+)", text):
            m = self._TERM.match(body)
            if not m or (m.group(1) is None and m.group(2) is None):
                raise ParseError(f"bad extension coefficient {text!r}")
            c = int(m.group(1)) if m.group(1) is not None else 1
            j = 0 if m.group(2) is None else int(m.group(3) or 1)
            if j >= self.degree:
                raise ParseError(f"power g^{j} not reduced in {self!r}")
            coeffs[j] += -c if sign == "-" else c
        return tuple(c % self.p for c in coeffs)


class FieldElement:
    """Immutable scalar bound to its field; supports the usual operators."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _other(self, other):
        return self.field.coerce(other)

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.coerce(other)
        except DomainError:
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __repr__(self):
        return f"{self.field!r}({self.field.to_str(self.value)})"

    def __str__(self):
        return self.field.to_str(self.value)


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


@lru_cache(maxsize=None)
def extension_field(p: int, k: int) -> "PrimeField | ExtensionField":
    """Deterministic F_{p^k}: the modulus is the first irreducible drawn
    from a PRNG seeded by (p, k), so repeated runs agree."""
    if k == 1:
        return GF(p)
    rng = random.Random(p * 1_000_003 + k)
    while True:
        tail = [rng.randrange(p) for _ in range(k)]
        if tail[0] == 0:
            continue
        if fp_is_irreducible(tail + [1], p):
            return ExtensionField(p, tail + [1])


def field_from_spec(spec) -> "PrimeField | RationalField | ExtensionField":
    """Parse '32003', 'Q', '32003^2' or a modulus spec '7:[3,0,1]'."""
    if isinstance(spec, _Field):
        return spec
    text = str(spec).strip()
    if text.upper() in ("Q", "QQ", "RATIONALS"):
        return QQ
    try:
        if ":" in text:
            p, mod = text.split(":", 1)
            coeffs = [int(c) for c in mod.strip("[] ").split(",")]
            return ExtensionField(int(p), coeffs)
        if "^" in text:
            p, k = text.split("^", 1)
            return extension_field(int(p), int(k))
        return GF(int(text))
    except ValueError as exc:
        raise ParseError(f"bad field spec {spec!r}") from exc
