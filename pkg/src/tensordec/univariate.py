"""Dense univariate polynomials over finite fields and their factorization.

Polynomials are lists of raw field values, lowest degree first, with no
trailing zeros.  Factorization is Cantor-Zassenhaus: squarefree
decomposition, distinct-degree splitting, then randomized equal-degree
splitting (odd characteristic) or the trace map (characteristic 2).
"""
from __future__ import annotations

import random

from .errors import DomainError
from .fields import PrimeField


def trim(a, F):
    a = list(a)
    while a and F.is_zero(a[-1]):
        a.pop()
    return a


def degree(a) -> int:
    return len(a) - 1


def add(a, b, F):
    n = max(len(a), len(b))
    z = F.zero
    return trim([F.add(a[i] if i < len(a) else z, b[i] if i < len(b) else z) for i in range(n)], F)


def sub(a, b, F):
    n = max(len(a), len(b))
    z = F.zero
    return trim([F.sub(a[i] if i < len(a) else z, b[i] if i < len(b) else z) for i in range(n)], F)


def scale(a, c, F):
    return trim([F.mul(x, c) for x in a], F)


def mul(a, b, F):
    if not a or not b:
        return []
    if isinstance(F, PrimeField):
        p = F.p
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return trim([c % p for c in out], F)
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if F.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return trim(out, F)


def divmod_(a, b, F):
    b = trim(b, F)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(trim(a, F))
    db = len(b) - 1
    if len(a) <= db:
        return [], a
    inv = F.inv(b[-1])
    q = [F.zero] * (len(a) - db)
    if isinstance(F, PrimeField):
        p = F.p
        for i in range(len(a) - 1, db - 1, -1):
            c = a[i] * inv % p
            if c:
                q[i - db] = c
                base = i - db
                for j in range(db):
                    a[base + j] = (a[base + j] - c * b[j]) % p
            a[i] = 0
    else:
        for i in range(len(a) - 1, db - 1, -1):
            c = F.mul(a[i], inv)
            if not F.is_zero(c):
                q[i - db] = c
                base = i - db
                for j in range(db):
                    a[base + j] = F.sub(a[base + j], F.mul(c, b[j]))
            a[i] = F.zero
    return trim(q, F), trim(a[:db], F)


def mod(a, b, F):
    return divmod_(a, b, F)[1]


def monic(a, F):
    a = trim(a, F)
    if not a:
        return a
    return scale(a, F.inv(a[-1]), F)


def gcd(a, b, F):
    a, b = trim(a, F), trim(b, F)
    while b:
        a, b = b, mod(a, b, F)
    return monic(a, F)


def powmod(a, e: int, m, F):
    result = [F.one]
    base = mod(a, m, F)
    while e:
        if e & 1:
            result = mod(mul(result, base, F), m, F)
        e >>= 1
        if e:
            base = mod(mul(base, base, F), m, F)
    return result


def derivative(a, F):
    return trim([F.mul(F.from_int(i), a[i]) for i in range(1, len(a))], F)


def evaluate(a, x, F):
    acc = F.zero
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def _pth_root(a, F):
    """Inverse Frobenius on a polynomial whose exponents are multiples of p."""
    p = F.characteristic
    e = F.order // p  # a -> a^(q/p) inverts a -> a^p
    return trim([F.pow(a[i], e) for i in range(0, len(a), p)], F)


def squarefree_decomposition(f, F):
    """Return [(g, i), ...] with monic squarefree pairwise coprime g and
    f = lc(f) * prod g**i."""
    f = monic(f, F)
    if len(f) <= 1:
        return []
    p = F.characteristic
    out = []

    def rec(f, mult):
        i = 1
        df = derivative(f, F)
        c = gcd(f, df, F)
        w = divmod_(f, c, F)[0]
        while len(w) > 1:
            y = gcd(w, c, F)
            z = divmod_(w, y, F)[0]
            if len(z) > 1:
                out.append((z, i * mult))
            i += 1
            w = y
            c = divmod_(c, y, F)[0]
        if len(c) > 1:
            rec(_pth_root(c, F), mult * p)

    rec(f, 1)
    return out


def distinct_degree(f, F):
    """f monic squarefree -> [(g_d, d)] with g_d the product of its
    irreducible factors of degree d."""
    q = F.order
    out = []
    x = trim([F.zero, F.one], F)
    h = x
    d = 0
    f = list(f)
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = powmod(h, q, f, F)
        g = gcd(f, sub(h, x, F), F)
        if len(g) > 1:
            out.append((g, d))
            f = divmod_(f, g, F)[0]
            h = mod(h, f, F)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def equal_degree(f, d: int, F, rng: random.Random):
    """Split f (monic, squarefree, all factors of degree d) into irreducibles."""
    n = len(f) - 1
    if n == d:
        return [f]
    q = F.order
    while True:
        a = trim([F.random(rng) for _ in range(n)], F)
        if len(a) < 2:
            continue
        if q % 2:
            b = sub(powmod(a, (q**d - 1) // 2, f, F), [F.one], F)
        else:
            # trace map a + a^2 + ... + a^(2^(k d - 1)), with q = 2^k
            steps = d * (q.bit_length() - 1)
            t, b = mod(a, f, F), mod(a, f, F)
            for _ in range(steps - 1):
                t = mod(mul(t, t, F), f, F)
                b = add(b, t, F)
        g = gcd(f, b, F)
        if 1 < len(g) < len(f):
            h = divmod_(f, g, F)[0]
            return equal_degree(g, d, F, rng) + equal_degree(h, d, F, rng)


def _key(a):
    return (len(a), [repr(c) for c in reversed(a)])


def factor(f, F, seed: int = 0):
    """Return (lc, [(monic irreducible, multiplicity), ...]) sorted by
    degree then coefficients, so output is deterministic."""
    f = trim(f, F)
    if not f:
        raise DomainError("cannot factor the zero polynomial")
    if F.order is None:
        raise DomainError("univariate factoring needs a finite field")
    lc = f[-1]
    rng = random.Random(seed)
    out = []
    for g, mult in squarefree_decomposition(f, F):
        for part, d in distinct_degree(g, F):
            for irred in equal_degree(part, d, F, rng):
                out.append((irred, mult))
    out.sort(key=lambda t: (_key(t[0]), t[1]))
    return lc, out


def roots(f, F, seed: int = 0):
    """Roots of f in F itself, with multiplicities."""
    _, facs = factor(f, F, seed)
    return [(F.neg(g[0]), m) for g, m in facs if len(g) == 2]


def is_irreducible(f, F) -> bool:
    f = trim(f, F)
    if len(f) < 2:
        return False
    _, facs = factor(f, F)
    return len(facs) == 1 and facs[0][1] == 1


def from_roots(rs, F):
    out = [F.one]
    for r in rs:
        out = mul(out, [F.neg(r), F.one], F)
    return out
