"""Seeded random inputs of prescribed rank."""
from __future__ import annotations

import random

from .errors import DomainError
from .fields import RationalField
from .flattenings import MixedTensor
from .poly import expand_power_linear

__all__ = ["gen_polynomial_of_rank", "gen_tensor_of_rank", "random_linear_form"]


def _draw(field, rng, bound):
    if isinstance(field, RationalField):
        return field.from_int(rng.randint(-bound, bound))
    return field.random(rng)


def _projective_key(v, field):
    for c in v:
        if not field.is_zero(c):
            inv = field.inv(c)
            return tuple(field.mul(x, inv) for x in v)
    return None


def random_linear_form(field, nvars, rng, bound=5):
    while True:
        v = [_draw(field, rng, bound) for _ in range(nvars)]
        if any(not field.is_zero(c) for c in v):
            return v


def _distinct_forms(field, nvars, h, rng, bound, max_tries=None):
    seen, out = set(), []
    tries = 0
    limit = max_tries or 1000 * h + 100
    while len(out) < h:
        tries += 1
        if tries > limit:
            raise DomainError(f"cannot draw {h} projectively distinct forms in {nvars} variables over {field.spec}")
        v = random_linear_form(field, nvars, rng, bound)
        key = _projective_key(v, field)
        if key in seen:
            continue
        seen.add(key)
        out.append(v)
    return out


def _nonzero(field, rng, bound):
    while True:
        c = _draw(field, rng, bound)
        if not field.is_zero(c):
            return c


def gen_polynomial_of_rank(n: int, d: int, h: int, field, seed: int = 0, bound: int = 5, unit_coefficients=False):
    """F = sum_i lambda_i L_i^d with h seeded forms in n+1 variables.

    Returns (F, forms, coefficients); forms are raw coefficient lists."""
    if h < 1:
        raise DomainError("rank must be positive")
    rng = random.Random(seed)
    forms = _distinct_forms(field, n + 1, h, rng, bound)
    lam = [field.one if unit_coefficients else _nonzero(field, rng, bound) for _ in range(h)]
    F = None
    for L, c in zip(forms, lam):
        term = expand_power_linear(L, d, field).scale(c)
        F = term if F is None else F + term
    return F, forms, lam


def gen_tensor_of_rank(dims, degrees, h: int, field, seed: int = 0, bound: int = 5):
    """T = sum_i lambda_i prod_j L_{ij}^{d_j}; a single factor delegates to
    gen_polynomial_of_rank."""
    dims, degrees = tuple(dims), tuple(degrees)
    if len(dims) != len(degrees):
        raise DomainError("dims and degrees differ in length")
    if len(dims) == 1:
        F, forms, lam = gen_polynomial_of_rank(dims[0], degrees[0], h, field, seed, bound)
        return MixedTensor.from_poly(F, dims, degrees), [[L] for L in forms], lam
    if h < 1:
        raise DomainError("rank must be positive")
    rng = random.Random(seed)
    per_slot = [_distinct_forms(field, n + 1, h, rng, bound) for n in dims]
    forms = [[per_slot[j][i] for j in range(len(dims))] for i in range(h)]
    lam = [_nonzero(field, rng, bound) for _ in range(h)]
    T = None
    for f, c in zip(forms, lam):
        term = MixedTensor.rank_one(f, degrees, field, scale=c)
        T = term if T is None else T + term
    return T, forms, lam
