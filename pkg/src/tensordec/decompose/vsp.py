"""Non-unique decompositions of even-degree forms by fixing two summands
on the Omega-orthogonality locus and decomposing the remainder."""
from __future__ import annotations

import math
import random

from ..errors import DomainError, MethodFailed, TensorDecError
from ..flattenings import _check_char, as_symtensor, catalecticant_matrix, omega
from ..linalg import rank, solve_linear
from ..poly import Poly, expand_power_linear, monomial_basis
from .. import univariate as up
from ..generators import random_linear_form
from .catalecticant import catalecticant_decompose
from .core import IdentifiabilityCertificate, finalize, solve_coefficients

__all__ = ["vsp_reduce_decompose", "omega_functional", "peel_coefficient"]

SUPPORTED = {(4, 2, 6, 2)}


def omega_functional(F, G1: Poly):
    """Coefficients a_mu with Omega_F(G1, G2) = sum_mu a_mu [x^mu]G2."""
    F = as_symtensor(F)
    m = F.d // 2
    K = F.field
    nv = F.poly.nvars
    return [omega(F, G1, Poly.monomial(K, nv, mu)) for mu in monomial_basis(nv, m)]


def peel_coefficient(F, L):
    """lambda with rank Cat_m(F - lambda L^d) = rank Cat_m(F) - 1, or None."""
    F = as_symtensor(F)
    K, d = F.field, F.d
    m = d // 2
    M = catalecticant_matrix(F, m)
    C = catalecticant_matrix(expand_power_linear(L, d, K), m)
    j = next((j for j in range(C.ncols) if any(not K.is_zero(C.rows[i][j]) for i in range(C.nrows))), None)
    if j is None:
        return None
    u = [C.rows[i][j] for i in range(C.nrows)]
    i0 = next(i for i in range(C.nrows) if not K.is_zero(C.rows[i][j]))
    w = [K.div(x, u[i0]) for x in C.rows[i0]]
    sol = solve_linear(M, u)
    if sol is None:
        return None
    # w.y does not depend on the particular solution when w lies in the row space
    t = K.dot(w, sol.particular)
    if K.is_zero(t):
        return None
    lam = K.inv(t)
    G = F.poly - expand_power_linear(L, d, K).scale(lam)
    if rank(catalecticant_matrix(G, m)) != rank(M) - 1:
        return None
    return lam


def _conic_point(a, K, nv, rng, tries):
    """Random L2 with sum_mu a_mu [x^mu] L2^2 = 0 over the base field."""
    basis = monomial_basis(nv, 2)

    def q(L):
        P = expand_power_linear(L, 2, K)
        return K.sum(K.mul(c, P.terms.get(mu, K.zero)) for c, mu in zip(a, basis))

    for _ in range(tries):
        head = [K.random(rng) for _ in range(nv - 1)]
        vals = [q(head + [K.from_int(t)]) for t in range(3)]
        # quadratic through (0, v0), (1, v1), (2, v2)
        c0 = vals[0]
        two_inv = K.inv(K.from_int(2))
        c2 = K.mul(K.add(K.sub(vals[2], K.add(vals[1], vals[1])), vals[0]), two_inv)
        c1 = K.sub(K.sub(vals[1], vals[0]), c2)
        roots = up.roots(up.trim([c0, c1, c2], K), K)
        for r, _ in roots:
            L = head + [r]
            if any(not K.is_zero(x) for x in L):
                return L
    return None


def vsp_reduce_decompose(F, h: int = 6, s_reduce: int = 2, seed: int = 0, max_tries: int = 20, conic_tries: int = 200):
    """A (generally non-unique) decomposition of a rank-h form of degree 2m.

    L_1 is random and L_2 is drawn from the conic Omega_F(L_1^m, L_2^m) = 0.
    Their coefficients are the ones that lower the rank of Cat_m by one
    each, and the remainder is decomposed by the catalecticant method."""
    F = as_symtensor(F)
    n, d, K, P = F.n, F.d, F.field, F.poly
    _check_char(K, d)
    if (d, n, h, s_reduce) not in SUPPORTED:
        raise DomainError(f"unsupported case (d, n, h, s) = {(d, n, h, s_reduce)}")
    if not K.is_finite:
        raise DomainError("the conic search needs a finite field")
    m = d // 2
    full = math.comb(n + m, n)
    r = rank(catalecticant_matrix(F, m))
    if r <= h - s_reduce:
        # already in the catalecticant range: nothing to peel off
        rest = catalecticant_decompose(F, r, seed=seed)
        cert = IdentifiabilityCertificate(
            method="vsp", h=r, s=m, catalecticant_rank=r, seed=seed, verdict="inconclusive",
            degree_found=rest.certificate.degree_found, expected=r,
        )
        cert.notes = [f"rank Cat_{m}(F) = {r} <= {h - s_reduce}: remainder decomposed directly"]
        return finalize(P, rest.forms, rest.coefficients, rest.field, "vsp", (d,), True, cert)
    if r != full:
        raise DomainError(f"rank Cat_{m}(F) = {r}: the reduction needs {full} or at most {h - s_reduce}")
    rng = random.Random(seed)
    notes = []
    for attempt in range(max_tries):
        L1 = random_linear_form(K, n + 1, rng)
        a = omega_functional(F, expand_power_linear(L1, m, K))
        L2 = _conic_point(a, K, n + 1, rng, conic_tries)
        if L2 is None:
            notes.append(f"attempt {attempt}: no point on the conic")
            continue
        lam1 = peel_coefficient(F, L1)
        if lam1 is None:
            notes.append(f"attempt {attempt}: L1 does not lower the rank")
            continue
        G1 = P - expand_power_linear(L1, d, K).scale(lam1)
        lam2 = peel_coefficient(G1, L2)
        if lam2 is None:
            notes.append(f"attempt {attempt}: L2 does not lower the rank")
            continue
        G = G1 - expand_power_linear(L2, d, K).scale(lam2)
        try:
            rest = catalecticant_decompose(G, h - s_reduce, seed=seed + attempt)
        except TensorDecError as exc:
            notes.append(f"attempt {attempt}: remainder {type(exc).__name__}")
            continue
        E = rest.field
        emb = (lambda x: x) if E == K else E.from_base
        forms = [(tuple(emb(x) for x in L1),), (tuple(emb(x) for x in L2),)] + list(rest.forms)
        lam = solve_coefficients(P, forms, field=E)
        if lam is None:
            notes.append(f"attempt {attempt}: merged system inconsistent")
            continue
        cert = IdentifiabilityCertificate(
            method="vsp", h=h, s=m, catalecticant_rank=full, seed=seed, verdict="inconclusive",
            degree_found=rest.certificate.degree_found if rest.certificate else None, expected=h - s_reduce,
        )
        cert.notes = notes + [f"attempt {attempt} succeeded; decomposition is not unique"]
        return finalize(P, forms, lam, E, "vsp", (d,), True, cert)
    raise MethodFailed(f"no decomposition after {max_tries} attempts", notes=notes)
