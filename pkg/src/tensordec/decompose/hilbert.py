"""Decomposition through the multiple point of a projected Veronese.

When dim H^s = h - 2 and H^s misses V_{d-s}, projecting V_{d-s} from H^s
onto a hypersurface sends the h points of the decomposition to a single
point of multiplicity h.  Adding that point to H^s brings us back to the
catalecticant situation."""
from __future__ import annotations

import math
import random

from ..errors import CriterionFailed, DegenerateInput, DomainError, NotADecomposition, NotIdentifiable
from ..flattenings import _check_char, as_symtensor, derivative_space
from ..groebner import buchberger, eliminate, solve_zero_dim
from ..linalg import LinearSubspace, Matrix, kernel, random_invertible, solve_linear
from ..poly import Poly, monomial_basis, multinomial
from ..varieties import intersect_linear_section, veronese_equations
from .catalecticant import _points_to_forms
from .core import IdentifiabilityCertificate, finalize, solve_coefficients

__all__ = ["hilbert_projection_decompose", "projected_image", "multiple_points"]


def _pick_s(F, h):
    n, d = F.n, F.d
    for s in range(1, d - 1):
        if math.comb(n + s, n) == h - 1:
            return s
    raise DomainError(f"no derivative order s with C(n+s, n) = h - 1 = {h - 1}")


def projected_image(W, n: int, k: int, field):
    """Equation of the image of V_k^n under y -> (w . y)_w for the rows of W.

    Computed by eliminating x from z_j - w_j(nu_k(x)), which is homogeneous
    when z has weight k; the image must be a hypersurface, so the
    elimination ideal is principal."""
    m = W.nrows
    nv = (n + 1) + m
    K = field
    basis = monomial_basis(n + 1, k)
    gens = []
    for j, w in enumerate(W.rows):
        t = {}
        for c, mon in zip(w, basis):
            v = K.mul(c, K.from_int(multinomial(mon)))
            if not K.is_zero(v):
                t[tuple(mon) + (0,) * m] = v
        z = [0] * nv
        z[n + 1 + j] = 1
        t[tuple(z)] = K.sub(t.get(tuple(z), K.zero), K.one)
        gens.append(Poly(K, nv, t, clean=True))
    G = eliminate(gens, list(range(n + 1, nv)), weights=[1] * (n + 1) + [k] * m)
    if len(G.generators) != 1:
        raise CriterionFailed(f"projected image is not a hypersurface ({len(G.generators)} generators)")
    return G.generators[0]


def multiple_points(Phi: Poly, mult: int, seed: int = 0, chart_retries: int = 5):
    """Points of multiplicity >= mult on the hypersurface Phi = 0: common
    zeros of all partials of order mult - 1 (returned projectively)."""
    K = Phi.field
    nv = Phi.nvars
    parts = []
    for m in monomial_basis(nv, mult - 1):
        g = Phi.diff_multi(m)
        if not g.is_zero():
            parts.append(g)
    if not parts:
        raise NotIdentifiable("every point has the requested multiplicity")
    rng = random.Random(seed)
    A = random_invertible(K, nv, rng)
    subs = [Poly.linear(K, list(row[1:]), constant=row[0]) for row in A.rows]
    G = buchberger([f.substitute(subs) for f in parts])
    qb = G.quotient_basis()
    if not qb.finite:
        raise NotIdentifiable("multiple locus is positive-dimensional")
    sols = solve_zero_dim(G, seed=seed, retries=chart_retries)
    E = sols[0].field if sols else K
    rows = [[a if E == K else E.from_base(a) for a in row] for row in A.rows]
    out = []
    for P in sols:
        eta = [E.one] + list(P.coordinates)
        out.append(([E.dot(row, eta) for row in rows], P.multiplicity, P.degree))
    return out, E, qb.count


def hilbert_projection_decompose(F, h: int, s: int | None = None, seed: int = 0, chart_retries: int = 5):
    """Decompose F of rank h with dim H^s = h - 2 via the unique h-fold point
    of the projection of V_{d-s} from H^s."""
    F = as_symtensor(F)
    n, d, K, P = F.n, F.d, F.field, F.poly
    _check_char(K, d)
    if s is None:
        s = _pick_s(F, h)
    k = d - s
    N = math.comb(n + k, n) - 1
    if h != N - n:
        raise DomainError(f"projection from H^s is a hypersurface only for h = {N - n}")
    H = derivative_space(F, s)
    cert = IdentifiabilityCertificate(
        method="hilbert", h=h, s=s, n_s=math.comb(n + s, n) - 1, secant_level=1,
        catalecticant_rank=H.dim + 1, expected_rank=h - 1, expected=h, seed=seed,
    )
    if H.dim != h - 2:
        raise DomainError(f"dim H^{s} = {H.dim}, expected {h - 2}", certificate=cert)
    ver = veronese_equations(n, k)
    miss = intersect_linear_section(ver, H, seed=seed, chart_retries=chart_retries, solve=False)
    if not miss.zero_dimensional or miss.degree != 0:
        raise DomainError("H^s meets the Veronese variety", certificate=cert)
    W = kernel(H.basis)
    Phi = projected_image(W, n, k, K)
    deg = Phi.homogeneous_degree()
    cert.notes.append(f"image degree {deg}")
    if deg != k**n:
        raise CriterionFailed(f"projected image has degree {deg}, expected {k ** n}", certificate=cert)
    pts, E, length = multiple_points(Phi, h, seed=seed, chart_retries=chart_retries)
    cert.notes.append(f"{h}-fold locus: {len(pts)} point(s), length {length}")
    if len(pts) != 1:
        raise NotIdentifiable(f"{len(pts)} points of multiplicity {h}, expected one", certificate=cert)
    p = pts[0][0]
    WE = Matrix(E, [[x if E == K else E.from_base(x) for x in row] for row in W.rows], W.ncols)
    sol = solve_linear(WE, p)
    if sol is None:
        raise CriterionFailed("h-fold point has no preimage", certificate=cert)
    HE = [[x if E == K else E.from_base(x) for x in row] for row in H.basis.rows]
    Hp = LinearSubspace(Matrix(E, HE + [list(sol.particular)], H.ambient_dim), "H_p")
    res = intersect_linear_section(ver, Hp, seed=seed, chart_retries=chart_retries)
    cert.zero_dimensional, cert.degree_found = res.zero_dimensional, res.degree
    if not res.zero_dimensional or res.degree != h:
        raise CriterionFailed(f"H_p meets V_{k}^{n} in degree {res.degree}, expected {h}", certificate=cert)
    if not res.all_simple or len(res.ambient_points) != h:
        raise DegenerateInput("points of H_p on the Veronese are not simple", certificate=cert)
    cert.distinct = h
    E2 = res.field
    forms = _points_to_forms(res.ambient_points, E2, n + 1, k)
    lam = solve_coefficients(P, forms, field=E2)
    if lam is None:
        raise NotADecomposition("recovered powers do not span F", certificate=cert)
    cert.verdict = "identifiable"
    return finalize(P, forms, lam, E2, "hilbert", (d,), True, cert)
