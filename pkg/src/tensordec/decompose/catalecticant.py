"""Catalecticant decomposition for symmetric and mixed tensors (the regime
where the span of the partials has dimension h - 1)."""
from __future__ import annotations

import math

from ..errors import CriterionFailed, DegenerateInput, DomainError, NotADecomposition, NotRankOne
from ..flattenings import (
    FlatteningSpec,
    MixedTensor,
    _check_char,
    as_symtensor,
    derivative_space,
    mixed_flattening,
    multi_basis,
)
from ..linalg import LinearSubspace, Matrix, row_basis, solve_linear
from ..poly import from_coeff_vector
from ..varieties import intersect_linear_section, segre_veronese_equations, veronese_equations
from .core import (
    IdentifiabilityCertificate,
    extract_linear_form,
    factor_rank_one,
    finalize,
    solve_coefficients,
)

__all__ = ["catalecticant_decompose", "mixed_catalecticant_decompose", "minimal_s", "rank_one_decompose"]


def minimal_s(n: int, h: int) -> int:
    s = 0
    while math.comb(n + s, n) < h:
        s += 1
    return s


def rank_one_decompose(F, method="catalecticant"):
    """F = c L^d, read off the rank-one catalecticant."""
    F = as_symtensor(F)
    L, c = extract_linear_form(F.poly, F.d)
    cert = IdentifiabilityCertificate(method=method, h=1, s=F.d - 1, catalecticant_rank=1, expected_rank=1, verdict="identifiable")
    return finalize(F.poly, [(L,)], [c], F.field, method, (F.d,), True, cert)


def _points_to_forms(ambient_points, E, nvars, k):
    forms = []
    for amb in ambient_points:
        G = from_coeff_vector(E, nvars, k, amb)
        L, _ = extract_linear_form(G, k)
        forms.append((L,))
    return forms


def catalecticant_decompose(F, h: int, s: int | None = None, seed: int = 0, chart_retries: int = 5):
    """Decompose F as a sum of h powers when dim H^s = h - 1 and H^s meets
    the Veronese V_{d-s} in exactly h points.

    ``s`` defaults to the least s with C(n+s, n) >= h."""
    F = as_symtensor(F)
    P, n, d, K = F.poly, F.n, F.d, F.field
    _check_char(K, d)
    if h < 1:
        raise DomainError("rank must be positive")
    if h == 1 and s is None:
        return rank_one_decompose(F)
    if s is None:
        s = minimal_s(n, h)
    if not 0 <= s < d - 1:
        raise CriterionFailed(f"derivative order {s} leaves no Veronese target (need s <= d-2)")
    H = derivative_space(F, s)
    k = d - s
    N = math.comb(n + k, n) - 1
    cert = IdentifiabilityCertificate(
        method="catalecticant",
        h=h,
        s=s,
        n_s=math.comb(n + s, n) - 1,
        secant_level=1,
        catalecticant_rank=H.dim + 1,
        expected_rank=h,
        expected=h,
        seed=seed,
        effective=n + h - 1 < N,
    )
    if H.dim != h - 1:
        raise CriterionFailed(
            f"dim H^{s} = {H.dim}, expected {h - 1}", certificate=cert, measured_dim=H.dim
        )
    res = intersect_linear_section(veronese_equations(n, k), H, seed=seed, chart_retries=chart_retries)
    cert.zero_dimensional = res.zero_dimensional
    cert.degree_found = res.degree
    if not res.zero_dimensional or res.degree != h:
        what = "positive-dimensional" if not res.zero_dimensional else f"degree {res.degree}"
        raise CriterionFailed(f"H^{s} meets V_{k}^{n} in a {what} scheme, expected {h} points", certificate=cert)
    if not res.all_simple or len(res.ambient_points) != h:
        raise DegenerateInput("intersection points are not simple", certificate=cert)
    cert.distinct = len(res.ambient_points)
    E = res.field
    forms = _points_to_forms(res.ambient_points, E, n + 1, k)
    lam = solve_coefficients(P, forms, field=E)
    if lam is None:
        raise NotADecomposition("the recovered powers do not span F", certificate=cert)
    cert.verdict = "identifiable"
    return finalize(P, forms, lam, E, "catalecticant", (d,), True, cert)


def _solve_a_parts(T, E, b_forms, spec):
    """T = sum_i P_{A,i} * B_i with the B_i known: solve for the P_{A,i}
    in the multidegree-a space."""
    a_keys = multi_basis(T.dims, spec.a)
    h = len(b_forms)
    Bs = [MixedTensor.rank_one([f if f is not None else [E.one] * (n + 1) for f, n in zip(bf, T.dims)], spec.b, E) for bf in b_forms]
    keys = T.coordinate_keys()
    pos = {kk: i for i, kk in enumerate(keys)}
    ncols = h * len(a_keys)
    rows = [[E.zero] * ncols for _ in keys]
    for i, B in enumerate(Bs):
        for t, alpha in enumerate(a_keys):
            col = i * len(a_keys) + t
            for beta, c in B.entries.items():
                key = tuple(tuple(x + y for x, y in zip(a, b)) for a, b in zip(alpha, beta))
                rows[pos[key]][col] = E.add(rows[pos[key]][col], c)
    Te = T.embed(E)
    rhs = [Te.entries.get(kk, E.zero) for kk in keys]
    sol = solve_linear(Matrix(E, rows, ncols), rhs)
    if sol is None or not sol.unique:
        raise NotRankOne("a-parts are not determined by the recovered b-parts")
    m = len(a_keys)
    return [sol.particular[i * m : (i + 1) * m] for i in range(h)]


def mixed_catalecticant_decompose(T: MixedTensor, h: int, spec=None, seed: int = 0, chart_retries: int = 5):
    """Mixed analogue of catalecticant_decompose on the (A,B)-flattening."""
    K = T.field
    _check_char(K, max(T.degrees))
    if spec is None:
        raise DomainError("a flattening spec is required")
    if not isinstance(spec, FlatteningSpec):
        spec = FlatteningSpec.from_a(spec, T.degrees)
    spec.validate(T.dims, T.degrees)
    M_A = spec.M_A(T.dims)
    if M_A + 1 < h:
        raise DomainError(f"spec gives M_A + 1 = {M_A + 1} < h = {h}")
    if h < 1:
        raise DomainError("rank must be positive")
    M = mixed_flattening(T, spec)
    basis = row_basis(M)
    cert = IdentifiabilityCertificate(
        method="mixed_catalecticant", h=h, spec=tuple(spec.a), n_s=M_A, secant_level=1,
        catalecticant_rank=basis.nrows, expected_rank=h, expected=h, seed=seed,
    )
    if basis.nrows != h:
        raise CriterionFailed(f"flattening rank {basis.nrows}, expected {h}", certificate=cert)
    if all(b == 0 for b in spec.b):
        raise DomainError("flattening has an empty b-part")
    H = LinearSubspace(basis, "T(V_A*)")
    model = segre_veronese_equations(T.dims, spec.b, 1) if _has_equations(T.dims, spec.b) else None
    if model is None:
        # b-part is a single projective space of degree 1: every point is rank one
        if h != 1:
            raise CriterionFailed("b-part variety fills its ambient space", certificate=cert)
        res_points, E = [list(basis.rows[0])], K
        cert.zero_dimensional, cert.degree_found = True, 1
    else:
        res = intersect_linear_section(model, H, seed=seed, chart_retries=chart_retries)
        cert.zero_dimensional, cert.degree_found = res.zero_dimensional, res.degree
        if not res.zero_dimensional or res.degree != h:
            raise CriterionFailed(f"section degree {res.degree}, expected {h}", certificate=cert)
        if not res.all_simple or len(res.ambient_points) != h:
            raise DegenerateInput("intersection points are not simple", certificate=cert)
        res_points, E = res.ambient_points, res.field
    cert.distinct = len(res_points)
    b_forms = [factor_rank_one(pt, T.dims, spec.b, E, "plain") for pt in res_points]
    forms = _complete_forms(T, E, b_forms, spec)
    lam = solve_coefficients(T, forms, field=E)
    if lam is None:
        raise NotADecomposition("the recovered rank-one tensors do not span T", certificate=cert)
    cert.verdict = "identifiable"
    return finalize(T, forms, lam, E, "mixed_catalecticant", T.degrees, False, cert)


def _has_equations(dims, degrees):
    active = [j for j, d in enumerate(degrees) if d > 0]
    return not (len(active) == 1 and degrees[active[0]] == 1)


def _complete_forms(T, E, b_forms, spec):
    """Fill the slots with b_j = 0 from the a-part solve."""
    missing = [j for j, b in enumerate(spec.b) if b == 0]
    if not missing:
        return [tuple(bf) for bf in b_forms]
    a_parts = _solve_a_parts(T, E, b_forms, spec)
    out = []
    for bf, pa in zip(b_forms, a_parts):
        af = factor_rank_one(pa, T.dims, spec.a, E, "plain")
        out.append(tuple(bf[j] if spec.b[j] > 0 else af[j] for j in range(len(T.dims))))
    return out
