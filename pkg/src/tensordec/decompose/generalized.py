"""Generalized catalecticant decomposition: intersect the span of the
partials with a secant variety, recover the hyperplane configuration of the
intersection points and read the forms off the hyperplane normals."""
from __future__ import annotations

import math

from ..errors import (
    BoundExceeded,
    CriterionFailed,
    DegenerateInput,
    DomainError,
    NotADecomposition,
    RecoveryFailed,
    TensorDecError,
)
from ..flattenings import (
    FlatteningSpec,
    MixedTensor,
    _check_char,
    as_symtensor,
    derivative_space,
    mixed_flattening,
    pairing_to_power,
)
from ..groebner import count_distinct_points
from ..linalg import LinearSubspace, Matrix, intersect_row_spaces, rank, row_basis
from ..varieties import intersect_linear_section, secant_model, section_groebner, segre_veronese_equations
from ..linalg import random_invertible
from .catalecticant import catalecticant_decompose, minimal_s, mixed_catalecticant_decompose, rank_one_decompose
from .core import (
    IdentifiabilityCertificate,
    bound_ok,
    extract_linear_form,
    factor_rank_one,
    finalize,
    mixed_bound_ok,
    monic_vector,
    recover_hyperplanes,
    solve_coefficients,
)

__all__ = ["generalized_decompose", "mixed_decompose", "certify_identifiability", "default_spec"]


def _lower_level(make_model, r_low, H, expected_lower, seed, chart_retries):
    """(zero_dimensional, degree, distinct) of H meeting Sec_{r_low}."""
    if r_low == 0:
        return True, 0, 0
    res = intersect_linear_section(make_model(r_low), H, seed=seed + 1, chart_retries=chart_retries, solve=False)
    if not res.zero_dimensional:
        return False, None, None
    if res.degree < expected_lower:
        return True, res.degree, None
    return True, res.degree, _distinct_count(make_model(r_low), H, seed)


def _distinct_count(model, H, seed):
    import random

    rng = random.Random(seed + 7)
    A = random_invertible(H.field, H.basis.nrows, rng)
    G = section_groebner(model, H, A)
    return count_distinct_points(G, seed=seed)


def _condition_ii(cert):
    if cert.lower_zero_dimensional is False:
        return False
    deg = cert.degree_found_lower
    if deg is not None and deg < cert.expected_lower:
        return True
    return cert.distinct_lower is not None and cert.distinct_lower < cert.expected_lower


def _set_verdict(cert):
    ok_i = (
        cert.catalecticant_rank == cert.expected_rank
        and cert.zero_dimensional
        and cert.degree_found == cert.expected
        and cert.distinct == cert.expected
    )
    cert.verdict = "identifiable" if ok_i and _condition_ii(cert) else "inconclusive"
    return cert


# ---------------------------------------------------------------------------
# symmetric


def _symmetric_setup(F, h, s):
    F = as_symtensor(F)
    n, d = F.n, F.d
    _check_char(F.field, d)
    if d < 3:
        raise DomainError("the generalized method needs degree at least 3")
    if s is None:
        s = d - 2
    if not 1 <= s <= d - 2:
        raise DomainError(f"derivative order {s} must lie in [1, d-2]")
    N_s = math.comb(n + s, s) - 1
    return F, n, d, s, N_s, h - N_s


def generalized_decompose(
    F,
    h: int,
    s: int | None = None,
    seed: int = 0,
    chart_retries: int = 5,
    check_bound: bool = True,
):
    """Decompose F of rank h > N_s + 1 via H^s and Sec_{h - N_s}(V_{d-s}).

    Below that range the call is delegated to catalecticant_decompose and
    h = 1 uses the rank-one shortcut."""
    F = as_symtensor(F)
    if h < 1:
        raise DomainError("rank must be positive")
    if h == 1:
        _check_char(F.field, F.d)
        return rank_one_decompose(F, "generalized")
    F, n, d, s, N_s, r = _symmetric_setup(F, h, s)
    if r <= 1:
        return catalecticant_decompose(F, h, seed=seed, chart_retries=chart_retries)
    ok = bound_ok(n, d, h, s)
    if check_bound and not ok:
        raise BoundExceeded(f"h = {h} is outside the admissible range for (n, d, s) = ({n}, {d}, {s})")
    k = d - s
    make_model = lambda rr: secant_model((n,), (k,), rr)
    model = make_model(r)
    H = derivative_space(F, s)
    expected = math.comb(h, N_s)
    cert = IdentifiabilityCertificate(
        method="generalized", h=h, s=s, n_s=N_s, secant_level=r,
        catalecticant_rank=H.dim + 1, expected_rank=N_s + 1, expected=expected,
        expected_lower=math.comb(h - 1, N_s), bound_ok=ok, effective=h <= N_s + 2, seed=seed,
    )
    if H.dim != N_s:
        raise CriterionFailed(f"rank Cat_{s}(F) = {H.dim + 1}, expected {N_s + 1}", certificate=cert)
    res = intersect_linear_section(model, H, seed=seed, chart_retries=chart_retries)
    cert.zero_dimensional, cert.degree_found = res.zero_dimensional, res.degree
    if not res.zero_dimensional or res.degree != expected:
        what = "positive-dimensional" if not res.zero_dimensional else f"of degree {res.degree}"
        raise CriterionFailed(f"section is {what}, expected {expected} points", certificate=cert)
    if not res.all_simple or len(res.points) != expected:
        raise DegenerateInput("section has non-reduced points", certificate=cert)
    cert.distinct = len(res.points)
    z, dl, dist = _lower_level(make_model, r - 1, H, cert.expected_lower, seed, chart_retries)
    cert.lower_zero_dimensional, cert.degree_found_lower, cert.distinct_lower = z, dl, dist
    _set_verdict(cert)
    E = res.field
    planes = recover_hyperplanes(res.points, h, E, seed=seed)
    forms = []
    for normal, _ in planes:
        G = pairing_to_power(list(normal), n + 1, s, E)
        L, _ = extract_linear_form(G, s)
        forms.append((L,))
    lam = solve_coefficients(F.poly, forms, field=E)
    if lam is None:
        raise NotADecomposition("recovered powers do not span F", certificate=cert)
    cert.notes.append(f"{len(planes)} hyperplanes, {math.comb(h - 1, N_s - 1)} points each")
    return finalize(F.poly, forms, lam, E, "generalized", (d,), True, cert)


def certify_identifiability(F, h: int, s: int | None = None, seed: int = 0, chart_retries: int = 5):
    """Conditions (i) and (ii) through quotient degrees and distinct-point
    counts only; never raises for a failed check."""
    try:
        F, n, d, s, N_s, r = _symmetric_setup(F, h, s)
    except TensorDecError as exc:
        cert = IdentifiabilityCertificate(method="generalized", h=h, s=s, seed=seed)
        cert.notes.append(str(exc))
        return cert
    expected = math.comb(h, N_s) if h >= N_s else None
    cert = IdentifiabilityCertificate(
        method="generalized", h=h, s=s, n_s=N_s, secant_level=r, expected_rank=N_s + 1,
        expected=expected, expected_lower=math.comb(h - 1, N_s) if h >= 1 else None,
        bound_ok=bound_ok(n, d, h, s), effective=h <= N_s + 2, seed=seed,
    )
    try:
        H = derivative_space(F, s)
        cert.catalecticant_rank = H.dim + 1
        if r < 2:
            return _certify_catalecticant(F, h, seed, chart_retries, cert)
        make_model = lambda rr: secant_model((n,), (d - s,), rr)
        res = intersect_linear_section(make_model(r), H, seed=seed, chart_retries=chart_retries, solve=False)
        cert.zero_dimensional, cert.degree_found = res.zero_dimensional, res.degree
        if not res.zero_dimensional:
            cert.notes.append("positive-dimensional intersection")
        elif res.degree == expected:
            cert.distinct = _distinct_count(make_model(r), H, seed)
            z, dl, dist = _lower_level(make_model, r - 1, H, cert.expected_lower, seed, chart_retries)
            cert.lower_zero_dimensional, cert.degree_found_lower, cert.distinct_lower = z, dl, dist
    except TensorDecError as exc:
        cert.notes.append(f"{type(exc).__name__}: {exc}")
        return cert
    return _set_verdict(cert)


def _certify_catalecticant(F, h, seed, chart_retries, cert):
    """h <= N_s + 1: the catalecticant criterion at the least admissible s."""
    n, d = F.n, F.d
    s = minimal_s(n, h)
    cert.method, cert.s, cert.n_s = "catalecticant", s, math.comb(n + s, n) - 1
    cert.secant_level, cert.expected, cert.expected_rank = 1, h, h
    cert.expected_lower = cert.degree_found_lower = None
    cert.effective = None
    if d - s < 2:
        cert.notes.append(f"derivative order {s} leaves no Veronese target")
        return cert
    H = derivative_space(F, s)
    cert.catalecticant_rank = H.dim + 1
    res = intersect_linear_section(secant_model((n,), (d - s,), 1), H, seed=seed, chart_retries=chart_retries, solve=False)
    cert.zero_dimensional, cert.degree_found = res.zero_dimensional, res.degree
    if not res.zero_dimensional:
        cert.notes.append("positive-dimensional intersection")
    elif res.degree == h:
        cert.distinct = _distinct_count(secant_model((n,), (d - s,), 1), H, seed)
    ok = cert.catalecticant_rank == h and res.zero_dimensional and res.degree == h and cert.distinct == h
    cert.verdict = "identifiable" if ok else "inconclusive"
    return cert


# ---------------------------------------------------------------------------
# mixed


def default_spec(dims, degrees) -> FlatteningSpec:
    """a = e_1: one derivative in the first factor."""
    a = [0] * len(dims)
    a[0] = 1
    return FlatteningSpec.from_a(a, degrees)


def _model_matrix(model, point, E):
    entries, _, _ = model.matrices[0]
    return [[E.sum(E.mul(E.from_int(c), point[i]) for i, c in sp.items()) for sp in row] for row in entries]


def _b_parts(model, T, spec, points, planes, E):
    """Per-term b-part forms from the point matrices: the column and row
    spaces of a point's matrix are spanned by the b-parts of the terms
    whose hyperplane avoids the point."""
    h = len(planes)
    active = [j for j, b in enumerate(spec.b) if b > 0]
    incident = [set() for _ in points]
    for i, (_, inc) in enumerate(planes):
        for k in inc:
            incident[k].add(i)
    mats = [_model_matrix(model, pt, E) for pt in points]
    out = []
    for i in range(h):
        ks = [k for k in range(len(points)) if i not in incident[k]]
        if not ks:
            raise RecoveryFailed(f"no point avoids hyperplane {i}")

        def common(vecs_of):
            span = None
            for k in ks:
                vs = row_basis(Matrix(E, vecs_of(mats[k]), len(vecs_of(mats[k])[0]))).rows
                span = vs if span is None else intersect_row_spaces(E, span, vs, len(vs[0]))
                if len(span) <= 1:
                    break
            if len(span) != 1:
                raise RecoveryFailed(f"b-part of term {i} not determined (span dimension {len(span)})")
            return monic_vector(span[0], E)[0]

        forms = [None] * len(T.dims)
        if model.kind == "segre_matrix":
            j1, j2 = active
            forms[j1] = common(lambda M: [list(c) for c in zip(*M)])
            forms[j2] = common(lambda M: M)
        elif model.kind == "segre_symmetric":
            forms[active[0]] = common(lambda M: M)
        else:
            raise RecoveryFailed(f"b-part recovery not available for {model.kind}")
        out.append(forms)
    return out


def mixed_decompose(T: MixedTensor, h: int, spec=None, seed: int = 0, chart_retries: int = 5, check_bound: bool = True):
    """Generalized method on an (A,B)-flattening of a mixed tensor."""
    if T.p == 1:
        dec = generalized_decompose(T.to_poly(), h, seed=seed, chart_retries=chart_retries, check_bound=check_bound)
        return dec
    K = T.field
    _check_char(K, max(T.degrees))
    if h < 1:
        raise DomainError("rank must be positive")
    if spec is None:
        spec = default_spec(T.dims, T.degrees)
    elif not isinstance(spec, FlatteningSpec):
        spec = FlatteningSpec.from_a(spec, T.degrees)
    spec.validate(T.dims, T.degrees)
    if h == 1:
        vec = [T.entries.get(k, K.zero) for k in T.coordinate_keys()]
        forms = factor_rank_one(vec, T.dims, T.degrees, K, "plain")
        cert = IdentifiabilityCertificate(method="mixed", h=1, spec=tuple(spec.a), verdict="identifiable", seed=seed)
        lam = solve_coefficients(T, [tuple(forms)])
        return finalize(T, [tuple(forms)], lam, K, "mixed", T.degrees, False, cert)
    M_A = spec.M_A(T.dims)
    r = h - M_A
    if r <= 1:
        return mixed_catalecticant_decompose(T, h, spec, seed=seed, chart_retries=chart_retries)
    ok = mixed_bound_ok(T.dims, T.degrees, spec, h)
    if check_bound and not ok:
        raise BoundExceeded(f"h = {h} is outside the admissible range for this flattening")
    make_model = lambda rr: segre_veronese_equations(T.dims, spec.b, rr)
    model = make_model(r)
    M = mixed_flattening(T, spec)
    expected = math.comb(h, M_A)
    cert = IdentifiabilityCertificate(
        method="mixed", h=h, spec=tuple(spec.a), n_s=M_A, secant_level=r, expected_rank=M_A + 1,
        expected=expected, expected_lower=math.comb(h - 1, M_A), bound_ok=ok, effective=h <= M_A + 2, seed=seed,
    )
    cert.catalecticant_rank = rank(M)
    if cert.catalecticant_rank != M_A + 1:
        raise CriterionFailed(f"flattening rank {cert.catalecticant_rank}, expected {M_A + 1}", certificate=cert)
    H = LinearSubspace(M, "T(V_A*)")
    res = intersect_linear_section(model, H, seed=seed, chart_retries=chart_retries)
    cert.zero_dimensional, cert.degree_found = res.zero_dimensional, res.degree
    if not res.zero_dimensional or res.degree != expected:
        what = "positive-dimensional" if not res.zero_dimensional else f"of degree {res.degree}"
        raise CriterionFailed(f"section is {what}, expected {expected} points", certificate=cert)
    if not res.all_simple or len(res.points) != expected:
        raise DegenerateInput("section has non-reduced points", certificate=cert)
    cert.distinct = len(res.points)
    z, dl, dist = _lower_level(make_model, r - 1, H, cert.expected_lower, seed, chart_retries)
    cert.lower_zero_dimensional, cert.degree_found_lower, cert.distinct_lower = z, dl, dist
    _set_verdict(cert)
    E = res.field
    planes = recover_hyperplanes(res.points, h, E, seed=seed)
    a_forms = [factor_rank_one(list(normal), T.dims, spec.a, E, "pairing") for normal, _ in planes]
    b_forms = _b_parts(model, T, spec, res.ambient_points, planes, E)
    forms = []
    for af, bf in zip(a_forms, b_forms):
        forms.append(tuple(af[j] if spec.a[j] > 0 else bf[j] for j in range(T.p)))
    lam = solve_coefficients(T, forms, field=E)
    if lam is None:
        raise NotADecomposition("recovered rank-one tensors do not span T", certificate=cert)
    return finalize(T, forms, lam, E, "mixed", T.degrees, False, cert)
