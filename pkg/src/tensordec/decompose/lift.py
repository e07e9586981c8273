"""Decompositions lifted from the simultaneous decomposition of the
partial derivatives; the rank is not an input."""
from __future__ import annotations

from ..errors import MethodFailed, TensorDecError
from ..flattenings import _check_char, as_symtensor, derivative_space
from ..linalg import Matrix, rank
from ..poly import coeff_vector, expand_power_linear
from ..varieties import intersect_linear_section, veronese_equations
from .catalecticant import _points_to_forms, rank_one_decompose
from .core import IdentifiabilityCertificate, finalize, solve_coefficients

__all__ = ["derivative_lift_decompose"]


def derivative_lift_decompose(F, seed: int = 0, chart_retries: int = 5, max_s: int | None = None):
    """Scan s = 1, 2, ...: the points of H^s on V_{d-s} give candidate forms;
    return the first s for which F is a combination of their d-th powers.

    ``lift_guaranteed`` in the notes records whether the powers L_i^{d-s-1}
    are independent, the hypothesis under which the lift is automatic; the
    coefficient solve is attempted either way and zero coefficients are
    dropped."""
    F = as_symtensor(F)
    n, d, K, P = F.n, F.d, F.field, F.poly
    _check_char(K, d)
    try:
        return rank_one_decompose(F, "lift")
    except TensorDecError:
        pass
    tried = []
    top = d - 2 if max_s is None else min(max_s, d - 2)
    for s in range(1, top + 1):
        k = d - s
        H = derivative_space(F, s)
        try:
            res = intersect_linear_section(veronese_equations(n, k), H, seed=seed, chart_retries=chart_retries)
        except TensorDecError as exc:
            tried.append(f"s={s}: {type(exc).__name__}")
            continue
        if not res.zero_dimensional or not res.ambient_points:
            tried.append(f"s={s}: {'positive-dimensional' if not res.zero_dimensional else 'empty'}")
            continue
        E = res.field
        try:
            forms = _points_to_forms(res.ambient_points, E, n + 1, k)
        except TensorDecError as exc:
            tried.append(f"s={s}: {type(exc).__name__}")
            continue
        span = rank(Matrix(E, [coeff_vector(expand_power_linear(f[0], k, E), k) for f in forms], H.ambient_dim))
        lower = [coeff_vector(expand_power_linear(f[0], k - 1, E), k - 1) for f in forms]
        guaranteed = rank(Matrix(E, lower, len(lower[0]))) == len(forms)
        try:
            lam = solve_coefficients(P, forms, field=E)
        except TensorDecError as exc:
            tried.append(f"s={s}: {type(exc).__name__}")
            continue
        if lam is None:
            tried.append(f"s={s}: powers do not span F")
            continue
        keep = [i for i, c in enumerate(lam) if not E.is_zero(c)]
        cert = IdentifiabilityCertificate(
            method="lift", h=len(keep), s=s, catalecticant_rank=H.dim + 1,
            zero_dimensional=True, degree_found=res.degree, distinct=len(forms), seed=seed,
        )
        cert.notes = tried + [
            f"s={s}: {len(forms)} points, spanning dimension {span - 1} of dim H = {H.dim}",
            f"lift_guaranteed={guaranteed}",
        ]
        return finalize(P, [forms[i] for i in keep], [lam[i] for i in keep], E, "lift", (d,), True, cert)
    raise MethodFailed("no derivative order yields a lifting decomposition; " + "; ".join(tried), tried=tried)
