"""Shared decomposition machinery: result types, the coefficient solve,
verification, pure-power extraction, hyperplane recovery and bound gates."""
from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field as dc_field
from itertools import combinations

from ..errors import (
    DomainError,
    NotADecomposition,
    NotPurePower,
    NotRankOne,
    RecoveryFailed,
    UnderdeterminedError,
)
from ..fields import ExtensionField
from ..flattenings import MixedTensor, SymTensor, as_symtensor, catalecticant_matrix, multi_basis
from ..linalg import Matrix, kernel, rank, solve_linear
from ..poly import Poly, coeff_vector, expand_power_linear, monomial_basis, multinomial
from ..varieties import (
    matrix_secant_codim,
    matrix_secant_degree,
    symmetric_secant_codim,
    symmetric_secant_degree,
)

__all__ = [
    "Decomposition",
    "IdentifiabilityCertificate",
    "VerificationReport",
    "solve_coefficients",
    "verify_decomposition",
    "extract_linear_form",
    "recover_hyperplanes",
    "factor_rank_one",
    "bound_ok",
    "mixed_bound_ok",
    "cubic_bound",
    "B_nd",
]


@dataclass
class IdentifiabilityCertificate:
    """Measured quantities behind an identifiability verdict.

    ``degree_found``/``expected`` refer to the linear section at secant
    level ``secant_level``; the ``*_lower`` fields refer to level - 1."""

    method: str
    h: int
    s: int | None = None
    spec: tuple | None = None
    n_s: int | None = None
    secant_level: int | None = None
    catalecticant_rank: int | None = None
    expected_rank: int | None = None
    zero_dimensional: bool | None = None
    degree_found: int | None = None
    expected: int | None = None
    distinct: int | None = None
    lower_zero_dimensional: bool | None = None
    degree_found_lower: int | None = None
    distinct_lower: int | None = None
    expected_lower: int | None = None
    bound_ok: bool | None = None
    effective: bool | None = None
    verdict: str = "inconclusive"
    seed: int = 0
    notes: list = dc_field(default_factory=list)

    def to_json(self) -> dict:
        d = asdict(self)
        if d["spec"] is not None:
            d["spec"] = list(d["spec"])
        return d

    @classmethod
    def from_json(cls, d: dict) -> "IdentifiabilityCertificate":
        d = dict(d)
        if d.get("spec") is not None:
            d["spec"] = tuple(d["spec"])
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in d.items() if k in known})


@dataclass
class VerificationReport:
    ok: bool
    slot: tuple | None = None
    expected: str | None = None
    found: str | None = None

    def __bool__(self):
        return self.ok


def _target_field(target):
    if isinstance(target, MixedTensor):
        return target.field
    return as_symtensor(target).field


def _embed_target(target, E):
    if isinstance(target, MixedTensor):
        return target.embed(E)
    P = as_symtensor(target).poly
    return P.embed(E)


def rank_one_tensor(forms, degrees, field, symmetric):
    if symmetric:
        return expand_power_linear(forms[0], degrees[0], field)
    return MixedTensor.rank_one(forms, degrees, field)


@dataclass
class Decomposition:
    """sum_i coefficients[i] * prod_j forms[i][j]^degrees[j].

    Every form vector is monic (first nonzero coordinate 1).  When a target
    is supplied the reconstruction is re-verified at construction."""

    forms: list
    coefficients: list
    field: object
    method: str
    degrees: tuple
    symmetric: bool = True
    certificate: IdentifiabilityCertificate | None = None
    target: object = dc_field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.degrees = tuple(self.degrees)
        self.forms = [tuple(tuple(v) for v in f) for f in self.forms]
        if len(self.forms) != len(self.coefficients):
            raise DomainError("one coefficient per rank-one term is required")
        if self.target is not None:
            rep = verify_decomposition(self.target, self)
            if not rep.ok:
                raise NotADecomposition(
                    f"reconstruction differs from the input at {rep.slot}", slot=rep.slot
                )

    @property
    def rank(self) -> int:
        return len(self.forms)

    @property
    def linear_forms(self):
        if not self.symmetric:
            raise DomainError("mixed decompositions have one form per factor")
        return [f[0] for f in self.forms]

    @property
    def extension_degree(self) -> int:
        return getattr(self.field, "degree", 1)

    def expand(self):
        K = self.field
        total = None
        for f, lam in zip(self.forms, self.coefficients):
            term = rank_one_tensor(f, self.degrees, K, self.symmetric)
            term = term.scale(lam)
            total = term if total is None else total + term
        if total is None:
            raise DomainError("empty decomposition")
        return total


def verify_decomposition(target, dec: Decomposition) -> VerificationReport:
    """Exact reconstruction check, reporting the first differing slot."""
    E = dec.field
    try:
        tgt = _embed_target(target, E)
    except Exception:
        return VerificationReport(False, None, "target not embeddable in the decomposition field")
    if dec.rank == 0:
        recon_terms = {}
    else:
        recon = dec.expand()
        recon_terms = recon.terms if isinstance(recon, Poly) else recon.entries
    tgt_terms = tgt.terms if isinstance(tgt, Poly) else tgt.entries
    keys = sorted(set(recon_terms) | set(tgt_terms), reverse=True)
    for k in keys:
        a = tgt_terms.get(k, E.zero)
        b = recon_terms.get(k, E.zero)
        if a != b:
            return VerificationReport(False, k, E.to_str(a), E.to_str(b))
    return VerificationReport(True)


def _columns(target, forms, E):
    """Coordinate keys and a column per rank-one term."""
    if isinstance(target, MixedTensor):
        degrees = target.degrees
        keys = target.coordinate_keys()
        cols = []
        for f in forms:
            T = MixedTensor.rank_one(f, degrees, E)
            cols.append([T.entries.get(k, E.zero) for k in keys])
        return keys, cols
    P = as_symtensor(target)
    d = P.d
    keys = monomial_basis(P.poly.nvars, d)
    cols = []
    for f in forms:
        L = f[0]
        if len(L) != P.poly.nvars:
            raise DomainError(f"form has {len(L)} coordinates, target has {P.poly.nvars} variables")
        cols.append(coeff_vector(expand_power_linear(L, d, E), d))
    return keys, cols


def solve_coefficients(target, forms, field=None):
    """lambda with sum lambda_i U_i = target; None if inconsistent.

    ``forms`` holds one tuple of per-factor vectors per term, (L,) for a
    symmetric target.

    Raises UnderdeterminedError when the rank-one terms are dependent."""
    E = field or _target_field(target)
    tgt = _embed_target(target, E)
    keys, cols = _columns(tgt, forms, E)
    if isinstance(tgt, MixedTensor):
        rhs = [tgt.entries.get(k, E.zero) for k in keys]
    else:
        rhs = [tgt.terms.get(k, E.zero) for k in keys]
    A = Matrix(E, [list(r) for r in zip(*cols)] if cols else [[] for _ in keys], len(cols))
    if not cols:
        return [] if all(E.is_zero(x) for x in rhs) else None
    sol = solve_linear(A, rhs)
    if sol is None:
        return None
    if not sol.unique:
        raise UnderdeterminedError(
            f"coefficients not unique (kernel dimension {sol.kernel.nrows})", kernel_dim=sol.kernel.nrows
        )
    return sol.particular


# ---------------------------------------------------------------------------
# normalization and finalization of results


def monic_vector(v, E):
    for c in v:
        if not E.is_zero(c):
            inv = E.inv(c)
            return [E.mul(x, inv) for x in v], c
    raise DomainError("zero vector")


def _descend_value(x, E):
    return x[0] if isinstance(E, ExtensionField) else x


def finalize(target, forms, coefficients, E, method, degrees, symmetric, certificate):
    """Normalize, sort canonically, descend to the base field when every
    value lies there, and build a verified Decomposition."""
    base = _target_field(target)
    normed = []
    for f, lam in zip(forms, coefficients):
        new_f = []
        for v, d in zip(f, degrees):
            mv, c = monic_vector(v, E)
            new_f.append(tuple(mv))
            lam = E.mul(lam, E.pow(c, d))
        normed.append((tuple(new_f), lam))
    if isinstance(E, ExtensionField) and E != base:
        values = [x for f, lam in normed for v in f for x in v] + [lam for _, lam in normed]
        if all(E.in_base(x) for x in values):
            normed = [(tuple(tuple(_descend_value(x, E) for x in v) for v in f), _descend_value(lam, E)) for f, lam in normed]
            E = base
    normed.sort(key=lambda t: [[E.to_str(x) for x in v] for v in t[0]])
    return Decomposition(
        [f for f, _ in normed],
        [lam for _, lam in normed],
        E,
        method,
        degrees,
        symmetric,
        certificate,
        target,
    )


# ---------------------------------------------------------------------------
# pure powers and rank-one tensors


def extract_linear_form(G: Poly, s: int):
    """(L, c) with G = c * L^s and L monic; rank of Cat_{s-1}(G) must be 1."""
    K = G.field
    if s < 1:
        raise DomainError("power must be positive")
    if G.is_zero():
        raise NotPurePower("zero polynomial")
    if not G.is_homogeneous(s):
        raise DomainError(f"polynomial is not homogeneous of degree {s}")
    if s == 1:
        L = coeff_vector(G, 1)
    else:
        M = catalecticant_matrix(SymTensor(G, s), s - 1)
        if rank(M) != 1:
            raise NotPurePower("catalecticant rank is not one")
        L = next(r for r in M.rows if any(not K.is_zero(x) for x in r))
    L, _ = monic_vector(L, K)
    P = expand_power_linear(L, s, K)
    e0 = next(iter(sorted(G.terms, reverse=True)))
    pe = P.terms.get(e0)
    if pe is None:
        raise NotPurePower("not a pure power")
    c = K.div(G.terms[e0], pe)
    if P.scale(c) != G:
        raise NotPurePower("not a pure power")
    return L, c


def factor_rank_one(vec, dims, degrees, field, convention="plain"):
    """Per-slot linear forms of a rank-one vector on multi_basis(dims, degrees).

    ``plain``: coordinates are coefficients of prod_j L_j^{d_j}.
    ``pairing``: coordinates are prod_j alpha_j^{m_j} (no multinomials).
    Returns a list with None for slots of degree 0."""
    E = field
    keys = multi_basis(dims, degrees)
    pos = {k: i for i, k in enumerate(keys)}
    star = next((k for k, v in zip(keys, vec) if not E.is_zero(v)), None)
    if star is None:
        raise NotRankOne("zero tensor")
    out = []
    for j, (n, d) in enumerate(zip(dims, degrees)):
        if d == 0:
            out.append(None)
            continue
        t = {}
        for mu in monomial_basis(n + 1, d):
            key = star[:j] + (mu,) + star[j + 1 :]
            c = vec[pos[key]]
            if convention == "pairing":
                c = E.mul(c, E.from_int(multinomial(mu)))
            if not E.is_zero(c):
                t[mu] = c
        try:
            L, _ = extract_linear_form(Poly(E, n + 1, t, clean=True), d)
        except NotPurePower as exc:
            raise NotRankOne(f"slot {j} is not a pure power") from exc
        out.append(L)
    # confirm the whole vector is proportional to the product
    ref = []
    for k in keys:
        v = E.one
        for L, m, d in zip(out, k, degrees):
            if d == 0:
                continue
            for a, e in zip(L, m):
                if e:
                    v = E.mul(v, E.pow(a, e))
            if convention == "plain":
                v = E.mul(v, E.from_int(multinomial(m)))
        ref.append(v)
    i0 = pos[star]
    ratio = E.div(vec[i0], ref[i0])
    if any(E.sub(a, E.mul(ratio, b)) != E.zero for a, b in zip(vec, ref)):
        raise NotRankOne("vector is not a rank-one tensor")
    return out


# ---------------------------------------------------------------------------
# hyperplane recovery


def recover_hyperplanes(points, h: int, field, seed: int = 0, enumerate_below: int = 5000, max_trials=None):
    """The h hyperplanes of P^m spanned by m-subsets of the C(h, m) points
    that contain exactly C(h-1, m-1) of them.

    Returns a list of (normal, incident point indices), sorted by normal.
    Candidates come from seeded random m-subsets; if sampling stalls, or
    the subset count is small, all m-subsets are enumerated."""
    E = field
    pts = [list(p) for p in points]
    if not pts:
        raise RecoveryFailed("no points")
    m = len(pts[0]) - 1
    if m < 1:
        raise RecoveryFailed("points must lie in a projective space of positive dimension")
    if len(pts) != math.comb(h, m):
        raise RecoveryFailed(f"expected C({h},{m}) = {math.comb(h, m)} points, got {len(pts)}")
    normed = [tuple(monic_vector(p, E)[0]) for p in pts]
    if len(set(normed)) != len(normed):
        raise RecoveryFailed("points are not pairwise distinct")
    need = math.comb(h - 1, m - 1)
    found = {}

    def test(subset):
        sub = Matrix(E, [pts[i] for i in subset], m + 1)
        K = kernel(sub)
        if K.nrows != 1:
            return
        normal = tuple(monic_vector(K.rows[0], E)[0])
        if normal in found:
            return
        inc = [i for i, p in enumerate(pts) if E.is_zero(E.dot(normal, p))]
        if len(inc) == need:
            found[normal] = inc

    total = math.comb(len(pts), m)
    if total <= enumerate_below:
        for subset in combinations(range(len(pts)), m):
            test(subset)
    else:
        rng = random.Random(seed)
        trials = max_trials or 200 * h
        for _ in range(trials):
            if len(found) >= h:
                break
            test(sorted(rng.sample(range(len(pts)), m)))
        if len(found) < h:
            # targeted search: extend subsets inside the incidence of known planes
            for subset in combinations(range(len(pts)), m):
                test(subset)
                if len(found) > h:
                    break
    if len(found) != h:
        raise RecoveryFailed(f"configuration not generic: found {len(found)} hyperplanes, expected {h}")
    on = [0] * len(pts)
    for inc in found.values():
        for i in inc:
            on[i] += 1
    if any(c != m for c in on):
        raise RecoveryFailed("configuration not generic: a point is not on exactly m hyperplanes")
    return sorted(found.items(), key=lambda kv: [E.to_str(x) for x in kv[0]])


# ---------------------------------------------------------------------------
# bound gates


def cubic_bound(n: int) -> float:
    return (4 * n - math.sqrt(8 * n + 1) + 3) / 2


def B_nd(n: int, d: int) -> float:
    return (math.comb(d - 1 + n, n) + n * n) / (n + 1)


def bound_ok(n: int, d: int, h: int, s: int | None = None) -> bool:
    """Admissibility of (n, d, h) for the generalized catalecticant method.

    Degree-2 targets (s = d-2) use the exact codimension and degree of the
    rank locus of symmetric matrices: codim > N_s, or codim = N_s with
    degree exactly C(h, N_s).  For d = 3 this is the cubic bound together
    with its two equality cases (n, h) = (1, 2), (3, 5).  Higher targets
    use the expected dimension of the secant variety, which for s = 1 is
    h < B_{n,d}."""
    if s is None:
        s = d - 2
    N_s = math.comb(n + s, s) - 1
    r = h - N_s
    if r < 1 or d - s < 2:
        return False
    k = d - s
    if k == 2:
        if r > n:
            return False
        codim = symmetric_secant_codim(n, r)
        if codim > N_s:
            return True
        return codim == N_s and symmetric_secant_degree(n, r) == math.comb(h, N_s)
    N = math.comb(n + k, n) - 1
    expected_dim = min(r * (n + 1) - 1, N)
    return N - expected_dim > N_s


def mixed_bound_ok(dims, degrees, spec, h: int) -> bool:
    """Same rule for mixed tensors, for the determinantal b-parts."""
    M_A = spec.M_A(dims)
    r = h - M_A
    if r < 1:
        return False
    active = [j for j, b in enumerate(spec.b) if b > 0]
    if len(active) == 2 and all(spec.b[j] == 1 for j in active):
        m, n = dims[active[0]] + 1, dims[active[1]] + 1
        if r >= min(m, n):
            return False
        codim, deg = matrix_secant_codim(m, n, r), matrix_secant_degree(m, n, r)
    elif len(active) == 1 and spec.b[active[0]] == 2:
        n = dims[active[0]]
        if r > n:
            return False
        codim, deg = symmetric_secant_codim(n, r), symmetric_secant_degree(n, r)
    else:
        N = spec.M_B(dims)
        sv_dim = sum(dims[j] for j in active)
        codim = N - min(r * (sv_dim + 1) - 1, N)
        deg = None
    if codim > M_A:
        return True
    return codim == M_A and deg == math.comb(h, M_A)
