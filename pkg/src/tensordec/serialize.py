"""JSON and text formats for polynomials, tensors, decompositions and
certificates.  All scalars are written as exact strings."""
from __future__ import annotations

import json

from .decompose.core import Decomposition, IdentifiabilityCertificate
from .errors import ParseError, TensorDecError
from .fields import ExtensionField, field_from_spec
from .flattenings import MixedTensor
from .poly import Poly, parse_poly

__all__ = [
    "field_spec",
    "dumps",
    "poly_to_json",
    "tensor_to_json",
    "tensor_from_json",
    "decomposition_to_json",
    "decomposition_from_json",
    "read_input",
    "parse_field",
]


def field_spec(E) -> str:
    """Spec string that reconstructs E exactly (modulus spelled out for
    extension fields)."""
    if isinstance(E, ExtensionField):
        return f"{E.p}:[{','.join(str(c) for c in E.modulus)}]"
    return E.spec


def parse_field(text):
    return field_from_spec(text)


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _parse_scalar(E, text):
    try:
        return E.parse(str(text))
    except TensorDecError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad coefficient {text!r}") from exc


def poly_to_json(P: Poly) -> dict:
    d = P.homogeneous_degree()
    return {"kind": "symmetric", "field": field_spec(P.field), "nvars": P.nvars, "degree": d, "poly": P.to_text()}


def tensor_to_json(T: MixedTensor) -> dict:
    K = T.field
    entries = [
        {"idx": [list(m) for m in key], "coeff": K.to_str(T.entries[key])}
        for key in sorted(T.entries)
    ]
    return {"kind": "mixed", "field": field_spec(K), "dims": list(T.dims), "degrees": list(T.degrees), "entries": entries}


def tensor_from_json(d: dict, field=None) -> MixedTensor:
    try:
        K = field if field is not None else field_from_spec(d.get("field", "32003"))
        dims, degrees = tuple(int(x) for x in d["dims"]), tuple(int(x) for x in d["degrees"])
        entries = {}
        for e in d["entries"]:
            key = tuple(tuple(int(a) for a in m) for m in e["idx"])
            c = _parse_scalar(K, e["coeff"])
            entries[key] = K.add(entries.get(key, K.zero), c)
        return MixedTensor(dims, degrees, K, entries)
    except TensorDecError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed tensor: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed tensor JSON: {exc}") from exc


def decomposition_to_json(D: Decomposition) -> dict:
    E = D.field
    if D.symmetric:
        forms = [[E.to_str(x) for x in f[0]] for f in D.forms]
    else:
        forms = [[[E.to_str(x) for x in v] for v in f] for f in D.forms]
    out = {
        "method": D.method,
        "field": field_spec(E),
        "kind": "symmetric" if D.symmetric else "mixed",
        "degrees": list(D.degrees),
        "forms": forms,
        "coefficients": [E.to_str(c) for c in D.coefficients],
        "extension_degree": getattr(E, "degree", 1),
        "certificate": D.certificate.to_json() if D.certificate is not None else None,
    }
    return out


def decomposition_from_json(d: dict, target=None) -> Decomposition:
    """Rebuild a Decomposition; with ``target`` it is re-verified."""
    try:
        E = field_from_spec(d["field"])
        symmetric = d.get("kind", "symmetric") == "symmetric"
        if symmetric:
            forms = [(tuple(_parse_scalar(E, x) for x in f),) for f in d["forms"]]
        else:
            forms = [tuple(tuple(_parse_scalar(E, x) for x in v) for v in f) for f in d["forms"]]
        lam = [_parse_scalar(E, c) for c in d["coefficients"]]
        cert = d.get("certificate")
        cert = IdentifiabilityCertificate.from_json(cert) if cert else None
        degrees = tuple(int(x) for x in d["degrees"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed decomposition JSON: {exc}") from exc
    return Decomposition(forms, lam, E, d.get("method", "unknown"), degrees, symmetric, cert, target)


def read_input(text: str, field=None, nvars: int | None = None):
    """Polynomial text, or JSON holding a tensor ({"entries": ...}) or a
    polynomial ({"poly": ...}).  Returns a Poly or a MixedTensor."""
    s = text.strip()
    if not s:
        raise ParseError("empty input")
    if s.startswith("{"):
        try:
            d = json.loads(s)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
        K = field if field is not None else field_from_spec(d.get("field", "32003"))
        if "entries" in d:
            return tensor_from_json(d, K)
        if "poly" in d:
            return parse_poly(d["poly"], K, d.get("nvars", nvars))
        raise ParseError("JSON input needs 'entries' or 'poly'")
    K = field if field is not None else field_from_spec("32003")
    return parse_poly(s, K, nvars)
