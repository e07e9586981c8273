"""Command line front end: gen, decompose, identify, verify.

Exit codes: 0 success, 1 usage or domain error, 2 criterion failed or not
identifiable, 3 degenerate input, 4 parse error, 5 time limit."""
from __future__ import annotations

import argparse
import os
import signal
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field as dc_field

from . import decompose as dec
from .errors import DomainError, ParseError, TensorDecError, TimeLimitExceeded
from .fields import field_from_spec
from .flattenings import FlatteningSpec, MixedTensor
from .generators import gen_polynomial_of_rank, gen_tensor_of_rank
from .serialize import (
    decomposition_from_json,
    decomposition_to_json,
    dumps,
    field_spec,
    poly_to_json,
    read_input,
    tensor_to_json,
)

FIELD_ENV = "TENSORDEC_FIELD"
METHODS = ("auto", "catalecticant", "generalized", "hilbert", "lift", "vsp", "mixed")
AUTO_ORDER = ("catalecticant", "generalized", "hilbert", "lift")


@dataclass
class JobConfig:
    field: str = "32003"
    n: int | None = None
    d: int | None = None
    dims: tuple | None = None
    degrees: tuple | None = None
    h: int | None = None
    method: str = "auto"
    seed: int = 0
    spec: tuple | None = None
    output_format: str = "json"
    chart_retries: int = 5
    time_limit: float | None = None
    extra: dict = dc_field(default_factory=dict)

    def validate(self, command: str):
        if self.method not in METHODS:
            raise DomainError(f"unknown method {self.method!r}")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if self.h is not None and self.h < 1:
            raise DomainError("--h must be positive")
        if command == "gen":
            if self.h is None:
                raise DomainError("gen needs --h")
            if self.dims is None and (self.n is None or self.d is None):
                raise DomainError("gen needs --n and --d, or --dims and --degrees")
            if self.dims is not None and (self.degrees is None or len(self.degrees) != len(self.dims)):
                raise DomainError("--degrees must match --dims")
        if command in ("decompose", "identify"):
            needs_h = self.method not in ("auto", "lift")
            if (needs_h or command == "identify") and self.h is None:
                raise DomainError(f"{command} with method {self.method} needs --h")
        if self.chart_retries < 0:
            raise DomainError("--chart-retries must be non-negative")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _ints(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser():
    p = _Parser(prog="tensordec", description="Exact Waring and tensor decompositions over finite fields and Q.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--field", default=None, help=f"prime p, 'Q', or 'p^k' (default ${FIELD_ENV} or 32003)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--output", "-o", default=None, help="output file (default stdout)")
        sp.add_argument("--format", dest="output_format", choices=("json", "text"), default="json")
        sp.add_argument("--time-limit", type=float, default=None, help="seconds")

    g = sub.add_parser("gen", help="random polynomial or tensor of given rank")
    common(g)
    g.add_argument("--n", type=int)
    g.add_argument("--d", type=int)
    g.add_argument("--dims", type=_ints)
    g.add_argument("--degrees", type=_ints)
    g.add_argument("--h", type=int)

    for name, hlp in (("decompose", "compute a decomposition"), ("identify", "identifiability certificate")):
        sp = sub.add_parser(name, help=hlp)
        common(sp)
        sp.add_argument("inputs", nargs="*", default=["-"], help="input files ('-' for stdin)")
        sp.add_argument("--h", type=int)
        sp.add_argument("--s", type=int, default=None, help="derivative order")
        sp.add_argument("--n", type=int, default=None, help="number of variables minus one (text input)")
        sp.add_argument("--method", choices=METHODS, default="auto" if name == "decompose" else "generalized")
        sp.add_argument("--spec", type=_ints, default=None, help="flattening split a_1,...,a_p")
        sp.add_argument("--chart-retries", type=int, default=5)
        sp.add_argument("--batch", type=int, default=0, help="worker processes for several inputs")
        if name == "decompose":
            sp.add_argument("--no-bound-check", action="store_true", help="skip the admissible-rank gate")

    v = sub.add_parser("verify", help="check a decomposition against its input")
    common(v)
    v.add_argument("input")
    v.add_argument("decomposition")
    v.add_argument("--n", type=int, default=None)
    return p


def _read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


@contextmanager
def _time_limit(seconds):
    if not seconds:
        yield
        return

    def handler(signum, frame):
        raise TimeLimitExceeded(f"time limit of {seconds} s exceeded")

    old = signal.signal(signal.SIGALRM, handler)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def _resolve_field(arg):
    return field_from_spec(arg or os.environ.get(FIELD_ENV) or "32003")


def _symmetric_poly(obj):
    if isinstance(obj, MixedTensor):
        return obj.to_poly() if obj.p == 1 else None
    return obj


def decompose_object(obj, cfg: JobConfig, s=None, check_bound=True):
    """Dispatch one decomposition; returns (Decomposition, attempts)."""
    kw = dict(seed=cfg.seed, chart_retries=cfg.chart_retries)
    P = _symmetric_poly(obj)
    if P is None:
        spec = FlatteningSpec.from_a(cfg.spec, obj.degrees) if cfg.spec else None
        if cfg.method not in ("auto", "mixed"):
            raise DomainError(f"method {cfg.method} applies to symmetric inputs only")
        return dec.mixed_decompose(obj, cfg.h, spec, check_bound=check_bound, **kw), ["mixed"]
    if cfg.method == "auto":
        names = AUTO_ORDER if cfg.h is not None else ("lift",)
        attempts, last = [], None
        for name in names:
            try:
                D = _run_method(name, P, cfg, s, check_bound, kw)
                attempts.append(f"{name}: ok")
                return D, attempts
            except TensorDecError as exc:
                attempts.append(f"{name}: {type(exc).__name__}: {exc}")
                last = exc
        last.details["attempts"] = attempts
        raise last
    return _run_method(cfg.method, P, cfg, s, check_bound, kw), [cfg.method]


def _run_method(name, P, cfg, s, check_bound, kw):
    h = cfg.h
    if name == "catalecticant":
        return dec.catalecticant_decompose(P, h, s=s, **kw)
    if name == "generalized":
        return dec.generalized_decompose(P, h, s=s, check_bound=check_bound, **kw)
    if name == "hilbert":
        return dec.hilbert_projection_decompose(P, h, s=s, **kw)
    if name == "lift":
        return dec.derivative_lift_decompose(P, **kw)
    if name == "vsp":
        return dec.vsp_reduce_decompose(P, h, seed=cfg.seed)
    if name == "mixed":
        T = MixedTensor.from_poly(P, (P.nvars - 1,), (P.homogeneous_degree(),))
        return dec.mixed_decompose(T, h, cfg.spec, check_bound=check_bound, **kw)
    raise DomainError(f"unknown method {name!r}")


def _decomposition_text(D):
    E = D.field
    lines = [f"method: {D.method}", f"field: {field_spec(E)}", f"rank: {D.rank}"]
    for f, c in zip(D.forms, D.coefficients):
        parts = " * ".join("(" + ", ".join(E.to_str(x) for x in v) + ")" + (f"^{d}" if d != 1 else "") for v, d in zip(f, D.degrees))
        lines.append(f"{E.to_str(c)} * {parts}")
    if D.certificate is not None:
        lines.append(f"verdict: {D.certificate.verdict}")
    return "\n".join(lines) + "\n"


def _job(args_tuple):
    """Run one decompose/identify job; returns (exit code, text, stderr)."""
    command, text, cfg, s, check_bound, nvars = args_tuple
    try:
        K = field_from_spec(cfg.field)
        obj = read_input(text, K, nvars)
        with _time_limit(cfg.time_limit):
            if command == "identify":
                P = _symmetric_poly(obj)
                if P is None:
                    raise DomainError("identify supports symmetric inputs")
                cert = dec.certify_identifiability(P, cfg.h, s=s, seed=cfg.seed, chart_retries=cfg.chart_retries)
                body = cert.to_json()
                code = 0 if cert.verdict == "identifiable" else 2
                return code, dumps(body) if cfg.output_format == "json" else f"verdict: {cert.verdict}\n", ""
            D, attempts = decompose_object(obj, cfg, s, check_bound)
        if cfg.output_format == "text":
            return 0, _decomposition_text(D), ""
        out = decomposition_to_json(D)
        out["attempts"] = attempts
        return 0, dumps(out), ""
    except TensorDecError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        cert = exc.details.get("certificate")
        if cert is not None:
            err["certificate"] = cert.to_json()
        if "attempts" in exc.details:
            err["attempts"] = exc.details["attempts"]
        return exc.exit_code, dumps(err) if cfg.output_format == "json" else "", f"{type(exc).__name__}: {exc}\n"


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        K = _resolve_field(args.field)
    except ParseError as exc:
        sys.stderr.write(f"ParseError: {exc}\n")
        return exc.exit_code
    cfg = JobConfig(
        field=field_spec(K),
        seed=args.seed,
        h=getattr(args, "h", None),
        n=getattr(args, "n", None),
        d=getattr(args, "d", None),
        dims=getattr(args, "dims", None),
        degrees=getattr(args, "degrees", None),
        method=getattr(args, "method", "auto"),
        spec=getattr(args, "spec", None),
        output_format=args.output_format,
        chart_retries=getattr(args, "chart_retries", 5),
        time_limit=args.time_limit,
    )
    try:
        cfg.validate(args.command)
    except DomainError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    try:
        if args.command == "gen":
            return _cmd_gen(cfg, K, args)
        if args.command == "verify":
            return _cmd_verify(cfg, K, args)
        return _cmd_decompose(cfg, args)
    except TensorDecError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return exc.exit_code


def _cmd_gen(cfg, K, args):
    with _time_limit(cfg.time_limit):
        if cfg.dims is not None and len(cfg.dims) > 1:
            T, forms, lam = gen_tensor_of_rank(cfg.dims, cfg.degrees, cfg.h, K, cfg.seed)
            body = tensor_to_json(T)
            body["forms"] = [[[K.to_str(x) for x in v] for v in f] for f in forms]
        else:
            n, d = (cfg.dims[0], cfg.degrees[0]) if cfg.dims is not None else (cfg.n, cfg.d)
            F, forms, lam = gen_polynomial_of_rank(n, d, cfg.h, K, cfg.seed)
            if cfg.output_format == "text":
                _write(F.to_text() + "\n", args.output)
                return 0
            body = poly_to_json(F)
            body["forms"] = [[K.to_str(x) for x in L] for L in forms]
        body["coefficients"] = [K.to_str(c) for c in lam]
        body["seed"] = cfg.seed
    _write(dumps(body), args.output)
    return 0


def _cmd_verify(cfg, K, args):
    import json

    obj = read_input(_read(args.input), K, None if args.n is None else args.n + 1)
    try:
        d = json.loads(_read(args.decomposition))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid decomposition JSON: {exc}") from exc
    D = decomposition_from_json(d)
    tgt = obj.to_poly() if isinstance(obj, MixedTensor) and D.symmetric else obj
    rep = dec.verify_decomposition(tgt, D)
    body = {"ok": rep.ok, "slot": None if rep.slot is None else [list(x) if isinstance(x, tuple) else x for x in rep.slot],
            "expected": rep.expected, "found": rep.found}
    _write(dumps(body) if cfg.output_format == "json" else f"{'true' if rep.ok else 'false'}\n", args.output)
    return 0 if rep.ok else 2


def _cmd_decompose(cfg, args):
    nvars = None if args.n is None else args.n + 1
    check_bound = not getattr(args, "no_bound_check", False)
    jobs = [(args.command, _read(path), cfg, args.s, check_bound, nvars) for path in args.inputs]
    if len(jobs) > 1 and args.batch > 1:
        with ProcessPoolExecutor(max_workers=args.batch) as pool:
            results = list(pool.map(_job, jobs))
    else:
        results = [_job(j) for j in jobs]
    code = 0
    outs = []
    for rc, text, err in results:
        if err:
            sys.stderr.write(err)
        outs.append(text)
        code = code or rc
    _write("".join(outs), args.output)
    return code


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
