"""Decompose a seeded cubic surface of rank 5 and print the configuration:
the 10 rank-2 quadrics in the span of the partials and the 5 planes through
6 of them each."""
import argparse
import time
from dataclasses import dataclass

from tensordec import GF, gen_polynomial_of_rank, generalized_decompose
from tensordec.decompose import recover_hyperplanes
from tensordec.flattenings import derivative_space
from tensordec.varieties import intersect_linear_section, secant_model


@dataclass
class Config:
    p: int = 32003
    seed: int = 0


def run(cfg: Config):
    K = GF(cfg.p)
    F, forms, lam = gen_polynomial_of_rank(3, 3, 5, K, seed=cfg.seed)
    print("F =", F.to_text())
    t0 = time.perf_counter()
    H = derivative_space(F, 1)
    res = intersect_linear_section(secant_model((3,), (2,), 2), H, seed=cfg.seed)
    print(f"section degree {res.degree}, {len(res.points)} simple points")
    planes = recover_hyperplanes(res.points, 5, res.field, seed=cfg.seed)
    for k, (normal, inc) in enumerate(planes):
        print(f"plane {k}: normal {list(normal)} through points {sorted(inc)}")
    dec = generalized_decompose(F, 5, seed=cfg.seed)
    print(f"decomposition ({time.perf_counter() - t0:.2f} s):")
    for (L,), c in zip(dec.forms, dec.coefficients):
        print(f"  {c} * ({', '.join(map(str, L))})^3")
    print("certificate:", dec.certificate.verdict, dec.certificate.notes)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=Config.p)
    ap.add_argument("--seed", type=int, default=Config.seed)
    a = ap.parse_args(argv)
    run(Config(a.p, a.seed))


if __name__ == "__main__":
    main()
