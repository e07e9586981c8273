"""Tabulate the admissible ranks h >= n+2 for cubics in n+1 variables and time the
generalized decomposition at the largest admissible rank."""
import argparse
import math
import time
from dataclasses import dataclass

from tensordec import GF, gen_polynomial_of_rank, generalized_decompose
from tensordec.decompose import bound_ok, cubic_bound, verify_decomposition


@dataclass
class Config:
    n_max: int = 6
    p: int = 32003
    seed: int = 0
    run: bool = True


def max_rank(n):
    h = n + 2
    while bound_ok(n, 3, h + 1):
        h += 1
    return h if bound_ok(n, 3, h) else None


def run(cfg: Config):
    K = GF(cfg.p)
    print(f"{'n':>3} {'bound':>8} {'h':>3} {'points':>7} {'time (s)':>9}  ok")
    for n in range(1, cfg.n_max + 1):
        h = max_rank(n)
        if h is None:
            print(f"{n:>3} {cubic_bound(n):>8.2f}   -")
            continue
        row = f"{n:>3} {cubic_bound(n):>8.2f} {h:>3} {math.comb(h, n):>7}"
        if cfg.run:
            F, _, _ = gen_polynomial_of_rank(n, 3, h, K, seed=cfg.seed)
            t0 = time.perf_counter()
            dec = generalized_decompose(F, h, seed=cfg.seed)
            row += f" {time.perf_counter() - t0:>9.2f}  {bool(verify_decomposition(F, dec))}"
        print(row)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=Config.n_max)
    ap.add_argument("--p", type=int, default=Config.p)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--no-run", action="store_true", help="only print the table of bounds")
    a = ap.parse_args(argv)
    run(Config(a.n_max, a.p, a.seed, not a.no_run))


if __name__ == "__main__":
    main()
