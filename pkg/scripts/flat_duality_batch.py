#!/usr/bin/env python3
"""Flat norm primal vs dual on seeded random Heisenberg 1-currents, exact and float."""
import argparse
import random
import time
from fractions import Fraction

from ruminkit import build_rumin_complex, catalog
from ruminkit.discrete import DiscreteCurrent, Grid, flat_norm_dual, flat_norm_primal, mass, normal_mass


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--half", type=int, default=4, help="grid has 2*half+1 points per axis")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rc = build_rumin_complex(catalog("heisenberg(1)"))
    grid = Grid.centered(rc.alg, Fraction(1, 2), (args.half,) * 3)
    rng = random.Random(args.seed)
    worst = 0.0
    t0 = time.perf_counter()
    for i in range(args.count):
        coeffs = {(grid.index(tuple(rng.randint(1, s - 2) for s in grid.shape)), rng.randrange(2)):
                  Fraction(rng.randint(-8, 8), rng.randint(1, 6)) for _ in range(rng.randint(1, 6))}
        T = DiscreteCurrent(grid, 1, 2, coeffs)
        p, d = flat_norm_primal(rc, grid, T, "exact").value, flat_norm_dual(rc, grid, T, "exact")
        pf, df = flat_norm_primal(rc, grid, T, "float").value, flat_norm_dual(rc, grid, T, "float")
        worst = max(worst, abs(pf - df) / max(abs(pf), 1e-300))
        M, N = mass(T), normal_mass(rc, grid, T)
        flag = "ok" if p == d and p <= M <= N else "MISMATCH"
        print(f"{i:>4}  flat={str(p):>12}  mass={str(M):>8}  normal={str(N):>8}  {flag}")
    print(f"worst float relative gap {worst:.2e}; {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
