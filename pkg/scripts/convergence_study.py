#!/usr/bin/env python3
"""Refinement study of max |D_c D_c w| for a fixed smooth form on heisenberg(1)."""
import argparse
from fractions import Fraction

import numpy as np

from ruminkit import build_rumin_complex, catalog
from ruminkit.discrete import dc_squared_sup

FORMS = {
    0: lambda x: [np.sin(x[0] + 0.3 * x[2]) * np.cos(2 * x[1])],
    1: lambda x: [np.sin(x[0] + 0.3 * x[2]) * np.cos(x[1]), np.exp(0.5 * x[0] - x[1]) * np.cos(x[2])],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", type=int, default=5)
    ap.add_argument("--h0", default="1/4")
    args = ap.parse_args()
    rc = build_rumin_complex(catalog("heisenberg(1)"))
    h0 = Fraction(args.h0)
    # sample points shared by all levels: the coarse lattice inside a small box
    pts = [(a * h0, b * h0, c * h0 ** 2) for a in range(-2, 3) for b in range(-2, 3) for c in range(-4, 5)]
    for k, form in FORMS.items():
        print(f"degree {k}: h, max|D_c D_c w|, ratio to previous level")
        prev = None
        for i in range(args.levels):
            h = h0 / 2 ** i
            s = dc_squared_sup(rc, k, form, h, pts)
            print(f"  {str(h):>6}  {s:.3e}  {'' if prev is None else f'{prev / s:.2f}'}")
            prev = s


if __name__ == "__main__":
    main()
