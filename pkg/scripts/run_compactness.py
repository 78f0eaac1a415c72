#!/usr/bin/env python3
"""Run the covering-number probe and write the JSON report."""
import argparse
import json
from fractions import Fraction

from ruminkit import build_rumin_complex, catalog
from ruminkit.discrete import ProbeConfig, compactness_probe


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--algebra", default="heisenberg(1)")
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--levels", type=int, default=2)
    ap.add_argument("--eps", type=float, default=0.2)
    ap.add_argument("--nu", type=float, default=1.0)
    ap.add_argument("--h", default="1/2")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", help="write the report here instead of stdout")
    args = ap.parse_args()
    rc = build_rumin_complex(catalog(args.algebra))
    cfg = ProbeConfig(samples=args.samples, levels=args.levels, eps=args.eps, nu=args.nu,
                      h=Fraction(args.h), seed=args.seed, timing=True)
    rep = compactness_probe(rc, cfg)
    text = json.dumps(rep.to_json(), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(f"net sizes {rep.net_sizes}; within factor 2: {rep.within_factor(2)}")


if __name__ == "__main__":
    main()
