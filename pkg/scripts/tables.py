#!/usr/bin/env python3
"""Print weight / dimension / order tables and the identity checks for catalog algebras."""
import argparse

from ruminkit import build_rumin_complex, catalog, verify_complex


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*",
                    default=["abelian(2)", "abelian(3)", "heisenberg(1)", "heisenberg(2)", "engel"])
    args = ap.parse_args()
    for name in args.names:
        rc = build_rumin_complex(catalog(name))
        rep = verify_complex(rc)
        print(f"{name}: Q = {rc.Q}, delta = {rc.delta}, identities {'ok' if rep.ok else rep.failed()}")
        for k in range(rc.n + 1):
            orders = rc.dc_orders(k) if k < rc.n else "-"
            print(f"  k={k}  dim={rc.dim(k):<3} weights={rc.weights(k)}  orders={orders}  basis={rc.e0_labels(k)}")


if __name__ == "__main__":
    main()
