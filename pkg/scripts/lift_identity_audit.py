"""Audit of the lift defining identities over a grid of (m, k).

For each chart, draws a seeded corpus of base functions, fields, 1-forms
and (1,1)-tensors and counts how often each identity fails structurally.
With --show, prints one counterexample residual per failing identity.

    python3 scripts/lift_identity_audit.py --instances 25 --show
"""
import argparse
import time

from hamlift.checks import lift_identity_checks


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--k", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--show", action="store_true", help="print a counterexample per failing identity")
    args = ap.parse_args()

    for m in args.m:
        for k in args.k:
            start = time.perf_counter()
            results = lift_identity_checks(m, k, args.instances, args.seed)
            print(f"m={m} k={k}  ({time.perf_counter() - start:.1f} s)")
            for r in results:
                print(f"  {r.name:32} {r.failures:3d}/{r.instances} failing")
                if args.show and r.counterexamples:
                    ex = r.counterexamples[0]
                    print(f"      f = {ex['f']}\n      Z = {ex['Z']}\n      residual = {ex['residual']}")


if __name__ == "__main__":
    main()
