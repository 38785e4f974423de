"""Certify and re-verify a batch of random nilpotent lattice problems."""

import argparse
import collections
import random
import sys
import time

from nilcert.certify import certify, verify_certificate
from nilcert.randalg import random_problem


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-dim", type=int, default=5)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    by_family = collections.Counter()
    degrees = collections.Counter()
    failures = 0
    start = time.perf_counter()
    for i in range(args.count):
        rp = random_problem(rng, args.max_dim)
        cert = certify(rp.problem)
        bad = verify_certificate(cert, rp.problem)
        by_family[rp.instance.family] += 1
        degrees[cert.minpoly.degree] += 1
        if bad is not None:
            failures += 1
            print(f"[{i}] {rp.instance.family}: {bad}")
    elapsed = time.perf_counter() - start
    print(f"problems: {args.count}  failures: {failures}  time: {elapsed:.2f} s")
    print("families: " + ", ".join(f"{k} {v}" for k, v in sorted(by_family.items())))
    print("minpoly degrees: " + ", ".join(f"{k}: {v}" for k, v in sorted(degrees.items())))
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
