"""Period of the linear foliation on the mapping torus of a toral automorphism."""

import argparse
import json
import os
import sys
import tempfile
import time

from nilcert.cli import run


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--matrix", default="[[2,1],[1,1]]", help="integer matrix as JSON")
    ap.add_argument("--precision", default="1e-12")
    ap.add_argument("--orientation", type=int, default=1, choices=(1, -1))
    args = ap.parse_args()
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump({"A": json.loads(args.matrix)}, fh)
    start = time.perf_counter()
    code = run(["torus", fh.name, "--precision", args.precision, "--orientation", str(args.orientation)])
    os.unlink(fh.name)
    print(f"# {time.perf_counter() - start:.3f} s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
