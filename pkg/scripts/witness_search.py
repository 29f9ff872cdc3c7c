#!/usr/bin/env python3
"""Search for null pairs with a nonzero sum norm across l and gamma.

For each (l, gamma) the result is one of: a certified pair (and whether its
sum norm equals 2(-1)^l/[l-1] c_{l+1,1}), NotFound within the degree bound,
or NoWitness at the Jones point gamma = delta^-2.
"""

import argparse
import json
import sys
import time

from tlalg.forms import indefiniteness_witness
from tlalg.scalars import as_fraction


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--l", type=int, nargs="+", default=[2, 3, 4, 5])
    p.add_argument("--gammas", nargs="+", default=["1/9", "1/5", "1/4"])
    p.add_argument("--degree-bound", type=int, default=2)
    args = p.parse_args()

    rows = []
    for l in args.l:
        for text in args.gammas:
            start = time.perf_counter()
            res = indefiniteness_witness(l, as_fraction(text), args.degree_bound)
            row = {"kind": type(res).__name__, **res.to_json()}
            row["seconds"] = round(time.perf_counter() - start, 3)
            rows.append(row)
    json.dump(rows, sys.stdout, indent=2)
    print()
    return 0 if all(r["kind"] != "NotFound" for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
