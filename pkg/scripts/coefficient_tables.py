#!/usr/bin/env python3
"""Dump c_{n,i} and lambda_{n,i} tables over a grid of gamma values as CSV.

    python3 scripts/coefficient_tables.py --gammas 1/9 1/5 1/4 --levels 12 --l 2 3 4 > tables.csv
"""

import argparse
import csv
import sys

from tlalg.scalars import as_fraction
from tlalg.traces import classify_gamma, generic_coeffs, rou_lambda


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--gammas", nargs="+", default=["1/9", "1/5", "1/4"])
    p.add_argument("--levels", type=int, default=12)
    p.add_argument("--l", type=int, nargs="*", default=[2, 3, 4, 5])
    args = p.parse_args()

    out = csv.writer(sys.stdout)
    out.writerow(["gamma", "table", "l", "n", "i", "value", "regime"])
    for text in args.gammas:
        gamma = as_fraction(text)
        regime = classify_gamma(gamma, levels=args.levels).regime
        for n, i, v in generic_coeffs(gamma, args.levels).rows():
            out.writerow([gamma, "c", "", n, i, v, regime])
        for l in args.l:
            regime = classify_gamma(gamma, l, args.levels).regime
            for n, i, v in rou_lambda(gamma, l, args.levels).rows():
                out.writerow([gamma, "lambda", l, n, i, v, regime])
    return 0


if __name__ == "__main__":
    sys.exit(main())
