#!/usr/bin/env python3
"""Report the corrected involution at delta = 0: given images, the constructed
image of e_3, block-wise form traces and the resulting generator norms."""

import argparse
import json
import sys

from tlalg.diagrams import AlgebraElement
from tlalg.forms import default_table, diamond_gram, diamond_norm
from tlalg.forms.diamond import ConstructionFailed, construct_image
from tlalg.scalars import as_fraction, real_cyclotomic


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--gammas", nargs="+", default=["1/5", "1/4"])
    p.add_argument("--try-e5", action="store_true", help="attempt e_5 in TL_7 and report the outcome")
    args = p.parse_args()

    f = real_cyclotomic(2)
    table = default_table()
    report = {"images": table.to_json(), "records": {str(k): r.to_json() for k, r in table.records.items()}}
    norms = {}
    for text in args.gammas:
        g = as_fraction(text)
        norms[text] = {
            f"e{i}": str(diamond_norm(AlgebraElement.gen(max(i + 1, 3), i, f), g, table)) for i in (1, 2, 3, 4, 6)
        }
        norms[text]["gram_TL3"] = list(diamond_gram(3, g, table).signature)
        norms[text]["gram_TL5"] = list(diamond_gram(5, g, table).signature)
    report["norms"] = norms
    if args.try_e5:
        known = {i: table.image(i) for i in (1, 2, 3, 4, 6)}
        try:
            img, rec = construct_image(5, 7, known)
            report["e5"] = {"image": str(img), "record": rec.to_json()}
        except ConstructionFailed as exc:
            report["e5"] = {"failed": str(exc)}
    json.dump(report, sys.stdout, indent=2)
    print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
