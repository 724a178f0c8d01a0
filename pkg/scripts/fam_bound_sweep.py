"""How the Fam index bound changes multiadjoint verdicts over a category corpus.

For every functor between corpus members, run the universal-family check at
each bound and count multiadjoint / not / inconclusive.  "none" is the
unbounded check, so its inconclusive count is always zero.

    python3 scripts/fam_bound_sweep.py --corpus 'cats:<=2' --bounds 1 2 3 none
"""
import argparse
import json
import time
from collections import Counter

from kzlift.core2cat import all_functors
from kzlift.corpus import generate_corpus
from kzlift.fam import check_left_multiadjoint


def sweep(corpus: str, bounds: list) -> list[dict]:
    cats = generate_corpus(corpus)
    functors = [F for A in cats for B in cats for F in all_functors(A, B)]
    rows = []
    for bound in bounds:
        t0 = time.perf_counter()
        counts = Counter(check_left_multiadjoint(F, bound=bound).status for F in functors)
        rows.append({"corpus": corpus, "bound": bound, "functors": len(functors),
                     "seconds": round(time.perf_counter() - t0, 2), **dict(sorted(counts.items()))})
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--corpus", default="cats:<=2")
    ap.add_argument("--bounds", nargs="+", default=["1", "2", "3", "none"])
    ap.add_argument("--json", action="store_true", help="one JSON object per bound")
    args = ap.parse_args(argv)
    bounds = [None if b == "none" else int(b) for b in args.bounds]
    for row in sweep(args.corpus, bounds):
        if args.json:
            print(json.dumps(row))
        else:
            extra = {k: v for k, v in row.items() if k not in ("corpus", "bound", "functors", "seconds")}
            print(f"bound={str(row['bound']):5} functors={row['functors']:6} {row['seconds']:6.1f}s  {extra}")


if __name__ == "__main__":
    main()
