"""Time named check suites on chosen corpora and print one summary line each.

    python3 scripts/run_suites.py kz-axioms:posets:<=4 span:cats:<=3
    python3 scripts/run_suites.py --all
"""
import argparse
import json
import sys
import time

from kzlift.cli import SuiteConfig, run_suite

ACCEPTANCE_RUNS = [
    ("powerset", "posets:<=4"),
    ("sup-formula", "posets:<=4"),
    ("kz-axioms", "posets:<=4"),
    ("theta", "posets:<=4"),
    ("admissibility", "posets:<=4"),
    ("distlaw-assertions", "posets:<=3"),
    ("distlaw-algebraic", "posets:<=3"),
    ("lift", "posets:<=3"),
    ("lifted-doctrine", "posets:<=3"),
    ("yoneda-roundtrip", "posets:<=3"),
    ("doctrinal-adjunction", "posets:<=3"),
    ("uniqueness", "posets:<=3"),
    ("cocont-equiv", "posets:<=3"),
    ("span", "posets:<=3"),
    ("span", "cats:<=3"),
    ("multiadjoint", "cats:3"),
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("runs", nargs="*", help="suite:corpus pairs")
    ap.add_argument("--all", action="store_true", help="the acceptance-scale runs")
    ap.add_argument("--json", action="store_true", help="one JSON object per run")
    args = ap.parse_args(argv)
    runs = list(ACCEPTANCE_RUNS) if args.all else [tuple(r.split(":", 1)) for r in args.runs]
    if not runs:
        ap.error("give suite:corpus pairs or --all")
    worst = 0
    for suite, corpus in runs:
        t0 = time.perf_counter()
        rep = run_suite(SuiteConfig(suite, corpus))
        dt = time.perf_counter() - t0
        counts = rep.summary()
        if args.json:
            print(json.dumps({"suite": suite, "corpus": corpus, "seconds": round(dt, 2), **counts}), flush=True)
        else:
            print(f"{suite:22} {corpus:12} {dt:8.1f}s  {counts}", flush=True)
        if rep.failures:
            worst = 1
    return worst


if __name__ == "__main__":
    sys.exit(main())
