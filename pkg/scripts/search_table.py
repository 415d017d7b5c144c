"""Smallest mean trace and smallest S_m per degree among totally positive
algebraic integers (irreducible records) with bounded trace.

    python scripts/search_table.py --degrees 1,2,3,4,5 --trace-max 10
"""
import argparse
import csv
import sys
import time

from trace_atlas.errors import NoCandidatesError
from trace_atlas.means import fraction_str
from trace_atlas.search import enumerate_totally_positive, minimal_symmetric_mean


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--degrees", default="1,2,3,4,5")
    ap.add_argument("--trace-max", type=int, default=10)
    args = ap.parse_args(argv)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["n", "m", "records", "argmin", "trace", "S_m", "A_n", "floor_attained", "seconds"])
    for n in (int(t) for t in args.degrees.split(",")):
        t0 = time.perf_counter()
        recs = enumerate_totally_positive(n, max(args.trace_max, n))
        for m in range(1, n + 1):
            try:
                best = minimal_symmetric_mean(n, m, args.trace_max, recs)
            except NoCandidatesError:
                w.writerow([n, m, len(recs), "", "", "", "", "", ""])
                continue
            w.writerow([n, m, len(recs), ",".join(map(str, best.coeffs)), best.trace,
                        fraction_str(best.S[m]), fraction_str(best.S[1]), best.floor_attained,
                        round(time.perf_counter() - t0, 3)])


if __name__ == "__main__":
    main()
