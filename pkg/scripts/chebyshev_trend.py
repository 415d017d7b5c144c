"""Convergence trend of the Chebyshev zero measures towards the arcsine law.

Prints one CSV row per degree: KS distance (should equal 1/(2n)), exact
moment gaps, the discrete energy at R and its distance from the limit value
0, plus the generalized Mahler measure on [0, 4] (exactly 1).

    python scripts/chebyshev_trend.py --n 16,32,64,128,256 --R 5
"""
import argparse
import csv
import math
import sys
import time

from trace_atlas.experiments import CSV_HEADER, counting_measure, weakstar_distance
from trace_atlas.intpoly import chebyshev_shifted, discriminant
from trace_atlas.potential import CompactSetModel, discrete_energy, generalized_mahler
from trace_atlas.realroots import all_roots


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="16,32,64,128,256")
    ap.add_argument("--R", type=float, default=5.0)
    args = ap.parse_args(argv)
    interval = CompactSetModel.interval(0, 4)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(list(CSV_HEADER) + ["ks_times_2n", "energy", "energy_from_disc", "mahler_interval", "seconds"])
    last_ks = math.inf
    for n in (int(t) for t in args.n.split(",")):
        t0 = time.perf_counter()
        t = chebyshev_shifted(n)
        roots = all_roots(t)
        mu = counting_measure(roots)
        rep = weakstar_distance(mu, interval, radii=(args.R,))
        energy = discrete_energy(mu, args.R)
        # monic with all roots in the disk: I = -log|disc| / n^2
        exact = -math.log(abs(discriminant(t))) / n ** 2 if n > 1 else 0.0
        m_e = generalized_mahler(t, roots, interval)
        w.writerow(rep.csv_row() + [rep.ks * 2 * n, energy, exact, m_e, round(time.perf_counter() - t0, 3)])
        if rep.ks > last_ks:
            print(f"warning: KS increased at n={n}", file=sys.stderr)
        last_ks = rep.ks


if __name__ == "__main__":
    main()
