"""Heights and disk masses of the escaping family z^p - p!.

The roots all have modulus (p!)^(1/p), so for any fixed R the mass of the
zero measure in the closed disk of radius R drops to 0 once p is large,
while M(P_p) = p! keeps growing.

    python scripts/escape_table.py --p 2,3,5,7,11,13 --R 2
"""
import argparse
import csv
import math
import sys

from trace_atlas.experiments import counting_measure, escape_modulus, escaping_family
from trace_atlas.potential import log_mahler
from trace_atlas.realroots import all_roots


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", default="2,3,5,7,11,13")
    ap.add_argument("--R", type=float, default=2.0)
    args = ap.parse_args(argv)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["p", "modulus", "mass_R", "log_mahler", "log_factorial", "H"])
    for p in (int(t) for t in args.p.split(",")):
        P = escaping_family(p)
        roots = all_roots(P)
        lm, _ = log_mahler(P, roots)
        mass = counting_measure(roots).mass_in_disk(args.R)
        w.writerow([p, escape_modulus(p), mass, lm, math.lgamma(p + 1), math.exp(lm / p)])


if __name__ == "__main__":
    main()
