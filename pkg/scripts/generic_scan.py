"""Empirical pattern frequencies along a generic-point prefix.

Prints, for growing prefix lengths n, the worst deviation over all patterns of
length at most j between the prefix frequency and the measure.

    python scripts/generic_scan.py --measure "(markov 1/3 2/3)" --j 2 --points 12
"""

import argparse
import csv
import sys
from fractions import Fraction

from invcorr.generic import bits
from invcorr.specfile import parse_spec
from invcorr.words import patterns_upto, prefix_frequency


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--measure", default="(bernoulli 1/3)", help="measure as an s-expression")
    ap.add_argument("--j", type=int, default=2)
    ap.add_argument("--points", type=int, default=10, help="number of doubling steps")
    ap.add_argument("--start", type=int, default=64)
    args = ap.parse_args(argv)
    m = parse_spec(args.measure)
    lengths = [args.start << i for i in range(args.points)]
    x = bits(m, lengths[-1] + args.j)
    pats = [s for s in patterns_upto(args.j) if s]
    out = csv.writer(sys.stdout)
    out.writerow(["n", "worst_pattern", "max_deviation", "max_deviation_float"])
    for n in lengths:
        dev = {s: abs(prefix_frequency(x, s, n) - m.query(s, Fraction(1, 10**9))) for s in pats}
        worst = max(dev, key=dev.get)
        out.writerow([n, worst, dev[worst], f"{float(dev[worst]):.6f}"])


if __name__ == "__main__":
    main()
