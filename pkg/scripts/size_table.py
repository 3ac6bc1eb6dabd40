"""Word length and certified error of the adaptive search against the fallback size.

    python scripts/size_table.py --j 1 2 3 --eps 1/2 1/4 1/8 1/16 > sizes.csv
"""

import argparse
import csv
import sys
import time
from fractions import Fraction

from invcorr.inverse import build, fallback_params
from invcorr.measure import bernoulli, cycle_system, empirical, markov, mixture, pushforward

ORACLES = {
    "bernoulli(1/2)": bernoulli(Fraction(1, 2)),
    "bernoulli(1/3)": bernoulli(Fraction(1, 3)),
    "markov(1/3,2/3)": markov(Fraction(1, 3), Fraction(2, 3)),
    "mixture": mixture([(Fraction(1, 2), bernoulli(0)), (Fraction(1, 2), bernoulli(1))]),
    "empirical(0110)": empirical("0110"),
    "cycle(100)": pushforward(cycle_system("100")),
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--j", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--eps", type=Fraction, nargs="+", default=[Fraction(1, 4), Fraction(1, 8)])
    args = ap.parse_args(argv)
    out = csv.writer(sys.stdout)
    out.writerow(["oracle", "j", "eps", "k", "l", "length", "certified_error",
                  "fallback_length_digits", "seconds"])
    for name, m in ORACLES.items():
        for j in args.j:
            for eps in args.eps:
                t0 = time.perf_counter()
                r = build(m, j, eps)
                dt = time.perf_counter() - t0
                fb = fallback_params(j, eps)
                out.writerow([name, j, eps, r.params.k, r.params.l, len(r.word),
                              r.certified_error, len(str(fb.length)), f"{dt:.3f}"])


if __name__ == "__main__":
    main()
