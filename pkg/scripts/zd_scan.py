"""Box models on Z^d: chosen side k, copies, measured error and the ledger bound.

    python scripts/zd_scan.py --d 2 --p 1/2 --j 1 2 --eps 1/4 1/8
"""

import argparse
import csv
import sys
from fractions import Fraction

from invcorr.amenable import build_zd, product_bernoulli_zd
from invcorr.errors import BudgetExceeded


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--p", type=Fraction, default=Fraction(1, 2))
    ap.add_argument("--j", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--eps", type=Fraction, nargs="+", default=[Fraction(1, 4), Fraction(1, 8)])
    ap.add_argument("--budget", type=int, default=1 << 14)
    args = ap.parse_args(argv)
    m = product_bernoulli_zd(args.d, args.p)
    out = csv.writer(sys.stdout)
    out.writerow(["j", "eps", "k", "copies", "measured_error", "ledger_bound", "met_eps", "k_required"])
    for j in args.j:
        for eps in args.eps:
            try:
                _, z = build_zd(m, args.d, j, eps, args.budget)
            except BudgetExceeded as exc:
                out.writerow([j, eps, "", "", exc.best_error, "", "budget", exc.details.get("k_required")])
                continue
            out.writerow([j, eps, z.k, z.copies, z.measured_error, z.ledger_bound, z.met_eps, z.k_required])


if __name__ == "__main__":
    main()
