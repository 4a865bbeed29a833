#!/usr/bin/env python3
"""Average small-divisor counts of p-1 against both analytic predictions.

The empirical mean over primes p <= x of #{q | p-1 : q <= (ln x) l**l} is
compared with ln ln T + M (Mertens form) and with sum_{q<=T} 1/(q-1) (the
progression-density form).  The harmonic form is what the data follows; the
Mertens form differs by the convergent constant sum(1/(q-1) - 1/q) ~ 0.77.

Usage: python scripts/density_scan.py [--l 2,3,4] [--decades 4,5,6]
"""

import argparse
import sys
import time

from smallgen.experiments import density_experiment


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--l", default="2,3,4")
    ap.add_argument("--decades", default="4,5,6", help="powers of ten for x")
    args = ap.parse_args()
    l_values = [float(v) for v in args.l.split(",")]
    decades = [int(v) for v in args.decades.split(",")]

    print(f"{'x':>10} {'l':>4} {'T':>12} {'mean':>10} {'lnlnT+M':>9} {'ratio':>7} "
          f"{'sum 1/(q-1)':>12} {'ratio':>7}")
    t0 = time.time()
    for d in decades:
        x = 10**d
        for row in density_experiment(x, l_values):
            print(f"{x:>10} {row.l:>4g} {row.threshold:>12.2f} {row.empirical_mean:>10.6f} "
                  f"{row.prediction:>9.5f} {row.ratio:>7.4f} "
                  f"{row.prediction_harmonic:>12.6f} {row.ratio_harmonic:>7.4f}")
    print(f"total time: {time.time() - t0:.1f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
