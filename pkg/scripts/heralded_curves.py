"""Success probability of one heralded global entangling layer vs qubit count, for G = 1, 2, 3."""

import argparse
import sys

from qloq.loqc import curve_csv, heralded_curve, speedup_table

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--N-max", type=int, default=24)
p.add_argument("--speedups", action="store_true", help="also print the speedup table")
args = p.parse_args()

sys.stdout.write(curve_csv(heralded_curve(range(1, args.N_max + 1))))
if args.speedups:
    print()
    sys.stdout.write(speedup_table())
